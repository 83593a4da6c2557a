import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spdplus import matcore
from spdplus.errors import (
    AsymmetryExceedsTolerance,
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    SplitOutOfRange,
)
from spdplus.matcore import Definiteness

from conftest import random_pd

seeds = st.integers(0, 2**32 - 1)
fields = st.booleans()


def _gen(seed):
    return np.random.default_rng(seed)


# validate_hermitian


def test_validate_identity():
    H = matcore.validate_hermitian([[1, 0], [0, 1]])
    np.testing.assert_array_equal(H.data, np.eye(2))
    assert H.field == "real" and H.dim == 2


def test_validate_symmetrizes_small_asymmetry():
    H = matcore.validate_hermitian([[1, 2 + 1e-14], [2, 3]], tol=1e-12)
    np.testing.assert_allclose(H.data, [[1, 2], [2, 3]], rtol=0, atol=1e-14)
    assert H.data[0, 1] == H.data[1, 0]


def test_validate_rejects_asymmetry():
    with pytest.raises(AsymmetryExceedsTolerance):
        matcore.validate_hermitian([[1, 2], [0, 1]], tol=1e-12)


@pytest.mark.parametrize("raw", [[1, 2, 3], [[1, 2, 3], [4, 5, 6]], np.zeros((0, 0))])
def test_validate_rejects_non_square(raw):
    with pytest.raises(NotSquare):
        matcore.validate_hermitian(raw)


def test_validate_complex_diagonal_is_real():
    H = matcore.validate_hermitian([[2 + 1e-15j, 1j], [-1j, 3]])
    assert H.field == "complex"
    assert np.all(H.data.diagonal().imag == 0)
    np.testing.assert_array_equal(H.data, H.data.conj().T)


# cholesky


def test_cholesky_2x2():
    H = np.array([[4.0, 2.0], [2.0, 5.0]])
    R = matcore.cholesky(H)
    np.testing.assert_allclose(R.T @ R, H, rtol=1e-15)
    np.testing.assert_allclose(R, [[2, 1], [0, 2]], rtol=1e-15)


def test_cholesky_identity():
    np.testing.assert_array_equal(matcore.cholesky(np.eye(3)), np.eye(3))


def test_cholesky_indefinite():
    # characteristic polynomial l^2 - 2l - 3 has roots 3 and -1
    assert sorted(np.roots([1, -2, -3])) == pytest.approx([-1, 3])
    with pytest.raises(NotPositiveDefinite) as info:
        matcore.cholesky([[1, 2], [2, 1]])
    assert info.value.pivot == 1


def test_cholesky_singular_reports_pivot():
    with pytest.raises(NotPositiveDefinite) as info:
        matcore.cholesky(np.diag([1.0, 2.0, 0.0]))
    assert info.value.pivot == 2


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=st.integers(1, 12), complex_field=fields)
def test_cholesky_round_trip(seed, n, complex_field):
    H = random_pd(_gen(seed), n, 1e6, complex_field)
    R = matcore.cholesky(H)
    assert np.allclose(np.tril(R, -1), 0)
    assert np.all(R.diagonal().real > 0)
    assert np.linalg.norm(R.conj().T @ R - H) <= 1e-12 * np.linalg.norm(H)


# eigh


def test_eigh_diagonal():
    spec = matcore.eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(spec.eigenvalues, [1, 2, 3])


def test_eigh_2x2():
    # lambda^2 - 4 lambda + 3
    expected = np.sort(np.roots([1, -4, 3]))
    spec = matcore.eigh([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(spec.eigenvalues, expected, rtol=1e-15)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_eigh_identity(n):
    np.testing.assert_array_equal(matcore.eigh(np.eye(n)).eigenvalues, np.ones(n))


def test_eigh_complex_2x2():
    # [[1, i], [-i, 1]] has eigenvalues 0 and 2
    spec = matcore.eigh([[1, 1j], [-1j, 1]])
    np.testing.assert_allclose(spec.eigenvalues, [0, 2], atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=st.integers(1, 12), complex_field=fields)
def test_eigh_spectrum_invariants(seed, n, complex_field):
    gen = _gen(seed)
    H = gen.standard_normal((n, n))
    if complex_field:
        H = H + 1j * gen.standard_normal((n, n))
    H = matcore.hermitian_part(H)
    spec = matcore.eigh(H)
    lam, V = spec.eigenvalues, spec.vectors
    norm = np.linalg.norm(H)
    assert np.all(np.diff(lam) >= 0)
    assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-13 * n
    assert np.linalg.norm((V * lam) @ V.conj().T - H) <= 1e-11 * norm
    assert np.max(np.abs(H @ V - V * lam)) <= 1e-13 * norm
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(H), atol=1e-13 * norm)


@settings(max_examples=25, deadline=None)
@given(diag=st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=10))
def test_eigh_diagonal_exact(diag):
    lam = matcore.eigh(np.diag(diag)).eigenvalues
    np.testing.assert_array_equal(lam, np.sort(diag))


# gen_eigvals / simultaneous_diagonalizer


def test_gen_eigvals_diagonal():
    lam = matcore.gen_eigvals(np.diag([1.0, 4.0]), np.diag([2.0, 2.0]))
    np.testing.assert_allclose(lam, [0.5, 2.0], rtol=1e-15)


def test_gen_eigvals_equal_arguments(gen):
    A = random_pd(gen, 5)
    np.testing.assert_allclose(matcore.gen_eigvals(A, A), np.ones(5), rtol=1e-12)


def test_gen_eigvals_pencil_2x2():
    A = np.array([[2.0, 0.0], [0.0, 1.0]])
    B = np.array([[1.0, 1.0], [1.0, 2.0]])
    # det(B - l A) = (1 - 2l)(2 - l) - 1 = 2 l^2 - 5 l + 1
    expected = np.array([(5 - math.sqrt(17)) / 4, (5 + math.sqrt(17)) / 4])
    for lam in expected:
        assert abs(np.linalg.det(B - lam * A)) < 1e-14
    np.testing.assert_allclose(matcore.gen_eigvals(A, B), expected, rtol=1e-14)


def test_gen_eigvals_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        matcore.gen_eigvals(np.eye(2), np.eye(3))


def test_gen_eigvals_requires_pd_first_argument():
    with pytest.raises(NotPositiveDefinite):
        matcore.gen_eigvals(np.diag([1.0, -1.0]), np.eye(2))


def test_simultaneous_diagonalizer_diagonal():
    X, D = matcore.simultaneous_diagonalizer(np.diag([1.0, 4.0]), np.diag([2.0, 12.0]))
    np.testing.assert_allclose(X, np.diag([1.0, 0.5]), atol=1e-15)
    np.testing.assert_allclose(D, np.diag([2.0, 3.0]), rtol=1e-15)


def test_simultaneous_diagonalizer_identity_sorts():
    X, D = matcore.simultaneous_diagonalizer(np.eye(3), np.diag([5.0, 1.0, 3.0]))
    np.testing.assert_array_equal(D, np.diag([1.0, 3.0, 5.0]))
    np.testing.assert_array_equal(np.abs(X), np.eye(3)[[1, 2, 0]])


def test_simultaneous_diagonalizer_pencil_2x2():
    A = np.array([[2.0, 0.0], [0.0, 1.0]])
    B = np.array([[1.0, 1.0], [1.0, 2.0]])
    X, D = matcore.simultaneous_diagonalizer(A, B)
    assert np.linalg.norm(X @ A @ X.T - np.eye(2)) <= 1e-10
    assert np.linalg.norm(X @ B @ X.T - D) <= 1e-10
    np.testing.assert_allclose(np.diag(D), matcore.gen_eigvals(A, B))


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=st.integers(1, 12), complex_field=fields)
def test_simultaneous_diagonalizer_residuals(seed, n, complex_field):
    gen = _gen(seed)
    A = random_pd(gen, n, 1e3, complex_field)
    B = matcore.hermitian_part(
        gen.standard_normal((n, n)) + (1j * gen.standard_normal((n, n)) if complex_field else 0)
    )
    X, D = matcore.simultaneous_diagonalizer(A, B)
    scale = max(np.linalg.norm(A), np.linalg.norm(B))
    assert np.linalg.norm(X @ A @ X.conj().T - np.eye(n)) <= 1e-10 * scale
    assert np.linalg.norm(X @ B @ X.conj().T - D) <= 1e-10 * scale
    lam = matcore.gen_eigvals(A, B)
    reference = np.sort(np.linalg.eigvals(np.linalg.solve(A, B)).real)
    np.testing.assert_allclose(lam, reference, rtol=1e-10, atol=1e-10 * np.max(np.abs(lam)))


# partition / schur_complement


def test_partition_diagonal():
    P = matcore.partition(np.diag([1.0, 2.0, 3.0]), 2)
    np.testing.assert_array_equal(P.B11, np.diag([1.0, 2.0]))
    np.testing.assert_array_equal(P.B12, np.zeros((2, 1)))
    np.testing.assert_array_equal(P.B22, [[3.0]])


def test_partition_read_off():
    P = matcore.partition([[2.0, 1.0], [1.0, 1.0]], 1)
    np.testing.assert_array_equal(P.B11, [[2.0]])
    np.testing.assert_array_equal(P.B12, [[1.0]])
    np.testing.assert_array_equal(P.B22, [[1.0]])


def test_partition_full_split(gen):
    B = random_pd(gen, 4)
    P = matcore.partition(B, 4)
    np.testing.assert_array_equal(P.B11, B)
    assert P.B12.shape == (4, 0) and P.B22.shape == (0, 0)
    np.testing.assert_array_equal(P.assemble(), B)


@pytest.mark.parametrize("m", [0, 4])
def test_partition_out_of_range(m):
    with pytest.raises(SplitOutOfRange):
        matcore.partition(np.eye(3), m)


def test_schur_complement_2x2():
    S = matcore.schur_complement(matcore.partition([[2.0, 1.0], [1.0, 1.0]], 1))
    np.testing.assert_allclose(S, [[0.5]], rtol=1e-15)


def test_schur_complement_diagonal():
    S = matcore.schur_complement(matcore.partition(np.diag([7.0, 3.0]), 1))
    np.testing.assert_array_equal(S, [[3.0]])


@pytest.mark.parametrize("m", [1, 2, 4])
def test_schur_complement_identity(m):
    S = matcore.schur_complement(matcore.partition(np.eye(5), m))
    np.testing.assert_array_equal(S, np.eye(5 - m))


def test_schur_complement_singular_block():
    with pytest.raises(NotPositiveDefinite):
        matcore.schur_complement(matcore.partition(np.diag([0.0, 1.0]), 1))


def test_schur_complement_of_pd_is_pd(gen):
    for _ in range(500):
        n = int(gen.integers(2, 9))
        B = random_pd(gen, n, 1e4, bool(gen.integers(2)))
        S = matcore.schur_complement(matcore.partition(B, int(gen.integers(1, n))))
        assert matcore.classify_definiteness(S) is Definiteness.POSITIVE_DEFINITE


# loewner order / definiteness


def test_loewner_examples():
    assert matcore.loewner_leq(np.eye(2), np.diag([2.0, 3.0]))
    assert not matcore.loewner_leq(np.diag([1.0, 3.0]), np.diag([2.0, 2.0]))
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert matcore.loewner_leq(A, A)


def test_loewner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        matcore.loewner_leq(np.eye(2), np.eye(3))


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(1, 8), complex_field=fields)
def test_loewner_partial_order(seed, n, complex_field):
    gen = _gen(seed)
    A = random_pd(gen, n, 1e3, complex_field)
    P = random_pd(gen, n, 1e3, complex_field)
    Q = random_pd(gen, n, 1e3, complex_field)
    assert matcore.loewner_leq(A, A)
    assert matcore.loewner_leq(A, A + P)
    assert matcore.loewner_leq(A + P, A + P + Q)
    assert matcore.loewner_leq(A, A + P + Q)
    assert not matcore.loewner_leq(A + P, A)


def test_loewner_antisymmetry_up_to_tolerance(gen):
    A = random_pd(gen, 4)
    tol = matcore.TOL_ORDER
    scale = max(1.0, np.linalg.norm(A))
    B = A + 0.1 * tol * np.eye(4)
    assert matcore.loewner_leq(A, B) and matcore.loewner_leq(B, A)
    assert np.linalg.norm(A - B) <= 4 * tol * scale


@pytest.mark.parametrize(
    "H, kind",
    [
        (np.eye(2), Definiteness.POSITIVE_DEFINITE),
        (np.diag([1.0, 0.0]), Definiteness.POSITIVE_SEMIDEFINITE_SINGULAR),
        (np.diag([1.0, -1.0]), Definiteness.NOT_PSD),
    ],
)
def test_classify_definiteness(H, kind):
    assert matcore.classify_definiteness(H) is kind
