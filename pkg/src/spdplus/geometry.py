"""Affine-invariant distance on the positive definite cone and its
extension to matrices of different dimensions.

For ``A`` of size m and ``B`` of size n with m <= n, write ``B11`` for the
leading m x m block of ``B`` and ``lam_j`` for the eigenvalues of
``A^{-1} B11``. The distance from ``A`` to the m-dimensional ellipsoids
inside ``E_B`` and the distance from ``B`` to the n-dimensional ellipsoids
containing ``E_A`` coincide and equal ``sqrt(sum_j max(0, log lam_j)^2)``.
The functions below compute that value and the matrices attaining both
infima.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from . import matcore
from .errors import DimensionMismatch, FirstArgumentLarger, NotPSD
from .matcore import Definiteness, as_hermitian, hermitian_part

TOL_TIE = 1e-12


@dataclass(frozen=True)
class DistanceResult:
    value: float
    pencil_eigenvalues: np.ndarray
    contributing_count: int
    finite: bool = True


@dataclass(frozen=True)
class Witness:
    """An optimal matrix in original coordinates.

    ``reduction`` maps names to the congruence transforms that take the
    problem to the diagonal form in which the optimum was constructed.
    """

    optimum: np.ndarray
    achieved: float
    reduction: dict = field(default_factory=dict)


class ExtendedDistance(NamedTuple):
    lower_set_value: float
    upper_set_value: float


class PythagoreanSplit(NamedTuple):
    forward: float
    backward: float
    total: float


def _contributing(eigvals):
    # log(lam) > TOL_TIE, written without taking logs of non-positive values
    return eigvals > math.exp(TOL_TIE)


def _truncated_log_norm(eigvals):
    mask = _contributing(eigvals)
    logs = np.log(eigvals[mask])
    return math.sqrt(float(np.sum(logs * logs))), int(np.count_nonzero(mask))


def _ordered_pair(A, B):
    A, B = as_hermitian(A), as_hermitian(B)
    m, n = A.shape[0], B.shape[0]
    if m > n:
        raise FirstArgumentLarger(
            f"first argument has dimension {m} > second argument dimension {n}"
        )
    return A, B, m


def delta2(A, B):
    """Riemannian distance ``sqrt(sum_j log^2 lam_j(A^{-1} B))``."""
    A, B = as_hermitian(A), as_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimensions differ: {A.shape[0]} vs {B.shape[0]}")
    matcore.cholesky(B)
    if A.shape[0] == 1:
        matcore.cholesky(A)
        return _scalar_log_ratio(A[0, 0].real, B[0, 0].real)
    logs = np.log(matcore.gen_eigvals(A, B))
    return math.sqrt(float(np.sum(logs * logs)))


def _scalar_log_ratio(a, b):
    """``|log(b / a)|`` without the cancellation of ``log`` near 1."""
    ratio = b / a
    if 0.5 <= ratio <= 2.0:
        # b - a is exact here
        return abs(math.log1p((b - a) / a))
    return abs(math.log(ratio))


def delta2_plus(A, B):
    """Distance between ``A`` (m x m) and ``B`` (n x n), m <= n.

    Depends on ``B`` only through its leading m x m block. Pencil eigenvalues
    count as contributing when ``log lam_j > 1e-12``.

    Returns
    -------
    DistanceResult
    """
    A, B, m = _ordered_pair(A, B)
    matcore.cholesky(B)
    lam = matcore.gen_eigvals(A, B[:m, :m])
    value, k = _truncated_log_norm(lam)
    return DistanceResult(value, lam, k, True)


def dist_to_contained_set(A, B):
    """Distance from ``A`` to ``{H : B11 ⪯ H}`` together with the minimizer.

    With ``X A X* = I`` and ``X B11 X* = D``, the minimizer is
    ``X^{-1} diag(max(lam_j, 1)) X^{-*}``.
    """
    A, B, m = _ordered_pair(A, B)
    result = delta2_plus(A, B)
    lam = result.pencil_eigenvalues

    X, _ = matcore.simultaneous_diagonalizer(A, B[:m, :m])
    h = np.where(_contributing(lam), lam, 1.0)
    X_inv = np.linalg.inv(X)
    H0 = hermitian_part((X_inv * h) @ X_inv.conj().T)

    reduction = {"X": X}
    if B.shape[0] > m:
        R22 = matcore.cholesky(B[m:, m:])
        reduction["Y"] = np.linalg.inv(R22).conj().T
    return result, Witness(H0, delta2(A, H0), reduction)


def dist_to_containing_set(A, B):
    """Distance from ``B`` to ``{G : G11 ⪯ A}`` together with the minimizer.

    The problem is carried to ``A = D^{-1}``, ``B = I`` by the congruence
    ``Z1 L`` where ``L`` eliminates the off-diagonal block of ``B`` and
    ``Z1 = blockdiag(D^{-1/2} X, Y1)``. There the minimizer is diagonal with
    entries ``1/lam_j`` for contributing ``j <= m`` and 1 elsewhere.
    """
    A, B, m = _ordered_pair(A, B)
    n = B.shape[0]
    result = delta2_plus(A, B)
    lam = result.pencil_eigenvalues

    P = matcore.partition(B, m)
    X, _ = matcore.simultaneous_diagonalizer(A, P.B11)
    X1 = X / np.sqrt(lam)[:, None]

    L = np.eye(n, dtype=B.dtype)
    Y1 = np.eye(0, dtype=B.dtype)
    if n > m:
        R11 = matcore.cholesky(P.B11)
        # B12* B11^{-1}
        K = solve_triangular(
            R11, solve_triangular(R11, P.B12, trans="C", lower=False), lower=False
        ).conj().T
        L[m:, :m] = -K
        Rs = matcore.cholesky(matcore.schur_complement(P))
        Y1 = np.linalg.inv(Rs).conj().T

    Z1 = np.zeros((n, n), dtype=np.result_type(X1, Y1, B))
    Z1[:m, :m] = X1
    Z1[m:, m:] = Y1

    g = np.ones(n)
    g[:m] = np.where(_contributing(lam), 1.0 / lam, 1.0)
    M_inv = np.linalg.inv(Z1 @ L)
    G0 = hermitian_part((M_inv * g) @ M_inv.conj().T)

    reduction = {"L": L, "Z1": Z1, "X": X}
    return result, Witness(G0, delta2(G0, B), reduction)


def delta2_plus_extended(A, B, tol=matcore.TOL_PD):
    """Both point-to-set distances for positive semidefinite arguments.

    A singular ``A`` puts both at infinity. A positive definite ``A`` with
    singular ``B`` keeps a finite distance to the contained set while the
    distance from ``B`` to the containing set is infinite.
    """
    A, B, m = _ordered_pair(A, B)
    kind_a = matcore.classify_definiteness(A, tol)
    kind_b = matcore.classify_definiteness(B, tol)
    for name, kind in (("A", kind_a), ("B", kind_b)):
        if kind is Definiteness.NOT_PSD:
            raise NotPSD(f"{name} is not positive semidefinite")

    if kind_a is not Definiteness.POSITIVE_DEFINITE:
        return ExtendedDistance(math.inf, math.inf)
    if kind_b is not Definiteness.POSITIVE_DEFINITE:
        lam = matcore.gen_eigvals(A, B[:m, :m], tol)
        value, _ = _truncated_log_norm(lam)
        return ExtendedDistance(value, math.inf)
    value = delta2_plus(A, B).value
    return ExtendedDistance(value, value)


def pythagorean_split(A, B):
    """Split ``delta2(A, B)`` for equal dimensions.

    ``forward**2 + backward**2 == total**2`` where ``forward`` and
    ``backward`` are ``delta2_plus`` in the two argument orders.
    """
    A, B = as_hermitian(A), as_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimensions differ: {A.shape[0]} vs {B.shape[0]}")
    return PythagoreanSplit(
        delta2_plus(A, B).value, delta2_plus(B, A).value, delta2(A, B)
    )
