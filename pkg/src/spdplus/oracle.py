"""Brute-force verification of the closed-form distances.

Sampled distances are evaluated in batch through LAPACK (``numpy.linalg``),
independently of the Jacobi solver that backs :mod:`spdplus.geometry`.
Randomness comes only from :class:`SeededRng` values.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import geometry, matcore
from .errors import (
    DimensionMismatch,
    SamplingFailure,
    SingularTransform,
    SplitOutOfRange,
)
from .matcore import as_hermitian
from .matrixio import encode_float, matrix_to_dict

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeededRng:
    """Seed for a Philox4x64-10 counter-based stream.

    The Philox key is ``seed | stream << 64`` and the counter starts at zero,
    so a given ``(seed, stream)`` yields the same draws everywhere.
    """

    seed: int
    stream: int = 0

    def generator(self):
        key = (self.seed & _MASK64) | ((self.stream & _MASK64) << 64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, k):
        return SeededRng(self.seed, (self.stream * 1_000_003 + k + 1) & _MASK64)


@dataclass(frozen=True)
class VerificationReport:
    formula_value: float
    best_sampled: float
    sample_count: int
    witness_gap: float
    violations: int
    witness_member: bool = True
    tol: float = 1e-9

    @property
    def passed(self):
        return (
            self.violations == 0
            and self.witness_member
            and self.witness_gap <= self.tol * (1.0 + self.formula_value)
        )

    def to_dict(self):
        return {
            "formula_value": encode_float(self.formula_value),
            "best_sampled": encode_float(self.best_sampled),
            "sample_count": self.sample_count,
            "witness_gap": encode_float(self.witness_gap),
            "violations": self.violations,
            "witness_member": self.witness_member,
            "passed": self.passed,
        }


# ---------------------------------------------------------------------------
# random matrices


def _normal(gen, shape, complex_field):
    if complex_field:
        z = gen.standard_normal(shape + (2,))
        return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)
    return gen.standard_normal(shape)


def _ct(M):
    return np.swapaxes(M.conj(), -1, -2)


def random_unitary(gen, n, complex_field=False, size=None):
    """Haar-distributed orthogonal/unitary matrices via phase-corrected QR."""
    shape = (n, n) if size is None else (size, n, n)
    Q, R = np.linalg.qr(_normal(gen, shape, complex_field))
    d = np.diagonal(R, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return Q * phase[..., None, :]


def random_pd(gen, n, cond=1e3, complex_field=False, scale=(0.1, 10.0)):
    """``Q diag(d) Q*`` with ``d`` log-uniform in ``c * [1, cond]``.

    The overall factor ``c`` is log-uniform in ``scale``; with ``cond = 1``
    the result is a scalar multiple of the identity up to rounding.
    """
    Q = random_unitary(gen, n, complex_field)
    c = math.exp(gen.uniform(math.log(scale[0]), math.log(scale[1])))
    d = c * np.exp(gen.uniform(0.0, math.log(cond), n))
    return matcore.hermitian_part((Q * d) @ Q.conj().T)


def random_hermitian(gen, n, complex_field=False):
    return matcore.hermitian_part(_normal(gen, (n, n), complex_field))


def random_nonsingular(gen, n, cond=1e3, complex_field=False):
    """Random matrix with condition number exactly up to ``cond``."""
    U = random_unitary(gen, n, complex_field)
    V = random_unitary(gen, n, complex_field)
    s = np.exp(gen.uniform(0.0, math.log(cond), n))
    s[0], s[-1] = 1.0, cond if n > 1 else 1.0
    return (U * s) @ V.conj().T


# ---------------------------------------------------------------------------
# batched LAPACK helpers


def _batched_delta2(P, Qs):
    """delta2(P, Q) for a fixed PD ``P`` and a stack of PD ``Qs``."""
    Linv = np.linalg.inv(np.linalg.cholesky(P))
    C = Linv @ Qs @ Linv.conj().T
    lam = np.linalg.eigvalsh((C + _ct(C)) / 2)
    logs = np.log(lam)
    return np.sqrt(np.sum(logs * logs, axis=-1))


def _lambda_min(Ms):
    return np.linalg.eigvalsh((Ms + _ct(Ms)) / 2)[..., 0]


def _scale(*Ms):
    return max([1.0] + [float(np.max(np.linalg.norm(M, axis=(-2, -1)))) for M in Ms])


# ---------------------------------------------------------------------------
# samplers


def sample_omega_minus(B, m, rng, count, tol=1e-10, max_rank=None):
    """``count`` matrices ``H = B11 + W W*`` with ``B11 ⪯ H``.

    ``W`` is m x m with standard normal entries scaled by a factor
    log-uniform in [1e-3, 1e1]; a random number of its columns (up to
    ``max_rank`` nonzero) are kept so samples also land on the boundary.

    Returns
    -------
    H : ndarray, shape (count, m, m)
    """
    B = as_hermitian(B)
    B11 = B[:m, :m]
    gen = rng.generator()
    complex_field = np.iscomplexobj(B)
    max_rank = m if max_rank is None else max_rank

    W = _normal(gen, (count, m, m), complex_field)
    W *= 10.0 ** gen.uniform(-3.0, 1.0, count)[:, None, None]
    ranks = gen.integers(0, max_rank + 1, count)
    W = W * (np.arange(m)[None, None, :] < ranks[:, None, None])
    H = B11 + W @ _ct(W)
    H = (H + _ct(H)) / 2

    if count and np.any(_lambda_min(H - B11) < -tol * _scale(B11, H)):
        raise SamplingFailure("Omega- sample left the set")
    return H


def _shrink_into_omega_plus(A, G, m):
    """Congruence by ``blockdiag(sqrt(t) I_m, I)`` with the largest ``t <= 1``
    such that ``t G11 ⪯ A``."""
    Linv = np.linalg.inv(np.linalg.cholesky(A))
    C = Linv @ G[:, :m, :m] @ Linv.conj().T
    lam_max = np.linalg.eigvalsh((C + _ct(C)) / 2)[:, -1]
    t = np.where(lam_max > 1.0, 1.0 / np.maximum(lam_max, 1.0), 1.0)
    s = np.ones(G.shape[:2])
    s[:, :m] = np.sqrt(t)[:, None]
    G = s[:, :, None] * G * s[:, None, :]
    return (G + _ct(G)) / 2


def sample_omega_plus(A, n, rng, count, tol=1e-10, max_retries=100, center=None):
    """``count`` positive definite n x n matrices ``G`` with ``G11 ⪯ A``.

    Each draw is ``Q diag(d) Q*`` (Haar ``Q``, ``d`` log-uniform in
    [1e-2, 1e2]), or ``center`` plus a small random Hermitian perturbation
    when ``center`` is given, then shrunk on its leading block. Draws
    failing either membership test are redrawn.

    Returns
    -------
    G : ndarray, shape (count, n, n)
    """
    A = as_hermitian(A)
    m = A.shape[0]
    if m > n:
        raise DimensionMismatch(f"sample dimension {n} below {m}")
    gen = rng.generator()
    complex_field = np.iscomplexobj(A) or np.iscomplexobj(center)
    dtype = complex if complex_field else float

    out = np.empty((count, n, n), dtype=dtype)
    todo = np.arange(count)
    for _ in range(max_retries):
        if todo.size == 0:
            return out
        if center is None:
            Q = random_unitary(gen, n, complex_field, size=todo.size)
            d = 10.0 ** gen.uniform(-2.0, 2.0, (todo.size, n))
            G = (Q * d[:, None, :]) @ _ct(Q)
        else:
            # relative perturbation R* (I + s E) R with ||E||_2 = 1, s < 1
            R = np.linalg.cholesky(center).conj().T
            E = _normal(gen, (todo.size, n, n), complex_field)
            E = (E + _ct(E)) / 2
            E /= np.linalg.norm(E, ord=2, axis=(-2, -1))[:, None, None]
            spread = 10.0 ** gen.uniform(-6.0, -1.0, todo.size)
            G = _ct(R) @ (np.eye(n) + spread[:, None, None] * E) @ R
        G = _shrink_into_omega_plus(A, G, m)
        scale = _scale(A, G)
        ok = (_lambda_min(G) > 0) & (_lambda_min(A - G[:, :m, :m]) >= -tol * scale)
        out[todo[ok]] = G[ok]
        todo = todo[~ok]
    if todo.size:
        raise SamplingFailure(f"{todo.size} Omega+ samples failed after {max_retries} retries")
    return out


# ---------------------------------------------------------------------------
# checks


def min_reading(A, B):
    """The formula with ``min(0, log lam)`` in place of ``max(0, log lam)``.

    Deliberately wrong; used to show that :func:`verify_infimum` separates
    the two readings.
    """
    result = geometry.delta2_plus(A, B)
    lam = result.pencil_eigenvalues
    mask = lam < math.exp(-geometry.TOL_TIE)
    logs = np.log(lam[mask])
    return geometry.DistanceResult(
        math.sqrt(float(np.sum(logs * logs))), lam, int(np.count_nonzero(mask))
    )


def verify_infimum(A, B, rng, count, tol=1e-9, formula=geometry.delta2_plus):
    """Sample both sets and compare against the closed form.

    Returns
    -------
    (VerificationReport, VerificationReport)
        Reports for the contained-set side and the containing-set side.
    """
    A, B = as_hermitian(A), as_hermitian(B)
    m, n = A.shape[0], B.shape[0]
    value = float(formula(A, B).value)
    floor = value - tol * (1.0 + value)

    _, w_minus = geometry.dist_to_contained_set(A, B)
    _, w_plus = geometry.dist_to_containing_set(A, B)

    # half the samples spread over each set, half around the witness
    near = count // 2
    H = np.concatenate(
        [
            sample_omega_minus(B, m, rng.child(0), count - near),
            sample_omega_minus(w_minus.optimum, m, rng.child(1), near),
        ]
    )
    d_minus = _batched_delta2(A, H) if count else np.empty(0)
    at_h0 = float(_batched_delta2(A, w_minus.optimum[None])[0])
    h0_ok = _lambda_min(w_minus.optimum - B[:m, :m]) >= -1e-10 * _scale(B, w_minus.optimum)

    G = np.concatenate(
        [
            sample_omega_plus(A, n, rng.child(2), count - near),
            sample_omega_plus(A, n, rng.child(3), near, center=w_plus.optimum),
        ]
    )
    d_plus = _batched_delta2(B, G) if count else np.empty(0)
    at_g0 = float(_batched_delta2(B, w_plus.optimum[None])[0])
    G0 = w_plus.optimum
    g0_ok = (_lambda_min(G0) > 0) and (
        _lambda_min(A - G0[:m, :m]) >= -1e-10 * _scale(A, G0)
    )

    def report(d, at_witness, member):
        return VerificationReport(
            formula_value=value,
            best_sampled=float(np.min(d)) if d.size else math.inf,
            sample_count=int(d.size),
            witness_gap=abs(at_witness - value),
            violations=int(np.count_nonzero(d < floor)),
            witness_member=bool(member),
            tol=tol,
        )

    return report(d_minus, at_h0, h0_ok), report(d_plus, at_g0, g0_ok)


def check_interlacing(B, m, tol=1e-10):
    """Eigenvalues of the leading m x m block interlace those of ``B``."""
    B = as_hermitian(B)
    n = B.shape[0]
    if not 1 <= m <= n:
        raise SplitOutOfRange(f"split index {m} outside [1, {n}]")
    full = np.linalg.eigvalsh(B)
    sub = np.linalg.eigvalsh(B[:m, :m])
    tol = tol * _scale(B)
    return bool(
        np.all(full[:m] <= sub + tol) and np.all(sub <= full[n - m:] + tol)
    )


def check_majorization(A, B, tol=1e-10):
    """``lam_j(A) <= lam_j(B)`` for every j, eigenvalues ascending."""
    A, B = as_hermitian(A), as_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimensions differ: {A.shape[0]} vs {B.shape[0]}")
    tol = tol * _scale(A, B)
    return bool(np.all(np.linalg.eigvalsh(A) <= np.linalg.eigvalsh(B) + tol))


def check_congruence_invariance(A, B, X, tol=1e-8):
    X = np.asarray(X)
    s = np.linalg.svd(X, compute_uv=False)
    if s[-1] < 1e-10 * s[0]:
        raise SingularTransform(
            f"smallest singular value {s[-1]:.3g} below 1e-10 * {s[0]:.3g}"
        )
    base = geometry.delta2(A, B)
    A, B = as_hermitian(A), as_hermitian(B)
    moved = geometry.delta2(
        matcore.hermitian_part(X @ A @ X.conj().T),
        matcore.hermitian_part(X @ B @ X.conj().T),
    )
    return abs(moved - base) <= tol * (1.0 + base)


def check_inversion_invariance(A, B, tol=1e-9):
    base = geometry.delta2(A, B)
    A, B = as_hermitian(A), as_hermitian(B)
    inv = geometry.delta2(
        matcore.hermitian_part(np.linalg.inv(A)),
        matcore.hermitian_part(np.linalg.inv(B)),
    )
    return abs(inv - base) <= tol * (1.0 + base)


def check_schur_congruence(B, m, tol=1e-12):
    """``L B L* = blockdiag(B11, S)`` with ``L = [[I, 0], [-B12* B11^{-1}, I]]``
    and ``S`` the Schur complement of ``B11``."""
    B = as_hermitian(B)
    n = B.shape[0]
    if not 1 <= m < n:
        raise SplitOutOfRange(f"split index {m} outside [1, {n - 1}]")
    P = matcore.partition(B, m)
    S = matcore.schur_complement(P)
    L = np.eye(n, dtype=B.dtype)
    L[m:, :m] = -np.linalg.solve(P.B11, P.B12).conj().T
    target = np.zeros_like(B)
    target[:m, :m] = P.B11
    target[m:, m:] = S
    residual = np.linalg.norm(L @ B @ L.conj().T - target)
    return bool(residual <= tol * np.linalg.norm(B))


def check_pythagorean(A, B, tol=1e-10):
    forward, backward, total = geometry.pythagorean_split(A, B)
    split = forward**2 + backward**2
    return abs(split - total**2) <= tol * max(split, total**2)


# ---------------------------------------------------------------------------
# suite


def run_suite(seed=0, pairs=50, samples=1000, max_dim=6, cond=1e4, self_test=False):
    """Run every check over seeded random instances.

    Pair ``i`` draws from ``SeededRng(seed).child(i)``; dimensions satisfy
    ``1 <= m <= n <= max_dim`` and every third pair is complex. With
    ``self_test`` the infimum check is fed :func:`min_reading`.

    Returns a JSON-ready dict whose ``"violations"`` count is zero on success.
    """
    root = SeededRng(seed)
    formula = min_reading if self_test else geometry.delta2_plus
    instances, failures = [], []

    for i in range(pairs):
        rng = root.child(i)
        gen = rng.generator()
        complex_field = i % 3 == 2
        m = int(gen.integers(1, max_dim + 1))
        n = int(gen.integers(m, max_dim + 1))
        A = random_pd(gen, m, cond, complex_field)
        B = random_pd(gen, n, cond, complex_field)
        A2 = random_pd(gen, m, cond, complex_field)
        X = random_nonsingular(gen, m, 1e3, complex_field)
        W = _normal(gen, (m, m), complex_field)
        H = random_hermitian(gen, n, complex_field)

        minus, plus = verify_infimum(A, B, rng.child(0), samples, formula=formula)
        checks = {
            "infimum_contained": minus.passed,
            "infimum_containing": plus.passed,
            "congruence_invariance": check_congruence_invariance(A, A2, X),
            "inversion_invariance": check_inversion_invariance(A, A2),
            "interlacing": all(check_interlacing(H, k) for k in range(1, n + 1)),
            "majorization": check_majorization(
                A, matcore.hermitian_part(A + W @ W.conj().T)
            ),
            "pythagorean": check_pythagorean(A, A2),
        }
        if n > m:
            checks["schur_congruence"] = check_schur_congruence(B, m, tol=1e-10)
        instances.append(
            {
                "index": i,
                "m": m,
                "n": n,
                "field": "complex" if complex_field else "real",
                "contained": minus.to_dict(),
                "containing": plus.to_dict(),
                "checks": checks,
            }
        )
        for name, ok in checks.items():
            if not ok:
                failures.append(
                    {
                        "index": i,
                        "check": name,
                        "seed": rng.seed,
                        "stream": rng.stream,
                        "A": matrix_to_dict("A", A),
                        "B": matrix_to_dict("B", B),
                    }
                )

    return {
        "seed": seed,
        "pairs": pairs,
        "samples": samples,
        "max_dim": max_dim,
        "self_test": self_test,
        "violations": len(failures),
        "instances": instances,
        "failures": failures,
    }
