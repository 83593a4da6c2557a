"""Dense Hermitian linear algebra kernels.

Everything here works for real symmetric and complex Hermitian input alike.
Functions accept either a :class:`HermitianMatrix` (already validated) or
any square array-like, which is validated on entry with the default
symmetry tolerance. Results are plain ndarrays.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    AsymmetryExceedsTolerance,
    ConvergenceFailure,
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    SpdPlusError,
    SplitOutOfRange,
)

TOL_SYM = 1e-12
TOL_PD = 1e-12
TOL_ORDER = 1e-10
TOL_EIG = 1e-14
MAX_SWEEPS = 30


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A validated, exactly Hermitian square matrix.

    Use :func:`validate_hermitian` to build one from raw data.
    """

    data: np.ndarray

    @property
    def dim(self):
        return self.data.shape[0]

    @property
    def field(self):
        return "complex" if np.iscomplexobj(self.data) else "real"

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class BlockPartition:
    """``B = [[B11, B12], [B12*, B22]]`` split after row/column ``m``."""

    m: int
    B11: np.ndarray
    B12: np.ndarray
    B22: np.ndarray

    def assemble(self):
        return np.block([[self.B11, self.B12], [self.B12.conj().T, self.B22]])


class Definiteness(str, enum.Enum):
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE_SINGULAR = "positive_semidefinite_singular"
    NOT_PSD = "not_psd"


def _square_array(raw):
    arr = np.asarray(raw)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128)
    else:
        arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise SpdPlusError("matrix has non-finite entries")
    return arr


def hermitian_part(M):
    """Return ``(M + M*) / 2``."""
    M = np.asarray(M)
    return (M + M.conj().T) / 2


def validate_hermitian(raw, tol=TOL_SYM):
    """Check that ``raw`` is Hermitian up to ``tol`` and symmetrize it.

    The asymmetry ``max |raw - raw*|`` must not exceed
    ``tol * max(1, max |raw|)``.
    """
    arr = _square_array(raw)
    asym = np.max(np.abs(arr - arr.conj().T))
    scale = max(1.0, float(np.max(np.abs(arr))))
    if asym > tol * scale:
        raise AsymmetryExceedsTolerance(
            f"asymmetry {asym:.3g} exceeds {tol:.3g} * {scale:.3g}"
        )
    data = hermitian_part(arr)
    data.setflags(write=False)
    return HermitianMatrix(data)


def as_hermitian(M):
    """Return the validated ndarray behind ``M``."""
    if isinstance(M, HermitianMatrix):
        return M.data
    return validate_hermitian(M).data


def _scale(*mats):
    return max([1.0] + [float(np.linalg.norm(M)) for M in mats])


def _check_same_dim(A, B):
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimensions differ: {A.shape[0]} vs {B.shape[0]}")


def cholesky(H, tol=TOL_PD):
    """Upper triangular ``R`` with ``R* R = H``.

    Raises :class:`NotPositiveDefinite` carrying the pivot index as soon as a
    pivot drops to ``tol * max(diag(H))`` or below.
    """
    H = as_hermitian(H)
    n = H.shape[0]
    threshold = tol * max(float(np.max(H.diagonal().real)), 0.0)
    R = np.zeros_like(H)
    for j in range(n):
        col = R[:j, j]
        pivot = H[j, j].real - np.vdot(col, col).real
        if not pivot > threshold:
            raise NotPositiveDefinite(
                f"pivot {j} is {pivot:.3g}, not above {threshold:.3g}", pivot=j
            )
        r = math.sqrt(pivot)
        R[j, j] = r
        if j + 1 < n:
            R[j, j + 1:] = (H[j, j + 1:] - col.conj() @ R[:j, j + 1:]) / r
    return R


def eigh(H, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass is at most
    ``1e-14 * ||H||_F``. Eigenvalues come back in ascending order, ties kept
    in solver order.
    """
    A = np.array(as_hermitian(H), copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=A.dtype)
    target = TOL_EIG * np.linalg.norm(A)
    offdiag = ~np.eye(n, dtype=bool)
    is_complex = np.iscomplexobj(A)

    sweep = 0
    while np.linalg.norm(A[offdiag]) > target:
        if sweep == max_sweeps:
            raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # unit phase of a_pq; rotation J = [[c, s*e], [-s*conj(e), c]]
                e = apq / r
                se, sec = s * e, s * (e.conjugate() if is_complex else e)

                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - sec * aq
                A[:, q] = se * ap + c * aq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - se * rq
                A[q, :] = sec * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                if is_complex:
                    A[p, p] = A[p, p].real
                    A[q, q] = A[q, q].real

                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - sec * vq
                V[:, q] = se * vp + c * vq

    w = A.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], V[:, order])


def eigvalsh(H):
    return eigh(H).eigenvalues


def _reduce_pencil(R, B):
    """``R^{-*} B R^{-1}`` for upper triangular ``R``, symmetrized."""
    Y = solve_triangular(R, B, trans="C", lower=False)
    C = solve_triangular(R, Y.conj().T, trans="C", lower=False).conj().T
    return hermitian_part(C)


def gen_eigvals(A, B, tol=TOL_PD):
    """Ascending eigenvalues of ``A^{-1} B`` for positive definite ``A``.

    Computed from the Hermitian matrix ``R^{-*} B R^{-1}`` with ``A = R* R``,
    never by forming ``A^{-1} B``.
    """
    A, B = as_hermitian(A), as_hermitian(B)
    _check_same_dim(A, B)
    R = cholesky(A, tol)
    return eigvalsh(_reduce_pencil(R, B))


def simultaneous_diagonalizer(A, B, tol=TOL_PD):
    """Nonsingular ``X`` and diagonal ``D`` with ``X A X* = I``, ``X B X* = D``.

    ``diag(D)`` holds the eigenvalues of ``A^{-1} B`` in ascending order.

    Returns
    -------
    X : ndarray, shape (n, n)
    D : ndarray, shape (n, n)
    """
    A, B = as_hermitian(A), as_hermitian(B)
    _check_same_dim(A, B)
    R = cholesky(A, tol)
    spec = eigh(_reduce_pencil(R, B))
    X = solve_triangular(R, spec.vectors, lower=False).conj().T
    return X, np.diag(spec.eigenvalues)


def partition(B, m):
    B = as_hermitian(B)
    n = B.shape[0]
    if not 1 <= m <= n:
        raise SplitOutOfRange(f"split index {m} outside [1, {n}]")
    return BlockPartition(
        m=m,
        B11=B[:m, :m].copy(),
        B12=B[:m, m:].copy(),
        B22=B[m:, m:].copy(),
    )


def schur_complement(P, tol=TOL_PD):
    """``B22 - B12* B11^{-1} B12`` for a :class:`BlockPartition`."""
    R11 = cholesky(P.B11, tol)
    W = solve_triangular(R11, P.B12, trans="C", lower=False)
    return hermitian_part(P.B22 - W.conj().T @ W)


def loewner_leq(A, B, tol=TOL_ORDER):
    """True iff ``A ⪯ B``, i.e. ``B - A`` is positive semidefinite up to tol."""
    A, B = as_hermitian(A), as_hermitian(B)
    _check_same_dim(A, B)
    lam_min = eigvalsh(B - A)[0]
    return bool(lam_min >= -tol * _scale(A, B))


def classify_definiteness(H, tol=TOL_PD):
    H = as_hermitian(H)
    lam_min = eigvalsh(H)[0]
    scale = _scale(H)
    if lam_min > tol * scale:
        return Definiteness.POSITIVE_DEFINITE
    if lam_min >= -tol * scale:
        return Definiteness.POSITIVE_SEMIDEFINITE_SINGULAR
    return Definiteness.NOT_PSD
