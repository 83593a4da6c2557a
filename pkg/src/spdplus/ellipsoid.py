"""Origin-centred ellipsoids ``E_A = {x : x* A x <= 1}`` and containment."""

from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import DimensionMismatch, InnerDimensionLarger
from .matcore import TOL_ORDER, as_hermitian


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    shape: np.ndarray

    def __post_init__(self):
        shape = as_hermitian(self.shape)
        # rejects degenerate (singular) shapes
        matcore.cholesky(shape)
        object.__setattr__(self, "shape", shape)

    @property
    def dim(self):
        return self.shape.shape[0]


def contains(outer, inner, tol=TOL_ORDER):
    """True iff ``inner`` lies inside ``outer`` (same dimension)."""
    if outer.dim != inner.dim:
        raise DimensionMismatch(f"dimensions differ: {outer.dim} vs {inner.dim}")
    return matcore.loewner_leq(outer.shape, inner.shape, tol)


def embed(x, n):
    """Pad a vector of length m with zeros to length n."""
    x = np.asarray(x)
    out = np.zeros(n, dtype=x.dtype)
    out[: x.shape[0]] = x
    return out


def embedded_contains(outer, inner, tol=TOL_ORDER):
    """True iff the zero-padded image of ``inner`` lies inside ``outer``.

    ``inner`` is m-dimensional, ``outer`` n-dimensional with m <= n; the test
    is ``outer.shape[:m, :m] ⪯ inner.shape``.
    """
    m = inner.dim
    if m > outer.dim:
        raise InnerDimensionLarger(
            f"inner dimension {m} exceeds outer dimension {outer.dim}"
        )
    B11 = matcore.partition(outer.shape, m).B11
    return matcore.loewner_leq(B11, inner.shape, tol)


def semiaxes(E):
    """Semi-axis lengths in descending order."""
    return 1.0 / np.sqrt(matcore.eigvalsh(E.shape))
