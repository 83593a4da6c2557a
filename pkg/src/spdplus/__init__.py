"""Geometric distance between positive definite matrices of different
dimensions, with explicit optimal witnesses and a brute-force oracle."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .matcore import (  # noqa: F401
    HermitianMatrix,
    classify_definiteness,
    cholesky,
    eigh,
    gen_eigvals,
    loewner_leq,
    partition,
    schur_complement,
    simultaneous_diagonalizer,
    validate_hermitian,
)
from .geometry import (  # noqa: F401
    DistanceResult,
    Witness,
    delta2,
    delta2_plus,
    delta2_plus_extended,
    dist_to_contained_set,
    dist_to_containing_set,
    pythagorean_split,
)
from .ellipsoid import Ellipsoid, contains, embedded_contains, semiaxes  # noqa: F401
