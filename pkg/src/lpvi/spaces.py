"""Finite-dimensional lp spaces: norms, duality pairing, duality mapping.

The ambient space is E = (R^n, |.|_p) with 1 < p < inf. These spaces are
uniformly smooth and uniformly convex, so the normalized duality mapping
J : E -> E* (the functionals f with <x, f> = |x|^2 = |f|^2) is single
valued and has the closed form

    J(x)_i = |x|_p^(2-p) * |x_i|^(p-1) * sign(x_i),      J(0) = 0,

with values measured in the dual norm |.|_q, 1/p + 1/q = 1. At p = 2 the
formula collapses to the identity, which is how Hilbert-space results are
recovered throughout the package.

Functionals are represented as plain vectors of coefficients; pairing(f, x)
is the Euclidean dot product of the coefficient vectors.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ShapeError, UnsupportedSpaceError


def check_exponent(p) -> float:
    """Validate a space exponent, returning it as a float. Needs 1 < p < inf."""
    if isinstance(p, bool) or not isinstance(p, numbers.Real):
        raise UnsupportedSpaceError(f"exponent must be a real number, got {p!r}")
    p = float(p)
    if math.isnan(p) or not 1.0 < p < math.inf:
        raise UnsupportedSpaceError(f"exponent must satisfy 1 < p < inf, got {p}")
    return p


def as_vector(x, dim: int | None = None, name: str = "x") -> np.ndarray:
    """Coerce x to a finite 1-d float array, optionally checking its length."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ShapeError(f"{name} must have positive dimension")
    if dim is not None and arr.shape[0] != dim:
        raise ShapeError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class SpaceSpec:
    """The space (R^n, |.|_p)."""

    n: int
    p: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, numbers.Integral):
            raise InvalidInputError(f"dimension must be an integer, got {self.n!r}")
        if self.n < 1:
            raise InvalidInputError(f"dimension must be positive, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", check_exponent(self.p))


def dual_exponent(p) -> float:
    """Conjugate exponent q with 1/p + 1/q = 1."""
    p = check_exponent(p)
    return p / (p - 1.0)


def norm_rows(xs: np.ndarray, p: float) -> np.ndarray:
    """p-norm of each row of a 2-d array. Rows are scaled by their max
    modulus before exponentiation so large entries do not overflow."""
    xs = np.asarray(xs, dtype=float)
    m = np.max(np.abs(xs), axis=1)
    safe = np.where(m > 0.0, m, 1.0)
    s = np.sum((np.abs(xs) / safe[:, None]) ** p, axis=1)
    return np.where(m > 0.0, safe * s ** (1.0 / p), 0.0)


def p_norm(x, p) -> float:
    """|x|_p = (sum_i |x_i|^p)^(1/p)."""
    x = as_vector(x)
    p = check_exponent(p)
    return float(norm_rows(x[None, :], p)[0])


def pairing(f, x) -> float:
    """Apply the functional with coefficients f to the vector x: sum_i f_i x_i."""
    f = as_vector(f, name="f")
    x = as_vector(x, dim=f.shape[0])
    return float(np.dot(f, x))


def pairing_rows(fs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Row-wise pairing of two equally shaped 2-d arrays."""
    return np.sum(np.asarray(fs, float) * np.asarray(xs, float), axis=1)


def duality_map_rows(xs: np.ndarray, p: float) -> np.ndarray:
    """Normalized duality map applied to each row of a 2-d array."""
    xs = np.asarray(xs, dtype=float)
    # J is homogeneous of degree 1, so each row is rescaled by an exact
    # power of two first; |x_i|^(p-1) and |x|^(2-p) can over/underflow
    # separately at extreme magnitudes even though J(x) is representable
    m = np.max(np.abs(xs), axis=1)
    _, e = np.frexp(m)
    e = np.where(m > 0.0, e, 0)
    scaled = np.ldexp(xs, -e[:, None])
    norms = norm_rows(scaled, p)
    nonzero = norms > 0.0
    factor = np.ones_like(norms)
    # 0 ** (2 - p) is inf for p > 2; zero rows are fixed to J(0) = 0 below
    factor[nonzero] = norms[nonzero] ** (2.0 - p)
    out = factor[:, None] * np.abs(scaled) ** (p - 1.0) * np.sign(scaled)
    out[~nonzero] = 0.0
    return np.ldexp(out, e[:, None])


def duality_map(x, p) -> np.ndarray:
    """Normalized duality map J(x) in (R^n, |.|_p).

    Satisfies pairing(J(x), x) = |x|_p^2 and |J(x)|_q = |x|_p with
    q = p/(p-1). Exactly the identity when p = 2 (in floating point too:
    the norm power is t**0.0 == 1.0 and |x|**1.0 * sign(x) == x).
    """
    x = as_vector(x)
    p = check_exponent(p)
    return duality_map_rows(x[None, :], p)[0]
