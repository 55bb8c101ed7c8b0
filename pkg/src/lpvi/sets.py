"""Closed convex sets and their sunny nonexpansive retractions.

Supported combinations of set and exponent:

  whole space        identity                 every p
  box                componentwise clamp      every p
  ball (origin)      radial scaling           p = 2 only
  halfspace          offset along the normal  p = 2 only

The clamp is an exact sunny nonexpansive retraction in every lp space:
each coordinate of x - Q(x) and of J(Q(x) - y) for y in C carries the same
sign pattern, so the characterization pairing is a sum of nonnegative
terms. At p = 2 the metric projection is the sunny nonexpansive
retraction, which covers balls and halfspaces. Radial scaling onto a ball
is sunny but not nonexpansive for p != 2, so that combination is refused
rather than silently wrong.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidInputError, ShapeError, UnsupportedRetractionError
from .spaces import as_vector, check_exponent, duality_map_rows, p_norm


@dataclass(frozen=True, eq=False)
class WholeSpace:
    """All of R^n."""

    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InvalidInputError(f"dimension must be positive, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box {x : lo <= x <= hi} (componentwise)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lo, name="lo")
        hi = as_vector(self.hi, dim=lo.shape[0], name="hi")
        if not np.all(lo <= hi):
            raise InvalidInputError("box is empty: needs lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.shape[0]


@dataclass(frozen=True, eq=False)
class Ball:
    """Euclidean ball {x : |x|_2 <= radius} centered at the origin."""

    dim: int
    radius: float

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InvalidInputError(f"dimension must be positive, got {self.dim}")
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0.0:
            raise InvalidInputError(f"radius must be positive and finite, got {self.radius}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True, eq=False)
class Halfspace:
    """Halfspace {x : <normal, x> <= offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        a = as_vector(self.normal, name="normal")
        if not np.any(a != 0.0):
            raise InvalidInputError("halfspace normal must be nonzero")
        b = float(self.offset)
        if not np.isfinite(b):
            raise InvalidInputError("halfspace offset must be finite")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", b)

    @property
    def dim(self) -> int:
        return self.normal.shape[0]


ConvexSet = WholeSpace | Box | Ball | Halfspace


def set_dim(cset) -> int:
    return cset.dim


class RetractionMode(str, Enum):
    EXACT_SUNNY = "exact-sunny"
    METRIC_PROJECTION = "metric-projection"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class RetractionSupport:
    mode: RetractionMode
    reason: str = field(default="")


def retraction_support(cset, p) -> RetractionSupport:
    """How (and whether) retract() can serve this set at this exponent."""
    p = check_exponent(p)
    if isinstance(cset, (WholeSpace, Box)):
        return RetractionSupport(RetractionMode.EXACT_SUNNY)
    if isinstance(cset, (Ball, Halfspace)):
        if p == 2.0:
            return RetractionSupport(RetractionMode.METRIC_PROJECTION)
        kind = "ball" if isinstance(cset, Ball) else "halfspace"
        return RetractionSupport(
            RetractionMode.UNSUPPORTED,
            reason=(
                f"no closed-form sunny nonexpansive retraction onto a {kind}"
                f" for p = {p}; this set is supported only at p = 2"
            ),
        )
    raise InvalidInputError(f"unknown set type {type(cset).__name__}")


def members_mask(cset, xs: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Boolean membership mask for the rows of a 2-d array."""
    xs = np.asarray(xs, dtype=float)
    if isinstance(cset, WholeSpace):
        return np.ones(xs.shape[0], dtype=bool)
    if isinstance(cset, Box):
        return np.all(xs >= cset.lo - tol, axis=1) & np.all(xs <= cset.hi + tol, axis=1)
    if isinstance(cset, Ball):
        return np.sqrt(np.sum(xs * xs, axis=1)) <= cset.radius + tol
    if isinstance(cset, Halfspace):
        return xs @ cset.normal <= cset.offset + tol
    raise InvalidInputError(f"unknown set type {type(cset).__name__}")


def contains(cset, x, tol: float = 0.0) -> bool:
    """Membership test, slackened by tol (coordinatewise for boxes, in the
    Euclidean norm for balls, in the pairing for halfspaces)."""
    if tol < 0.0:
        raise InvalidInputError(f"tol must be nonnegative, got {tol}")
    x = as_vector(x, dim=set_dim(cset))
    return bool(members_mask(cset, x[None, :], tol)[0])


def retract(cset, x, p) -> np.ndarray:
    """Sunny nonexpansive retraction of x onto the set.

    Identity on C. Raises UnsupportedRetractionError for set/exponent
    pairs with no closed form (see retraction_support).
    """
    support = retraction_support(cset, p)
    if support.mode is RetractionMode.UNSUPPORTED:
        raise UnsupportedRetractionError(support.reason)
    x = as_vector(x, dim=set_dim(cset))
    if isinstance(cset, WholeSpace):
        return x.copy()
    if isinstance(cset, Box):
        return np.clip(x, cset.lo, cset.hi)
    if isinstance(cset, Ball):
        nrm = float(np.sqrt(np.dot(x, x)))
        if nrm <= cset.radius:
            return x.copy()
        return (cset.radius / nrm) * x
    # halfspace: shift along the normal by the constraint violation
    a, b = cset.normal, cset.offset
    excess = float(np.dot(a, x)) - b
    if excess <= 0.0:
        return x.copy()
    return x - (excess / float(np.dot(a, a))) * a


_SAMPLE_CHUNK = 512
_MAX_CHUNKS = 10_000


def sample_in_set(cset, count: int, seed: int, bounds=None) -> np.ndarray:
    """Draw `count` seeded uniform points from the set, as rows.

    Points come from uniform draws over a bounding box, filtered by
    membership. For unbounded sets a `bounds = (lo, hi)` box must be
    supplied. Draws happen in fixed-size chunks, so for a given seed the
    accepted sequence is a prefix of any longer request.
    """
    if count < 0:
        raise InvalidInputError(f"count must be nonnegative, got {count}")
    if bounds is None:
        if isinstance(cset, Box):
            lo, hi = cset.lo, cset.hi
        elif isinstance(cset, Ball):
            lo = np.full(cset.dim, -cset.radius)
            hi = np.full(cset.dim, cset.radius)
        else:
            raise InvalidInputError(
                "sampling an unbounded set requires an explicit bounds box"
            )
    else:
        lo = as_vector(bounds[0], dim=set_dim(cset), name="bounds lo")
        hi = as_vector(bounds[1], dim=set_dim(cset), name="bounds hi")
        if not np.all(lo <= hi):
            raise InvalidInputError("bounds box is empty")
    rng = np.random.default_rng(seed)
    dim = lo.shape[0]
    kept = []
    have = 0
    for _ in range(_MAX_CHUNKS):
        if have >= count:
            break
        cand = rng.uniform(lo, hi, size=(_SAMPLE_CHUNK, dim))
        good = cand[members_mask(cset, cand)]
        if good.shape[0]:
            kept.append(good)
            have += good.shape[0]
    else:
        raise InvalidInputError("sampling region barely intersects the set")
    if count == 0:
        return np.empty((0, dim))
    return np.vstack(kept)[:count]


def verify_sunny(cset, x, p, ts) -> float:
    """Max deviation of the sunny property over the given ray parameters.

    For Q = retract and each t >= 0 checks Q(Qx + t*(x - Qx)) == Qx,
    returning the largest p-norm deviation. Exactly 0.0 for boxes.
    """
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise InvalidInputError("ts must be a nonempty 1-d collection")
    if not np.all(np.isfinite(ts)) or np.any(ts < 0.0):
        raise InvalidInputError("ray parameters must be finite and >= 0")
    qx = retract(cset, x, p)
    x = as_vector(x, dim=set_dim(cset))
    worst = 0.0
    for t in ts:
        again = retract(cset, qx + t * (x - qx), p)
        worst = max(worst, p_norm(again - qx, p))
    return worst


def _characterization_bounds(cset, x, x0):
    half = 1.0 + 2.0 * float(np.sqrt(np.sum((x - x0) ** 2)))
    return x0 - half, x0 + half


def verify_characterization(cset, x, p, sample_count: int, seed: int) -> float:
    """Worst value of <x - Qx, J(Qx - y)> over sampled y in C.

    The retraction characterization says this pairing is >= 0 for every
    y in C; a materially negative minimum is a counterexample. Samples
    are seeded; for boxes of dimension <= 10 all vertices are appended
    since extreme points are where violations would show.
    """
    if sample_count < 1:
        raise InvalidInputError(f"sample_count must be >= 1, got {sample_count}")
    p = check_exponent(p)
    x0 = retract(cset, x, p)
    x = as_vector(x, dim=set_dim(cset))
    if isinstance(cset, (Box, Ball)):
        ys = sample_in_set(cset, sample_count, seed)
    else:
        ys = sample_in_set(cset, sample_count, seed,
                           bounds=_characterization_bounds(cset, x, x0))
    if isinstance(cset, Box) and cset.dim <= 10:
        corners = np.array(list(itertools.product(*zip(cset.lo, cset.hi))))
        ys = np.vstack([ys, corners])
    funcs = duality_map_rows(x0 - ys, p)
    return float(np.min(funcs @ (x - x0)))
