"""Independent brute-force checks for the solver's claims.

grid_vi_solve shares no code path with the fixed-point solver: it tests
the inequality <Bu, j(v - u)> >= -eps directly on every grid point pair,
so agreement between the two routes is meaningful evidence.

The acceptance tolerance is eps = slack_scale * h * (1 + |Bu|) with h
the largest grid spacing. The scale trades false accepts against false
rejects: a grid point one cell from the true solution picks up pairing
deficits of order h * (|Bu| + mu * diam), so the tolerance must carry
both h and |Bu|. slack_scale = 0.5 keeps the accepted set within about
one cell of the solution on unit-box instances whose solution lies on
the grid; larger scales accept proportionally wider bands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ResourceError, ShapeError, UnsupportedOracleError
from .maps import evaluate_rows
from .sets import Ball, Box, members_mask
from .solver import Problem
from .spaces import (as_vector, check_exponent, duality_map, duality_map_rows,
                     norm_rows, p_norm, pairing, pairing_rows)

MAX_GRID_POINTS = 1_000_000
MAX_GRID_DIM = 3


@dataclass(frozen=True)
class GridSpec:
    """Points per axis for a rectangular search grid."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) == 0:
            raise InvalidInputError("grid needs at least one axis")
        if any(c < 2 for c in counts):
            raise InvalidInputError(f"each axis needs >= 2 points, got {counts}")
        total = 1
        for c in counts:
            total *= c
        if total > MAX_GRID_POINTS:
            raise ResourceError(
                f"grid of {total} points exceeds the cap of {MAX_GRID_POINTS}")
        object.__setattr__(self, "counts", counts)


@dataclass(eq=False)
class GridSolution:
    accepted: np.ndarray        # (k, n) accepted grid points
    worst_pairings: np.ndarray  # (k,) min pairing over grid rivals, per point
    spacing: np.ndarray         # (n,) per-axis grid step
    searched: int               # grid points that lay inside C
    total: int                  # all grid points


def grid_bounds(cset) -> tuple[np.ndarray, np.ndarray]:
    """Bounding box of a bounded set; the oracle refuses anything else."""
    if isinstance(cset, Box):
        return cset.lo.copy(), cset.hi.copy()
    if isinstance(cset, Ball):
        return (np.full(cset.dim, -cset.radius),
                np.full(cset.dim, cset.radius))
    raise UnsupportedOracleError(
        f"grid oracle needs a bounded set (Box or Ball),"
        f" got {type(cset).__name__}")


def grid_vi_solve(problem: Problem, grid: GridSpec,
                  slack_scale: float = 0.5) -> GridSolution:
    """Accept every grid point u in C whose worst pairing against all grid
    rivals v in C stays above -slack_scale * h * (1 + |Bu|)."""
    if not slack_scale > 0.0:
        raise InvalidInputError(f"slack_scale must be positive, got {slack_scale}")
    n = problem.space.n
    if n > MAX_GRID_DIM:
        raise UnsupportedOracleError(
            f"grid oracle supports dimension <= {MAX_GRID_DIM}, got {n}")
    if len(grid.counts) != n:
        raise ShapeError(
            f"grid has {len(grid.counts)} axes for a {n}-dimensional problem")
    lo, hi = grid_bounds(problem.cset)
    p = problem.space.p
    axes = [np.linspace(lo[i], hi[i], grid.counts[i]) for i in range(n)]
    spacing = np.array([(hi[i] - lo[i]) / (grid.counts[i] - 1) for i in range(n)])
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    inside = pts[members_mask(problem.cset, pts, tol=1e-12)]
    h = float(np.max(spacing))
    images = evaluate_rows(problem.mapping, inside)
    image_norms = norm_rows(images, p)
    accepted = []
    worsts = []
    for i in range(inside.shape[0]):
        rivals = duality_map_rows(inside - inside[i], p)
        worst = float(np.min(rivals @ images[i]))
        if worst >= -slack_scale * h * (1.0 + image_norms[i]):
            accepted.append(inside[i])
            worsts.append(worst)
    return GridSolution(
        accepted=(np.array(accepted) if accepted else np.empty((0, n))),
        worst_pairings=np.array(worsts),
        spacing=spacing,
        searched=int(inside.shape[0]),
        total=int(pts.shape[0]),
    )


def check_pairing_inequality(x, y, p) -> float:
    """Slack of <x - y, Jx - Jy> + 4 |x| |y| >= <x - y, J(x - y)>.

    The right side is |x - y|^2 by the duality identity; the inequality
    holds in every smooth space, so a materially negative return is a
    bug witness in the duality map.
    """
    p = check_exponent(p)
    x = as_vector(x)
    y = as_vector(y, dim=x.shape[0], name="y")
    d = x - y
    lhs = pairing(duality_map(x, p) - duality_map(y, p), d) \
        + 4.0 * p_norm(x, p) * p_norm(y, p)
    return lhs - pairing(duality_map(d, p), d)


@dataclass(eq=False)
class PairingSweep:
    min_margin: float           # min slack / (1 + |x| |y|) over the sweep
    worst_x: np.ndarray
    worst_y: np.ndarray
    pairs: int


def pairing_inequality_sweep(p, n: int, pairs: int, seed: int,
                             scale: float = 5.0) -> PairingSweep:
    """Seeded random sweep of check_pairing_inequality, vectorized.

    Pairs are drawn uniformly in [-scale, scale]^n and then stretched by
    a random power of ten per pair so several magnitudes are probed. The
    margin is normalized by 1 + |x| |y| to make one tolerance meaningful
    across magnitudes.
    """
    p = check_exponent(p)
    if n < 1 or pairs < 1:
        raise InvalidInputError("need n >= 1 and pairs >= 1")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-scale, scale, size=(pairs, n))
    ys = rng.uniform(-scale, scale, size=(pairs, n))
    stretch = 10.0 ** rng.uniform(-2.0, 2.0, size=(pairs, 1))
    xs *= stretch
    ys *= stretch
    xs[0] = 0.0  # pin one degenerate endpoint; J(0) = 0 must hold too
    d = xs - ys
    lhs = (pairing_rows(duality_map_rows(xs, p) - duality_map_rows(ys, p), d)
           + 4.0 * norm_rows(xs, p) * norm_rows(ys, p))
    slack = lhs - pairing_rows(duality_map_rows(d, p), d)
    margin = slack / (1.0 + norm_rows(xs, p) * norm_rows(ys, p))
    i = int(np.argmin(margin))
    return PairingSweep(min_margin=float(margin[i]), worst_x=xs[i].copy(),
                        worst_y=ys[i].copy(), pairs=pairs)


def hilbert_rule_factor(r: float = 1.0, gamma: float = 1.0, s: float = 1.0,
                        mu: float = 0.1) -> float:
    """Value of 1 - s mu^2 (2 (r - gamma mu^2) / mu^2 - s) for a
    gamma-cocoercive, r-strongly monotone, mu-Lipschitz mapping.

    This is the squared factor a Hilbert-space step rule would assign at
    step size s. At the defaults it is -0.97: negative, so no real
    contraction factor exists, which exhibits constants that satisfy a
    formally weaker hypothesis while leaving the certified regime empty.

    Evaluated in the expanded form 1 - 2 s (r - gamma mu^2) + s^2 mu^2;
    the nested form rounds the default case to -0.97000...02 instead of
    the exact double -0.97.
    """
    r, gamma, s, mu = float(r), float(gamma), float(s), float(mu)
    for name, val in (("r", r), ("gamma", gamma), ("s", s), ("mu", mu)):
        if not np.isfinite(val):
            raise InvalidInputError(f"{name} must be finite, got {val}")
    mu2 = mu * mu
    return 1.0 - 2.0 * s * (r - gamma * mu2) + s * s * mu2
