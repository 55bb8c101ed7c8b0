"""Mappings B : R^n -> R^n and sampling-based certificate checks.

A mapping enters the solver through a monotonicity certificate (u, v, mu):
relaxed (u, v)-cocoercivity

    <Bx - By, j(x - y)> >= -u |Bx - By|^2 + v |x - y|^2

together with mu-Lipschitz continuity. Certificates are claims supplied by
the caller; the check_* functions here probe them on seeded sample pairs
and report the worst slack found. A sampling check can falsify a claim,
never prove it, which is why the verdict vocabulary is "no violation
found", not "holds".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import EstimationError, EvaluationError, InvalidInputError, ShapeError
from .sets import Ball, Box, sample_in_set
from .spaces import as_vector, check_exponent, duality_map_rows, norm_rows


@dataclass(frozen=True, eq=False)
class Affine:
    """B(x) = matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("matrix contains non-finite entries")
        q = (np.zeros(m.shape[0]) if self.offset is None
             else as_vector(self.offset, dim=m.shape[0], name="offset"))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", q)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ResidualOfContraction:
    """B = I - T for a declared alpha-contraction T.

    Solving VI(C, B) then finds the fixed point of T constrained to C;
    such a B is (1 - alpha)-strongly monotone and (1 + alpha)-Lipschitz.
    """

    inner: "Mapping"
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not 0.0 <= a < 1.0:
            raise InvalidInputError(f"contraction constant must be in [0, 1), got {self.alpha}")
        object.__setattr__(self, "alpha", a)

    @property
    def dim(self) -> int:
        return self.inner.dim


@dataclass(frozen=True, eq=False)
class BlackBox:
    """B given only as a callable on vectors."""

    func: Callable[[np.ndarray], np.ndarray]
    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InvalidInputError(f"dimension must be positive, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))


Mapping = Affine | ResidualOfContraction | BlackBox


def evaluate(mapping, x) -> np.ndarray:
    """Evaluate B(x), guaranteeing a finite vector of the right dimension."""
    x = as_vector(x, dim=mapping.dim)
    if isinstance(mapping, Affine):
        out = mapping.matrix @ x + mapping.offset
    elif isinstance(mapping, ResidualOfContraction):
        out = x - evaluate(mapping.inner, x)
    elif isinstance(mapping, BlackBox):
        try:
            out = np.asarray(mapping.func(x), dtype=float)
        except Exception as exc:
            raise EvaluationError(f"mapping evaluator raised: {exc}") from exc
        if out.shape != x.shape:
            raise EvaluationError(
                f"mapping returned shape {out.shape}, expected {x.shape}")
    else:
        raise InvalidInputError(f"unknown mapping type {type(mapping).__name__}")
    if not np.all(np.isfinite(out)):
        raise EvaluationError("mapping produced non-finite output")
    return out


def evaluate_rows(mapping, xs: np.ndarray) -> np.ndarray:
    """Evaluate B on each row. Vectorized for affine chains, a row loop
    for black boxes."""
    xs = np.asarray(xs, dtype=float)
    if isinstance(mapping, Affine):
        out = xs @ mapping.matrix.T + mapping.offset
        if not np.all(np.isfinite(out)):
            raise EvaluationError("mapping produced non-finite output")
        return out
    if isinstance(mapping, ResidualOfContraction):
        return xs - evaluate_rows(mapping.inner, xs)
    if xs.shape[0] == 0:
        return xs.copy()
    return np.stack([evaluate(mapping, row) for row in xs])


def _sample_pairs(region, pairs: int, seed: int, bounds):
    if pairs < 1:
        raise InvalidInputError(f"sample_pairs must be >= 1, got {pairs}")
    if bounds is None and not isinstance(region, (Box, Ball)):
        raise EstimationError(
            "region is unbounded: supply a bounds box for sampling")
    pts = sample_in_set(region, 2 * pairs, seed, bounds=bounds)
    return pts[0::2], pts[1::2]


_DEGENERATE = 1e-12


@dataclass(frozen=True, eq=False)
class LipschitzEstimate:
    """Largest sampled difference-quotient of B; a lower bound on mu."""

    mu_hat: float
    pairs_used: int
    degenerate_skipped: int
    witness_x: np.ndarray
    witness_y: np.ndarray


@dataclass(frozen=True, eq=False)
class SlackReport:
    """Worst sampled slack of a monotonicity inequality (negative = violation)."""

    worst_slack: float
    slacks: np.ndarray
    pairs_used: int
    degenerate_skipped: int
    min_sq_sep: float
    max_sq_sep: float
    witness_x: np.ndarray
    witness_y: np.ndarray


def _paired_data(mapping, region, p, sample_pairs, seed, bounds):
    p = check_exponent(p)
    xs, ys = _sample_pairs(region, sample_pairs, seed, bounds)
    seps = norm_rows(xs - ys, p)
    valid = seps >= _DEGENERATE
    if not np.any(valid):
        raise EstimationError("all sampled pairs were degenerate (x == y)")
    bxs = evaluate_rows(mapping, xs)
    bys = evaluate_rows(mapping, ys)
    return p, xs[valid], ys[valid], bxs[valid] - bys[valid], seps[valid], int(np.sum(~valid))


def estimate_lipschitz(mapping, region, p, sample_pairs: int, seed: int,
                       bounds=None) -> LipschitzEstimate:
    """Estimate the Lipschitz constant of B on a region from seeded pairs.

    Returns the max ratio |Bx - By|_p / |x - y|_p over nondegenerate
    sampled pairs. Chunked sampling makes the estimate monotone in
    sample_pairs for a fixed seed.
    """
    p, xs, ys, dbs, seps, skipped = _paired_data(
        mapping, region, p, sample_pairs, seed, bounds)
    ratios = norm_rows(dbs, p) / seps
    i = int(np.argmax(ratios))
    return LipschitzEstimate(
        mu_hat=float(ratios[i]),
        pairs_used=int(seps.shape[0]),
        degenerate_skipped=skipped,
        witness_x=xs[i].copy(),
        witness_y=ys[i].copy(),
    )


def _slack_report(slacks, xs, ys, seps, skipped) -> SlackReport:
    i = int(np.argmin(slacks))
    return SlackReport(
        worst_slack=float(slacks[i]),
        slacks=slacks,
        pairs_used=int(slacks.shape[0]),
        degenerate_skipped=skipped,
        min_sq_sep=float(np.min(seps) ** 2),
        max_sq_sep=float(np.max(seps) ** 2),
        witness_x=xs[i].copy(),
        witness_y=ys[i].copy(),
    )


def check_relaxed_cocoercive(mapping, region, u, v, p, sample_pairs: int,
                             seed: int, bounds=None) -> SlackReport:
    """Probe relaxed (u, v)-cocoercivity on seeded sample pairs.

    Per-pair slack: <Bx - By, j(x - y)> + u |Bx - By|^2 - v |x - y|^2.
    A clearly negative worst slack falsifies the claim at the witness pair.
    """
    u, v = float(u), float(v)
    if u <= 0.0 or v <= 0.0:
        raise InvalidInputError("cocoercivity constants u, v must be positive")
    p, xs, ys, dbs, seps, skipped = _paired_data(
        mapping, region, p, sample_pairs, seed, bounds)
    jd = duality_map_rows(xs - ys, p)
    slacks = (np.sum(dbs * jd, axis=1)
              + u * norm_rows(dbs, p) ** 2
              - v * seps ** 2)
    return _slack_report(slacks, xs, ys, seps, skipped)


def check_strongly_monotone(mapping, region, v, p, sample_pairs: int,
                            seed: int, bounds=None) -> SlackReport:
    """Probe v-strong monotonicity: <Bx - By, j(x - y)> >= v |x - y|^2."""
    v = float(v)
    if v <= 0.0:
        raise InvalidInputError("strong monotonicity constant v must be positive")
    p, xs, ys, dbs, seps, skipped = _paired_data(
        mapping, region, p, sample_pairs, seed, bounds)
    jd = duality_map_rows(xs - ys, p)
    slacks = np.sum(dbs * jd, axis=1) - v * seps ** 2
    return _slack_report(slacks, xs, ys, seps, skipped)


@dataclass(frozen=True)
class Certificate:
    """Claimed constants: relaxed (u, v)-cocoercive and mu-Lipschitz."""

    u: float
    v: float
    mu: float

    def __post_init__(self):
        for name in ("u", "v", "mu"):
            val = float(getattr(self, name))
            if not np.isfinite(val) or val <= 0.0:
                raise InvalidInputError(
                    f"certificate constant {name} must be positive and finite,"
                    f" got {getattr(self, name)}")
            object.__setattr__(self, name, val)


class Feasibility(str, Enum):
    STRICT = "strict"
    HILBERT_ONLY = "hilbert-only"
    UNCERTIFIED = "uncertified"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class FeasibilityReport:
    strict_condition_holds: bool
    consistency_bound_ok: bool
    verdict: Feasibility


def certificate_feasibility(cert: Certificate) -> FeasibilityReport:
    """Classify a certificate by which step-size regime it can certify.

    strict condition:   v > u mu^2 + 5 mu   (two-sided step rule)
    consistency bound:  v <= mu + u mu^2

    The consistency bound is forced by the definitions: applying the
    cocoercivity inequality and the Lipschitz bound to any pair x != y
    gives v |x-y|^2 <= mu |x-y|^2 + u mu^2 |x-y|^2. A certificate above
    that line claims constants no mapping can realize. Together the two
    conditions would force 5 mu < mu, impossible for mu > 0, so the
    strict verdict can never coexist with a consistent certificate.
    """
    u, v, mu = cert.u, cert.v, cert.mu
    strict = v > u * mu * mu + 5.0 * mu
    consistent = v <= mu + u * mu * mu
    if strict and consistent:
        raise AssertionError(
            "unreachable: strict step condition together with the"
            " consistency bound forces 5*mu < mu")
    if not consistent:
        verdict = Feasibility.INCONSISTENT
    elif strict:
        verdict = Feasibility.STRICT
    elif v > u * mu * mu:
        verdict = Feasibility.HILBERT_ONLY
    else:
        verdict = Feasibility.UNCERTIFIED
    return FeasibilityReport(strict_condition_holds=strict,
                             consistency_bound_ok=consistent,
                             verdict=verdict)
