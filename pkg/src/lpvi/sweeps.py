"""Seeded verification sweeps over the duality map and the retractions.

These back the `verify` CLI suites and double as the acceptance probes.
Each sweep returns worst-case margins, normalized where a single
tolerance should cover all magnitudes; callers compare against their
thresholds and can replay any failure from the seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .sets import Ball, Box, Halfspace, retract, sample_in_set, verify_characterization, verify_sunny
from .spaces import dual_exponent, duality_map_rows, norm_rows, pairing_rows


@dataclass(eq=False)
class DualityReport:
    worst_identity: float      # |<x, Jx> - |x|^2| / (1 + |x|^2)
    worst_norm: float          # ||Jx|_q - |x|_p| / (1 + |x|_p)
    worst_homogeneity: float   # |J(t x) - t Jx|_q / (1 + t |x|_p)
    worst_attainment: float    # |<Jx/|x|, x> - |x|_p| / (1 + |x|_p)
    worst_bound_excess: float  # max over unit f of (<f, x> - |x|_p) / (1 + |x|_p)
    worst_hilbert: float | None  # max |Jx - x| entrywise at p = 2
    checks: int


def _sample_vectors(rng, count: int, n: int) -> np.ndarray:
    xs = rng.uniform(-10.0, 10.0, size=(count, n))
    xs *= 10.0 ** rng.uniform(-2.0, 2.0, size=(count, 1))
    xs[0] = 0.0  # always include the origin; J(0) = 0 is part of the contract
    return xs


def duality_sweep(p_values, n_values, count: int, seed: int) -> DualityReport:
    """Check the duality map's defining identities on seeded vectors.

    For each (p, n) draws `count` vectors across several magnitudes and
    checks pairing identity, norm identity, positive homogeneity, the
    Hoelder upper bound against random unit functionals, and that
    J x / |x| attains it. At p = 2 additionally checks J == identity.
    """
    if count < 1:
        raise InvalidInputError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    report = DualityReport(0.0, 0.0, 0.0, 0.0, -np.inf, None, 0)
    for p in p_values:
        q = dual_exponent(p)
        for n in n_values:
            xs = _sample_vectors(rng, count, int(n))
            js = duality_map_rows(xs, p)
            nx = norm_rows(xs, p)
            nj = norm_rows(js, q)
            pairings = pairing_rows(js, xs)
            report.worst_identity = max(
                report.worst_identity,
                float(np.max(np.abs(pairings - nx ** 2) / (1.0 + nx ** 2))))
            report.worst_norm = max(
                report.worst_norm,
                float(np.max(np.abs(nj - nx) / (1.0 + nx))))
            ts = rng.uniform(0.0, 4.0, size=count)
            ts[0] = 0.0
            scaled = duality_map_rows(ts[:, None] * xs, p)
            report.worst_homogeneity = max(
                report.worst_homogeneity,
                float(np.max(norm_rows(scaled - ts[:, None] * js, q)
                             / (1.0 + ts * nx))))
            if p == 2.0:
                dev = float(np.max(np.abs(js - xs)))
                report.worst_hilbert = max(report.worst_hilbert or 0.0, dev)
            # Hoelder bound <f, x> <= |f|_q |x|_p, spot-checked on random
            # unit functionals, with equality attained by Jx / |x|_p
            probe = xs[nx > 0.0][:16]
            if probe.shape[0]:
                pn = norm_rows(probe, p)
                fs = rng.standard_normal(size=(64, probe.shape[1]))
                fs = fs[norm_rows(fs, q) > 0.0]
                fs /= norm_rows(fs, q)[:, None]
                vals = fs @ probe.T  # (functionals, probe points)
                report.worst_bound_excess = max(
                    report.worst_bound_excess,
                    float(np.max((vals - pn[None, :]) / (1.0 + pn[None, :]))))
                jprobe = duality_map_rows(probe, p) / pn[:, None]
                attained = pairing_rows(jprobe, probe)
                report.worst_attainment = max(
                    report.worst_attainment,
                    float(np.max(np.abs(attained - pn) / (1.0 + pn))))
            report.checks += count
    return report


@dataclass(eq=False)
class RetractionReport:
    max_box_sunny_dev: float          # must be exactly 0.0
    max_hilbert_sunny_dev: float      # ball/halfspace at p = 2
    max_idempotence_dev: float
    max_identity_dev: float           # retract must fix points of C
    max_nonexpansive_excess: float    # |Qx - Qy| - |x - y|, positive part
    min_characterization: float       # normalized by 1 + |x|_p^2
    min_projection_inequality: float  # p = 2: <x-y, Qx-Qy> - |Qx-Qy|^2
    pairs: int


def _random_box(rng, n: int) -> Box:
    lo = rng.uniform(-3.0, 0.0, size=n)
    return Box(lo, lo + rng.uniform(0.5, 3.0, size=n))


def retraction_suite(p_values=(1.5, 2.0, 3.0), pairs: int = 10_000,
                     characterization_samples: int = 500, seed: int = 0,
                     ts=(0.0, 0.5, 1.0, 2.0)) -> RetractionReport:
    """Exercise the retractions on seeded boxes (every p) plus balls and
    halfspaces (p = 2): sunny property, idempotence, identity on C,
    nonexpansiveness on `pairs` point pairs, the characterization
    pairing, and at p = 2 the projection inequality."""
    if pairs < 1:
        raise InvalidInputError(f"pairs must be >= 1, got {pairs}")
    rng = np.random.default_rng(seed)
    rep = RetractionReport(0.0, 0.0, 0.0, 0.0, -np.inf, np.inf, np.inf, pairs)

    def common_checks(cset, p, hilbert: bool):
        n = cset.dim
        xs = rng.uniform(-6.0, 6.0, size=(pairs, n))
        ys = rng.uniform(-6.0, 6.0, size=(pairs, n))
        qx = np.stack([retract(cset, row, p) for row in xs[:64]])
        qqx = np.stack([retract(cset, row, p) for row in qx])
        rep.max_idempotence_dev = max(
            rep.max_idempotence_dev, float(np.max(np.abs(qqx - qx))))
        members = sample_in_set(cset, 64, seed + 1,
                                bounds=((np.full(n, -6.0), np.full(n, 6.0))
                                        if isinstance(cset, Halfspace) else None))
        fixed = np.stack([retract(cset, row, p) for row in members])
        rep.max_identity_dev = max(
            rep.max_identity_dev, float(np.max(np.abs(fixed - members))))
        probe = xs[0]
        rep_char = verify_characterization(cset, probe, p,
                                           characterization_samples, seed + 2)
        scale = 1.0 + norm_rows(probe[None, :], p)[0] ** 2
        rep.min_characterization = min(rep.min_characterization,
                                       rep_char / scale)
        dev = verify_sunny(cset, probe, p, ts)
        if isinstance(cset, Box):
            rep.max_box_sunny_dev = max(rep.max_box_sunny_dev, dev)
        else:
            rep.max_hilbert_sunny_dev = max(rep.max_hilbert_sunny_dev, dev)
        if isinstance(cset, Box):
            qxs = np.clip(xs, cset.lo, cset.hi)
            qys = np.clip(ys, cset.lo, cset.hi)
        else:
            # retract() is a scalar call for balls and halfspaces; cap the
            # pair count there so the suite stays interactive
            xs, ys = xs[:min(pairs, 2000)], ys[:min(pairs, 2000)]
            qxs = np.stack([retract(cset, row, p) for row in xs])
            qys = np.stack([retract(cset, row, p) for row in ys])
        excess = norm_rows(qxs - qys, p) - norm_rows(xs - ys, p)
        rep.max_nonexpansive_excess = max(rep.max_nonexpansive_excess,
                                          float(np.max(excess)))
        if hilbert:
            gap = (pairing_rows(xs - ys, qxs - qys)
                   - norm_rows(qxs - qys, 2.0) ** 2)
            rep.min_projection_inequality = min(
                rep.min_projection_inequality,
                float(np.min(gap / (1.0 + norm_rows(xs - ys, 2.0) ** 2))))

    for p in p_values:
        for n in (2, 3, 7):
            common_checks(_random_box(rng, n), p, hilbert=(p == 2.0))
    for n in (2, 5):
        common_checks(Ball(n, float(rng.uniform(0.5, 3.0))), 2.0, hilbert=True)
        normal = rng.standard_normal(n)
        common_checks(Halfspace(normal, float(rng.uniform(-1.0, 1.0))), 2.0,
                      hilbert=True)
    return rep
