import dataclasses

import pytest

from lpvi import InvalidInputError
from lpvi.sweeps import duality_sweep, retraction_suite

TOL = 1e-9


def test_duality_sweep_clean_across_exponents():
    rep = duality_sweep((1.5, 2.0, 3.0, 4.0), (2, 10, 50), 300, seed=0)
    assert rep.worst_identity <= TOL
    assert rep.worst_norm <= TOL
    assert rep.worst_homogeneity <= TOL
    assert rep.worst_attainment <= TOL
    assert rep.worst_bound_excess <= TOL
    assert rep.worst_hilbert is not None and rep.worst_hilbert <= 1e-12
    assert rep.checks == 4 * 3 * 300


def test_duality_sweep_without_p2_has_no_hilbert_entry():
    rep = duality_sweep((1.5, 3.0), (2,), 100, seed=1)
    assert rep.worst_hilbert is None


def test_duality_sweep_is_deterministic():
    a = duality_sweep((3.0,), (2, 10), 200, seed=42)
    b = duality_sweep((3.0,), (2, 10), 200, seed=42)
    assert dataclasses.astuple(a) == dataclasses.astuple(b)


def test_duality_sweep_validates_count():
    with pytest.raises(InvalidInputError):
        duality_sweep((2.0,), (2,), 0, seed=0)


def test_retraction_suite_clean():
    rep = retraction_suite(pairs=2000, characterization_samples=200, seed=3)
    assert rep.max_box_sunny_dev == 0.0
    assert rep.max_hilbert_sunny_dev <= 1e-12
    assert rep.max_idempotence_dev <= 1e-12
    assert rep.max_identity_dev <= 1e-12
    assert rep.max_nonexpansive_excess <= 1e-12
    assert rep.min_characterization >= -TOL
    assert rep.min_projection_inequality >= -TOL
    assert rep.pairs == 2000


def test_retraction_suite_validates_pairs():
    with pytest.raises(InvalidInputError):
        retraction_suite(pairs=0)
