import numpy as np
import pytest

from lpvi import (Ball, Box, Halfspace, InvalidInputError, RetractionMode,
                  ShapeError, UnsupportedRetractionError, WholeSpace,
                  contains, retract, retraction_support, sample_in_set,
                  verify_characterization, verify_sunny)
from lpvi.spaces import norm_rows


UNIT_BOX = Box([0.0, 0.0], [2.0, 2.0])


def test_contains_box():
    assert contains(UNIT_BOX, [1.0, 1.0])
    assert contains(UNIT_BOX, [2.0, 0.0])          # boundary counts
    assert not contains(UNIT_BOX, [3.0, 1.0])
    assert contains(UNIT_BOX, [2.0 + 1e-12, 1.0], tol=1e-9)


def test_contains_ball_and_halfspace():
    ball = Ball(2, 1.0)
    assert contains(ball, [0.6, 0.8])
    assert not contains(ball, [0.8, 0.8])
    hs = Halfspace([1.0, 1.0], 2.0)
    assert contains(hs, [1.0, 1.0])
    assert not contains(hs, [1.5, 1.0])


def test_contains_rejects_negative_tol():
    with pytest.raises(InvalidInputError):
        contains(UNIT_BOX, [1.0, 1.0], tol=-1e-3)


def test_retract_box_clamp_exact():
    out = retract(UNIT_BOX, [3.0, -1.0], 3)
    assert np.array_equal(out, [2.0, 0.0])


@pytest.mark.parametrize("p", [1.5, 2, 3])
def test_retract_is_identity_on_the_set(p):
    x = np.array([1.0, 0.25])
    assert np.array_equal(retract(UNIT_BOX, x, p), x)
    assert np.array_equal(retract(WholeSpace(2), x, p), x)
    if p == 2:
        assert np.array_equal(retract(Ball(2, 2.0), x, p), x)
        assert np.array_equal(retract(Halfspace([1.0, 0.0], 1.0), x, p), x)


def test_retract_ball_radial():
    out = retract(Ball(2, 1.0), [3.0, 4.0], 2)
    np.testing.assert_allclose(out, [0.6, 0.8], rtol=0, atol=1e-15)


def test_retract_halfspace_offset():
    out = retract(Halfspace([0.0, 1.0], 0.0), [1.0, 3.0], 2)
    np.testing.assert_allclose(out, [1.0, 0.0], rtol=0, atol=0)


def test_retract_wrong_dimension():
    with pytest.raises(ShapeError):
        retract(UNIT_BOX, [1.0, 1.0, 1.0], 2)
    with pytest.raises(InvalidInputError):
        retract(UNIT_BOX, [np.nan, 0.0], 2)


@pytest.mark.parametrize("cset", [Ball(2, 1.0), Halfspace([1.0, 0.0], 0.0)])
@pytest.mark.parametrize("p", [1.5, 3, 4])
def test_ball_and_halfspace_need_p2(cset, p):
    support = retraction_support(cset, p)
    assert support.mode is RetractionMode.UNSUPPORTED
    assert "p = 2" in support.reason
    with pytest.raises(UnsupportedRetractionError):
        retract(cset, [5.0, 5.0], p)


def test_retraction_support_modes():
    assert retraction_support(UNIT_BOX, 3).mode is RetractionMode.EXACT_SUNNY
    assert retraction_support(WholeSpace(3), 1.5).mode is RetractionMode.EXACT_SUNNY
    assert retraction_support(Ball(2, 1.0), 2).mode is RetractionMode.METRIC_PROJECTION
    assert retraction_support(Halfspace([1.0], 0.0), 2.0).mode is RetractionMode.METRIC_PROJECTION


def test_degenerate_sets_rejected():
    with pytest.raises(InvalidInputError):
        Box([0.0, 1.0], [2.0, 0.5])
    with pytest.raises(InvalidInputError):
        Ball(2, 0.0)
    with pytest.raises(InvalidInputError):
        Ball(2, -1.0)
    with pytest.raises(InvalidInputError):
        Halfspace([0.0, 0.0], 1.0)
    with pytest.raises(InvalidInputError):
        WholeSpace(0)


def test_single_point_box_is_allowed():
    point = Box([1.0, 1.0], [1.0, 1.0])
    assert np.array_equal(retract(point, [9.0, -9.0], 1.5), [1.0, 1.0])


def test_verify_sunny_box_exact_zero():
    dev = verify_sunny(UNIT_BOX, [3.0, -1.0], 3, ts=(0.0, 0.5, 1.0, 2.0))
    assert dev == 0.0


def test_verify_sunny_inside_point():
    assert verify_sunny(UNIT_BOX, [1.0, 1.0], 2, ts=(0.0, 1.0, 7.0)) == 0.0


def test_verify_sunny_ball_p2():
    dev = verify_sunny(Ball(2, 1.0), [3.0, 4.0], 2, ts=(0.0, 1.0, 3.0))
    assert dev <= 1e-12


def test_verify_sunny_rejects_negative_t():
    with pytest.raises(InvalidInputError):
        verify_sunny(UNIT_BOX, [3.0, -1.0], 2, ts=(0.5, -1.0))


def test_characterization_box_example():
    worst = verify_characterization(UNIT_BOX, [3.0, -1.0], 3, 500, seed=0)
    assert worst >= -1e-9


def test_characterization_inside_point_is_exactly_zero():
    assert verify_characterization(UNIT_BOX, [1.5, 0.5], 3, 100, seed=1) == 0.0


def test_characterization_ball_p2():
    worst = verify_characterization(Ball(2, 1.0), [2.0, 0.0], 2, 300, seed=2)
    assert worst >= -1e-9


def test_characterization_halfspace_p2():
    hs = Halfspace([1.0, 1.0], 2.0)
    worst = verify_characterization(hs, [3.0, 3.0], 2, 300, seed=3)
    assert worst >= -1e-9


def test_box_retraction_nonexpansive_bulk():
    rng = np.random.default_rng(11)
    box = Box([-1.0, 0.5, -3.0], [1.0, 2.0, -1.0])
    xs = rng.uniform(-6.0, 6.0, size=(10_000, 3))
    ys = rng.uniform(-6.0, 6.0, size=(10_000, 3))
    for p in (1.5, 2.0, 3.0):
        qx = np.clip(xs, box.lo, box.hi)
        qy = np.clip(ys, box.lo, box.hi)
        excess = norm_rows(qx - qy, p) - norm_rows(xs - ys, p)
        assert float(np.max(excess)) <= 1e-12 * (1.0 + float(np.max(norm_rows(xs - ys, p))))


def test_p2_projection_inequality():
    # metric projection onto a ball / halfspace: <x - Qx, Qx - y> >= 0
    rng = np.random.default_rng(19)
    for cs, bounds in ((Ball(2, 1.5), None),
                       (Halfspace([1.0, -2.0], 0.5), ([-4.0, -4.0], [4.0, 4.0]))):
        ys = sample_in_set(cs, 200, seed=7, bounds=bounds)
        for _ in range(50):
            x = rng.uniform(-5.0, 5.0, size=2)
            qx = retract(cs, x, 2)
            vals = (ys - qx) @ (x - qx)
            assert float(np.max(vals)) <= 1e-9 * (1.0 + float(np.max(np.abs(vals))))


def test_sample_in_set_membership_and_prefix():
    for cset in (UNIT_BOX, Ball(3, 2.0)):
        long = sample_in_set(cset, 200, seed=5)
        short = sample_in_set(cset, 80, seed=5)
        assert long.shape == (200, cset.dim)
        assert np.array_equal(long[:80], short)
        assert contains(cset, long[0])
        assert all(contains(cset, row) for row in long[::37])


def test_sample_unbounded_needs_bounds():
    with pytest.raises(InvalidInputError):
        sample_in_set(WholeSpace(2), 10, seed=0)
    pts = sample_in_set(WholeSpace(2), 10, seed=0, bounds=([0.0, 0.0], [1.0, 1.0]))
    assert pts.shape == (10, 2)
    assert np.all((pts >= 0.0) & (pts <= 1.0))


def test_sample_gives_up_when_region_misses_the_set():
    ball = Ball(2, 1.0)
    with pytest.raises(InvalidInputError):
        sample_in_set(ball, 1, seed=0, bounds=([5.0, 5.0], [6.0, 6.0]))
