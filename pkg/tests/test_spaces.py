import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpvi import (InvalidInputError, ShapeError, SpaceSpec,
                  UnsupportedSpaceError, dual_exponent, duality_map, p_norm,
                  pairing)

# frozen reference values (high-precision arithmetic, rounded to double)
ROOT4_2 = 1.189207115002721    # 2**(1/4)
SQRT2 = 1.4142135623730951     # 2**(1/2)


def test_p_norm_euclidean():
    assert p_norm([3.0, 4.0], 2) == 5.0


def test_p_norm_zero_vector():
    for p in (1.5, 2, 3, 7.5):
        assert p_norm([0.0, 0.0, 0.0], p) == 0.0


def test_p_norm_p4():
    assert p_norm([1.0, 1.0], 4) == pytest.approx(ROOT4_2, rel=1e-15)


def test_p_norm_huge_entries_do_not_overflow():
    # naive sum of |x|^p would overflow; the row-scaled form must not
    assert p_norm([1e300, 1e300], 4) == pytest.approx(1e300 * ROOT4_2, rel=1e-12)


def test_dual_exponent_values():
    assert dual_exponent(2) == 2.0
    assert dual_exponent(4) == pytest.approx(4.0 / 3.0, rel=1e-15)
    assert dual_exponent(1.5) == pytest.approx(3.0, rel=1e-15)


@pytest.mark.parametrize("p", [1, 1.0, 0.5, 0, -2, math.inf, math.nan, "2"])
def test_exponent_out_of_range_rejected(p):
    with pytest.raises(UnsupportedSpaceError):
        p_norm([1.0, 2.0], p)
    with pytest.raises(UnsupportedSpaceError):
        dual_exponent(p)


def test_pairing_values():
    assert pairing([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert pairing([2.0, 3.0], [1.0, 1.0]) == 5.0


def test_pairing_with_duality_map_gives_norm_squared():
    f = duality_map([3.0, 4.0], 2)
    assert pairing(f, [3.0, 4.0]) == 25.0


def test_pairing_shape_mismatch():
    with pytest.raises(ShapeError):
        pairing([1.0, 2.0, 3.0], [1.0, 2.0])


def test_vectors_must_be_one_dimensional_and_finite():
    with pytest.raises(ShapeError):
        p_norm([[1.0, 2.0]], 2)
    with pytest.raises(ShapeError):
        p_norm(np.empty(0), 2)
    with pytest.raises(InvalidInputError):
        p_norm([1.0, np.inf], 2)
    with pytest.raises(InvalidInputError):
        duality_map([np.nan, 0.0], 3)


def test_duality_map_is_identity_at_p2():
    x = np.array([3.0, 4.0])
    assert np.array_equal(duality_map(x, 2), x)


def test_duality_map_of_zero_is_zero():
    for p in (1.5, 2, 4):
        assert np.array_equal(duality_map([0.0, 0.0, 0.0], p), np.zeros(3))


def test_duality_map_p4_closed_form():
    x = np.array([1.0, 1.0])
    f = duality_map(x, 4)
    np.testing.assert_allclose(f, [2.0 ** -0.5, 2.0 ** -0.5], rtol=1e-15)
    # both defining identities at this point
    assert pairing(f, x) == pytest.approx(SQRT2, rel=1e-13)          # |x|_4^2
    assert p_norm(f, dual_exponent(4)) == pytest.approx(ROOT4_2, rel=1e-13)


def test_duality_map_handles_zero_components_for_small_p():
    # 0 ** (p-1) terms must come out as 0, not nan
    f = duality_map([0.0, 2.0], 1.5)
    assert f[0] == 0.0 and np.isfinite(f[1])


def test_space_spec_validation():
    s = SpaceSpec(3, 2.5)
    assert (s.n, s.p) == (3, 2.5)
    with pytest.raises(InvalidInputError):
        SpaceSpec(0, 2)
    with pytest.raises(InvalidInputError):
        SpaceSpec(2.5, 2)
    with pytest.raises(UnsupportedSpaceError):
        SpaceSpec(2, 1)


vectors = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    min_size=1, max_size=12,
)
exponents = st.floats(min_value=1.05, max_value=12.0)


@given(xs=vectors, p=exponents)
@settings(max_examples=200, deadline=None)
def test_defining_identities(xs, p):
    x = np.asarray(xs)
    f = duality_map(x, p)
    nx = p_norm(x, p)
    assert abs(pairing(f, x) - nx ** 2) <= 1e-9 * (1.0 + nx ** 2)
    assert abs(p_norm(f, dual_exponent(p)) - nx) <= 1e-9 * (1.0 + nx)


@given(xs=vectors, p=exponents,
       t=st.floats(min_value=0.0, max_value=1e3))
@settings(max_examples=200, deadline=None)
def test_positive_homogeneity(xs, p, t):
    x = np.asarray(xs)
    lhs = duality_map(t * x, p)
    rhs = t * duality_map(x, p)
    dev = float(np.max(np.abs(lhs - rhs)))
    assert dev <= 1e-9 * (1.0 + t * p_norm(x, p))


@given(xs=vectors)
@settings(max_examples=200, deadline=None)
def test_hilbert_degeneration(xs):
    x = np.asarray(xs)
    dev = np.max(np.abs(duality_map(x, 2) - x)) if x.size else 0.0
    assert dev <= 1e-12 * (1.0 + float(np.max(np.abs(x))))


def test_dual_exponent_is_an_involution():
    for p in (1.2, 1.5, 2.0, 3.0, 7.7):
        assert dual_exponent(dual_exponent(p)) == pytest.approx(p, rel=1e-12)
        assert 1.0 / p + 1.0 / dual_exponent(p) == pytest.approx(1.0, rel=1e-12)


def test_norm_duality_spot_check():
    # |x|_p = sup over unit-q f of <f, x>, attained by Jx / |x|_p
    rng = np.random.default_rng(5)
    for p in (1.5, 2.0, 3.0):
        q = dual_exponent(p)
        x = rng.uniform(-3.0, 3.0, size=6)
        nx = p_norm(x, p)
        best = max(
            pairing(f / p_norm(f, q), x)
            for f in rng.standard_normal(size=(200, 6))
        )
        assert best <= nx * (1.0 + 1e-9)
        attain = pairing(duality_map(x, p) / nx, x)
        assert attain == pytest.approx(nx, rel=1e-12)
