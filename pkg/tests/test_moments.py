from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from stablekurt.distributions import SeedSpec, StableParams, sample_symmetric_stable
from stablekurt.errors import DegenerateSampleError, InsufficientDataError, ParameterError
from stablekurt.moments import (
    GrowthCurve,
    compute_stats,
    excess_kurtosis,
    growth_curve,
    kurtosis_ratio,
    regular_checkpoints,
    skewness,
)


def exact_moments(values):
    """Rational-arithmetic oracle: (m2, m3, m4, b2)."""
    xs = [Fraction(v) for v in values]
    n = len(xs)
    mean = sum(xs) / n
    m = [sum((x - mean) ** k for x in xs) / n for k in (2, 3, 4)]
    return m[0], m[1], m[2], m[2] / m[0] ** 2


def test_hand_example_one_to_five():
    s = compute_stats([1, 2, 3, 4, 5])
    m2, m3, m4, b2 = exact_moments([1, 2, 3, 4, 5])
    assert (m2, m4, b2) == (2, Fraction(34, 5), Fraction(17, 10))
    assert s.m2 == pytest.approx(2.0, rel=1e-15)
    assert s.m4 == pytest.approx(6.8, rel=1e-15)
    assert s.b2 == pytest.approx(1.7, rel=1e-15)
    assert s.g2 == pytest.approx(-1.3, rel=1e-14)
    assert s.g2 == s.b2 - 3.0
    assert excess_kurtosis([1, 2, 3, 4, 5]) == pytest.approx(-1.3, rel=1e-14)
    assert kurtosis_ratio([1, 2, 3, 4, 5]) == pytest.approx(0.34, rel=1e-14)


def test_two_point_attains_lower_bound():
    s = compute_stats([-1, 1, -1, 1])
    assert s.b2 == 1.0
    assert s.c == 0.25


def test_skewness_examples():
    assert skewness([-2, -1, 0, 1, 2]) == 0.0
    m2, m3, _, _ = exact_moments([0, 0, 0, 1])
    assert (m2, m3) == (Fraction(3, 16), Fraction(3, 32))
    assert skewness([0, 0, 0, 1]) == pytest.approx(float(m3) / float(m2) ** 1.5, rel=1e-14)
    assert skewness([0, 0, 0, 1]) == pytest.approx(1.1547005383792515, rel=1e-12)


def test_errors():
    with pytest.raises(DegenerateSampleError):
        compute_stats([7, 7, 7, 7, 7])
    with pytest.raises(InsufficientDataError):
        compute_stats([1, 2, 3])
    with pytest.raises(ParameterError):
        compute_stats([1, 2, np.nan, 4])
    with pytest.raises(ParameterError):
        compute_stats(np.ones((2, 3)))


def test_extreme_magnitudes():
    tiny = compute_stats([0.0, 0.0, 0.0, 2.3e-86])
    assert tiny.b2 == pytest.approx(compute_stats([0, 0, 0, 1]).b2, rel=1e-14)
    huge = compute_stats(np.array([1.0, 2.0, 3.0, 4.0, 5.0]) * 1e200)
    assert huge.b2 == pytest.approx(1.7, rel=1e-14)


def test_constant_sample_with_inexact_mean():
    # mean of three 0.1s is not 0.1 in binary floating point
    with pytest.raises(DegenerateSampleError):
        compute_stats([0.1] * 7)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=4, max_size=40).filter(lambda v: len(set(v)) > 1))
def test_matches_rational_oracle(values):
    s = compute_stats(values)
    m2, m3, m4, b2 = exact_moments(values)
    assert s.m2 == pytest.approx(float(m2), rel=1e-12)
    assert s.m4 == pytest.approx(float(m4), rel=1e-12)
    assert s.b2 == pytest.approx(float(b2), rel=1e-12)
    assert s.m3 == pytest.approx(float(m3), rel=1e-9, abs=1e-9 * float(m2) ** 1.5)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=4, max_size=60))
def test_bound(values):
    try:
        s = compute_stats(values)
    except DegenerateSampleError:
        return
    assert 1.0 <= s.b2 <= s.n
    assert 0.0 < s.c <= 1.0


def _stable(n, stream, alpha=1.5):
    return sample_symmetric_stable(StableParams(alpha), n, SeedSpec(77, stream))


@settings(max_examples=100, deadline=None)
@given(
    stream=st.integers(0, 10_000),
    a=st.floats(-1e3, 1e3),
    c=st.floats(0.1, 10.0),
    flip=st.booleans(),
)
def test_location_scale_invariance(stream, a, c, flip):
    x = _stable(300, stream)
    c = -c if flip else c
    base, moved = compute_stats(x), compute_stats(a + c * x)
    assert moved.b2 == pytest.approx(base.b2, rel=1e-10)
    assert moved.g2 == pytest.approx(base.g2, rel=1e-10)
    assert abs(moved.g1) == pytest.approx(abs(base.g1), rel=1e-10)
    if c > 0:
        assert moved.g1 == pytest.approx(base.g1, rel=1e-10)


def test_affine_image_example():
    x = _stable(500, 1)
    assert excess_kurtosis(5 * x + 100) == pytest.approx(excess_kurtosis(x), rel=1e-10)


def test_permutation_invariance(rng):
    x = _stable(1000, 2)
    s, p = compute_stats(x), compute_stats(rng.permutation(x))
    for field in ("m2", "m4", "b2", "g2"):
        assert getattr(p, field) == pytest.approx(getattr(s, field), rel=1e-12)


def test_against_scipy():
    x = _stable(2000, 3, alpha=1.8)
    s = compute_stats(x)
    assert s.g2 == pytest.approx(stats.kurtosis(x, fisher=True, bias=True), rel=1e-10)
    assert s.g1 == pytest.approx(stats.skew(x, bias=True), rel=1e-10)


def test_growth_curve_prefixes():
    x = _stable(500, 4, alpha=1.2)
    cps = regular_checkpoints(500)
    assert cps.tolist() == list(range(50, 501, 50))
    curve = growth_curve(x, cps)
    assert len(curve) == 10
    assert curve.g2_values[-1] == excess_kurtosis(x)
    for k, g in zip(curve.checkpoints, curve.g2_values):
        assert g == pytest.approx(stats.kurtosis(x[:k], fisher=True, bias=True), rel=1e-9)
        assert 1.0 <= g + 3.0 <= k


def test_growth_curve_order_dependent():
    x = _stable(200, 5, alpha=1.2)
    a = growth_curve(x, [50, 100, 200])
    b = growth_curve(x[::-1], [50, 100, 200])
    assert a.g2_values[-1] == pytest.approx(b.g2_values[-1], rel=1e-12)
    assert not np.allclose(a.g2_values[:2], b.g2_values[:2])


@pytest.mark.parametrize("cps", [[50, 50, 100], [100, 50], [3, 10], [50, 600], []])
def test_growth_curve_bad_checkpoints(cps):
    with pytest.raises(ParameterError):
        growth_curve(np.arange(500.0), cps)


def test_growth_curve_degenerate_prefix_names_checkpoint():
    x = np.array([5.0] * 6 + [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(DegenerateSampleError) as info:
        growth_curve(x, [6, 8, 10])
    assert info.value.checkpoint == 6
    assert growth_curve(x, [7, 10]).checkpoints.tolist() == [7, 10]


def test_growth_curve_csv_round_trip():
    curve = growth_curve(_stable(300, 6), [100, 200, 300])
    text = curve.to_csv()
    assert text.splitlines()[0] == "n,g2"
    back = GrowthCurve.from_csv(text)
    assert back.checkpoints.tolist() == [100, 200, 300]
    assert np.array_equal(back.g2_values, curve.g2_values)
