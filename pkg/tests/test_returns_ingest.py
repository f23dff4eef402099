import datetime as dt
import json
import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stablekurt.distributions import SeedSpec, StableParams, sample_gaussian, sample_symmetric_stable
from stablekurt.errors import DegenerateSampleError, IngestionError, InsufficientDataError, ParameterError
from stablekurt.moments import excess_kurtosis
from stablekurt.returns_ingest import (
    PriceSeries,
    ReturnSeries,
    load_price_csv,
    log_returns,
    rolling_kurtosis,
    window_estimates,
    window_report_json,
)
from stablekurt.tail_inference import fit_growth_slope

D0 = dt.date(2013, 5, 1)


def series(closes):
    return PriceSeries(tuple(D0 + dt.timedelta(days=i) for i in range(len(closes))), closes)


def write(tmp_path, text, name="prices.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_two_rows(tmp_path):
    ps = load_price_csv(write(tmp_path, "date,close\n2018-01-02,100\n2018-01-03,101\n"))
    assert len(ps) == 2
    assert ps.dates == (dt.date(2018, 1, 2), dt.date(2018, 1, 3))
    assert ps.closes.tolist() == [100.0, 101.0]
    assert ps.warnings == ()


def test_zero_close_names_line(tmp_path):
    rows = [f"2018-01-{d:02d},{100 + d}" for d in range(1, 6)] + ["2018-01-06,0"]
    with pytest.raises(IngestionError) as info:
        load_price_csv(write(tmp_path, "date,close\n" + "\n".join(rows) + "\n"))
    assert info.value.line == 7
    assert "line 7" in str(info.value)


def test_unsorted_is_sorted_with_warning(tmp_path, caplog):
    text = "date,close\n2018-01-03,101\n2018-01-02,100\n2018-01-04,102\n"
    with caplog.at_level(logging.WARNING):
        ps = load_price_csv(write(tmp_path, text))
    assert ps.closes.tolist() == [100.0, 101.0, 102.0]
    assert len(ps.warnings) == 1
    assert "sorted" in caplog.text


@pytest.mark.parametrize("text, line", [
    ("day,close\n2018-01-02,1\n", 1),
    ("date,close\n2018-01-02,1\n2018-01-03,abc\n", 3),
    ("date,close\n2018-01-02,1\nnot-a-date,2\n", 3),
    ("date,close\n2018-01-02,1\n2018-01-02,2\n", 3),
    ("date,close\n2018-01-02,1\n2018-01-03,-4\n", 3),
    ("date,close\n2018-01-02\n", 2),
    ("", 1),
])
def test_ingestion_errors(tmp_path, text, line):
    with pytest.raises(IngestionError) as info:
        load_price_csv(write(tmp_path, text))
    assert info.value.line == line


def test_custom_columns_and_extra_fields(tmp_path):
    text = "Date,Open,Adj Close\n2018-01-02,1,50.5\n2018-01-03,1,51\n"
    ps = load_price_csv(write(tmp_path, text), date_column="Date", close_column="Adj Close")
    assert ps.closes.tolist() == [50.5, 51.0]


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    ps = series(np.exp(np.cumsum(rng.normal(0, 0.01, 50))) * 100)
    back = load_price_csv(write(tmp_path, ps.to_csv()))
    assert back.dates == ps.dates
    assert np.array_equal(back.closes, ps.closes)


def test_log_returns_examples():
    assert log_returns(series([1.0, math.e])).returns == pytest.approx([1.0], rel=1e-15)
    assert log_returns(series([5.0, 5.0, 5.0])).returns.tolist() == [0.0, 0.0]
    r = log_returns(series([100.0, 101.0]))
    assert r.returns[0] == pytest.approx(math.log(1.01), rel=1e-14)
    assert r.returns[0] == pytest.approx(0.00995, abs=1e-5)
    assert r.dates == (D0 + dt.timedelta(days=1),)
    with pytest.raises(InsufficientDataError):
        log_returns(series([100.0]))


@settings(max_examples=50)
@given(
    closes=st.lists(st.floats(0.01, 1e6), min_size=2, max_size=30),
    power=st.integers(-20, 20),
    c=st.floats(1e-3, 1e3),
)
def test_price_scaling_leaves_returns(closes, power, c):
    base = log_returns(series(closes)).returns
    exact = log_returns(series([v * 2.0**power for v in closes])).returns
    assert np.array_equal(base, exact)
    np.testing.assert_allclose(log_returns(series([v * c for v in closes])).returns, base, rtol=0, atol=1e-12)


def test_rolling_kurtosis_gaussian_is_flat():
    r = sample_gaussian(1.0, 1250, SeedSpec(31))
    curve = rolling_kurtosis(ReturnSeries(r))
    assert curve.checkpoints[0] == 14 and curve.checkpoints[-1] == 1250
    assert -0.3 <= curve.g2_values[-1] <= 0.3
    assert abs(fit_growth_slope(curve).slope) <= 0.001
    assert curve.g2_values[-1] == pytest.approx(excess_kurtosis(r), rel=1e-9)


def test_rolling_kurtosis_stable_slope():
    slopes = [
        fit_growth_slope(rolling_kurtosis(sample_symmetric_stable(StableParams(1.7), 1250, SeedSpec(32, s)))).slope
        for s in range(400)
    ]
    assert abs(np.mean(slopes) - 0.15) <= 0.05


def test_rolling_kurtosis_errors():
    with pytest.raises(InsufficientDataError):
        rolling_kurtosis(np.array([0.1, -0.2, 0.3]))
    with pytest.raises(ParameterError):
        rolling_kurtosis(np.arange(100.0), step=0)
    with pytest.raises(DegenerateSampleError) as info:
        rolling_kurtosis(np.r_[np.zeros(20), np.arange(20.0)], step=10)
    assert info.value.checkpoint == 14


def test_window_estimates_self_consistency():
    kw = []
    for s in range(100):
        r = sample_symmetric_stable(StableParams(1.7, sigma=0.01), 1000, SeedSpec(33, s))
        (w,) = window_estimates(r, [(0, 1000)])
        kw.append(w.kogon_williams.alpha_hat)
        assert w.stats.n == 1000 and w.kurtosis.method == "kurtosis-ratio"
    assert 1.6 <= np.median(kw) <= 1.8


def test_window_estimates_track_regime_change():
    hits_k = hits_kw = 0
    for s in range(100):
        first = sample_symmetric_stable(StableParams(1.9, sigma=0.01), 1000, SeedSpec(34, 2 * s))
        second = sample_symmetric_stable(StableParams(1.3, sigma=0.01), 1000, SeedSpec(34, 2 * s + 1))
        w1, w2 = window_estimates(np.r_[first, second], [(1000, 2000), (0, 1000)])
        assert (w1.start, w2.start) == (0, 1000)
        hits_k += w2.kurtosis.alpha_hat < w1.kurtosis.alpha_hat
        hits_kw += w2.kogon_williams.alpha_hat < w1.kogon_williams.alpha_hat
    assert hits_k >= 90 and hits_kw >= 90


def test_window_estimates_validation():
    r = sample_gaussian(1.0, 500, SeedSpec(35))
    assert window_estimates(r, []) == []
    for bad in [(0, 99), (450, 600), (-1, 200), (300, 200)]:
        with pytest.raises(ParameterError):
            window_estimates(r, [bad])


def test_window_report_json():
    r = sample_symmetric_stable(StableParams(1.7, sigma=0.01), 400, SeedSpec(36))
    doc = json.loads(window_report_json(window_estimates(r, [(0, 200), (200, 400)]), source="x"))
    assert doc["source"] == "x"
    assert [w["start"] for w in doc["windows"]] == [0, 200]
    assert doc["windows"][0]["kogon_williams"]["sigma_hat"] > 0
