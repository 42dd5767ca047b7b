import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmtcorr.errors import DegenerateSeriesError
from rmtcorr.returns import ReturnPanel, log_returns, normalize, volatility_report
from rmtcorr.rmt import standard_normals

from .conftest import aligned_from_prices


def single_series(prices):
    return aligned_from_prices(np.asarray(prices, dtype=float)[:, None], ["X"])


class TestLogReturns:
    def test_constant_prices(self):
        rp = log_returns(single_series([100.0, 100.0, 100.0]))
        np.testing.assert_array_equal(rp.returns, [[0.0, 0.0]])
        assert rp.volatilities[0] == 0.0

    def test_unit_return(self):
        rp = log_returns(single_series([1.0, math.e]))
        assert rp.returns[0, 0] == pytest.approx(1.0, abs=1e-15)

    def test_ten_percent_move(self):
        expected = math.log(110.0) - math.log(100.0)  # = ln(1.1)
        rp = log_returns(single_series([100.0, 110.0]))
        assert rp.returns[0, 0] == pytest.approx(expected, abs=1e-15)
        assert rp.returns[0, 0] == pytest.approx(0.0953102, abs=1e-7)

    def test_t_is_dates_minus_one(self):
        rp = log_returns(single_series([1.0, 2.0, 3.0, 4.0]))
        assert rp.n_obs == 3

    def test_too_few_dates(self):
        with pytest.raises(DegenerateSeriesError):
            log_returns(single_series([100.0]))

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.01, 100.0), st.integers(0, 2 ** 32))
    def test_price_scaling_invariance(self, scale, seed):
        rng = np.random.default_rng(seed)
        prices = rng.uniform(5.0, 50.0, size=(8, 3))
        base = log_returns(aligned_from_prices(prices))
        scaled_prices = prices.copy()
        scaled_prices[:, 1] *= scale
        scaled = log_returns(aligned_from_prices(scaled_prices))
        np.testing.assert_allclose(scaled.returns[1], base.returns[1], atol=1e-12)

    def test_means_and_vols_populated(self):
        rp = log_returns(single_series([1.0, 2.0, 8.0]))
        assert rp.means[0] == pytest.approx(rp.returns[0].mean())
        assert rp.volatilities[0] == pytest.approx(rp.returns[0].std())


def panel_of_returns(rows):
    rows = np.asarray(rows, dtype=float)
    return ReturnPanel(tickers=[f"T{i}" for i in range(rows.shape[0])],
                       returns=rows, means=rows.mean(axis=1),
                       volatilities=rows.std(axis=1))


class TestNormalize:
    def test_hand_worked_row(self):
        # mean 2, population std sqrt(2/3) -> (-sqrt(3/2), 0, +sqrt(3/2))
        edge = math.sqrt(1.5)
        out = normalize(panel_of_returns([[1.0, 2.0, 3.0]]))
        np.testing.assert_allclose(out.normalized[0], [-edge, 0.0, edge], atol=1e-14)

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        once = normalize(panel_of_returns(rng.normal(0.001, 0.02, size=(4, 50))))
        twice = normalize(panel_of_returns(once.normalized))
        np.testing.assert_allclose(twice.normalized, once.normalized, atol=1e-12)

    def test_rows_have_zero_mean_unit_std(self):
        rng = np.random.default_rng(4)
        out = normalize(panel_of_returns(rng.normal(0.01, 0.5, size=(5, 37))))
        assert np.abs(out.normalized.mean(axis=1)).max() < 1e-12
        assert np.abs(out.normalized.std(axis=1) - 1.0).max() < 1e-12

    def test_second_moment_is_one(self):
        # (1/T) sum r^2 = 1 is what pins the correlation diagonal at 1
        rng = np.random.default_rng(5)
        out = normalize(panel_of_returns(rng.normal(0.0, 2.0, size=(6, 41))))
        second = (out.normalized ** 2).mean(axis=1)
        assert np.abs(second - 1.0).max() < 1e-12

    def test_constant_row_names_ticker(self):
        with pytest.raises(DegenerateSeriesError, match="T1"):
            normalize(panel_of_returns([[1.0, 2.0, 3.0], [0.5, 0.5, 0.5]]))


class TestVolatilityReport:
    def test_constant_series_zero(self):
        report = volatility_report(log_returns(single_series([7.0, 7.0, 7.0])))
        assert report == [("X", 0.0)]

    def test_alternating_unit_returns(self):
        # returns +1, -1, +1, -1: mean 0, population std exactly 1
        prices = np.exp([0.0, 1.0, 0.0, 1.0, 0.0])
        report = volatility_report(log_returns(single_series(prices)))
        assert report[0][1] == pytest.approx(1.0, abs=1e-12)

    def test_ordering_matches_tickers(self):
        rows = np.array([[0.1, -0.1], [0.2, -0.2]])
        rp = panel_of_returns(rows)
        report = volatility_report(rp)
        assert [t for t, _ in report] == rp.tickers
        assert report[0][1] < report[1][1]

    def test_monte_carlo_convergence(self):
        # frozen after checking: sigma_true = 0.02, T = 10000 lands within 5%
        rets = 0.02 * standard_normals(7, 10000)[None, :]
        sigma = volatility_report(panel_of_returns(rets))[0][1]
        assert abs(sigma - 0.02) < 0.001
