from __future__ import annotations

from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from rmtcorr.ingest import AlignedPanel, WindowSpec

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_panel() -> Path:
    return DATA_DIR / "synthetic_panel.csv"


def consecutive_dates(count: int, start: date = date(2015, 1, 1)) -> list[date]:
    return [start + timedelta(days=k) for k in range(count)]


def aligned_from_prices(prices, tickers=None, start: date = date(2015, 1, 1)) -> AlignedPanel:
    prices = np.asarray(prices, dtype=float)
    if tickers is None:
        tickers = [f"T{j:02d}" for j in range(prices.shape[1])]
    return AlignedPanel(dates=consecutive_dates(prices.shape[0], start),
                        tickers=list(tickers), prices=prices)


def panel_from_returns(rets, start_price: float = 100.0,
                       start: date = date(2015, 1, 1)) -> tuple[AlignedPanel, WindowSpec]:
    """Price panel whose log returns reproduce ``rets`` (N x T), plus a
    window covering all of it."""
    rets = np.asarray(rets, dtype=float)
    log_prices = np.concatenate(
        [np.zeros((rets.shape[0], 1)), np.cumsum(rets, axis=1)], axis=1)
    prices = start_price * np.exp(log_prices).T  # (T+1, N)
    panel = aligned_from_prices(prices, start=start)
    window = WindowSpec("all", panel.dates[0], panel.dates[-1])
    return panel, window
