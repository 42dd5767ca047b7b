"""Log returns, per-series volatility and zero-mean/unit-variance scaling.

R_i(t) = ln P_i(t+1) - ln P_i(t), and the normalized return
r_i(t) = (R_i(t) - <R_i>) / sigma_i with the population standard deviation
(divide by T).  The population denominator is what makes the diagonal of
the correlation matrix exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError
from .ingest import AlignedPanel


@dataclass
class ReturnPanel:
    """N x T log returns with per-series time mean and volatility."""

    tickers: list[str]
    returns: np.ndarray      # shape (N, T)
    means: np.ndarray        # shape (N,)
    volatilities: np.ndarray  # shape (N,), population std

    @property
    def n_series(self) -> int:
        return len(self.tickers)

    @property
    def n_obs(self) -> int:
        return self.returns.shape[1]


@dataclass
class NormalizedPanel:
    """N x T returns rescaled so each row has mean 0 and population std 1."""

    tickers: list[str]
    normalized: np.ndarray   # shape (N, T)

    @property
    def n_series(self) -> int:
        return len(self.tickers)

    @property
    def n_obs(self) -> int:
        return self.normalized.shape[1]


def log_returns(panel: AlignedPanel) -> ReturnPanel:
    """Forward-difference log returns of an aligned panel (T = dates - 1)."""
    if panel.n_dates < 2:
        raise DegenerateSeriesError(
            f"need at least 2 dates to compute returns, got {panel.n_dates}"
        )
    log_prices = np.log(panel.prices)            # (T+1, N)
    rets = np.diff(log_prices, axis=0).T         # (N, T)
    means = rets.mean(axis=1)
    vols = rets.std(axis=1)                      # population denominator
    return ReturnPanel(tickers=list(panel.tickers), returns=rets,
                       means=means, volatilities=vols)


def normalize(rp: ReturnPanel) -> NormalizedPanel:
    """Demean and rescale each series by its own volatility."""
    zero = np.nonzero(rp.volatilities == 0.0)[0]
    if zero.size:
        names = ", ".join(rp.tickers[i] for i in zero)
        raise DegenerateSeriesError(
            f"constant return series (zero volatility) for ticker(s): {names}"
        )
    normalized = (rp.returns - rp.means[:, None]) / rp.volatilities[:, None]
    return NormalizedPanel(tickers=list(rp.tickers), normalized=normalized)


def volatility_report(rp: ReturnPanel) -> list[tuple[str, float]]:
    """(ticker, sigma) pairs in input order, for volatility plots."""
    return [(t, float(s)) for t, s in zip(rp.tickers, rp.volatilities)]
