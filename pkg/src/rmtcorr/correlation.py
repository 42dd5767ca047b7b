"""Equal-time cross-correlation matrix and its coefficient distribution.

C_ij = (1/T) sum_t r_i(t) r_j(t) over normalized returns, so C is
symmetric with unit diagonal and entries in [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .returns import NormalizedPanel


@dataclass
class CorrelationMatrix:
    """N x N correlation coefficients, symmetric by construction."""

    tickers: list[str]
    values: np.ndarray  # shape (N, N)

    @property
    def n_series(self) -> int:
        return len(self.tickers)


@dataclass
class CoefficientStats:
    """Mean/std and unit-area histogram of the off-diagonal coefficients."""

    mean: float
    std: float            # population std over the upper triangle
    bin_width: float
    bin_centers: np.ndarray
    densities: np.ndarray


def correlation_matrix(panel: NormalizedPanel) -> CorrelationMatrix:
    """Time-average of r_i(t) r_j(t); upper triangle mirrored for exact symmetry."""
    if panel.n_obs < 2:
        raise DomainError(f"need T >= 2 observations, got {panel.n_obs}")
    r = panel.normalized
    raw = r @ r.T / panel.n_obs
    c = np.triu(raw)
    c = c + np.triu(raw, k=1).T
    return CorrelationMatrix(tickers=list(panel.tickers), values=c)


def upper_triangle(cm: CorrelationMatrix) -> np.ndarray:
    """The N(N-1)/2 distinct off-diagonal coefficients, row-major order."""
    iu = np.triu_indices(cm.n_series, k=1)
    return cm.values[iu]


def coefficient_stats(cm: CorrelationMatrix, bin_width: float = 0.05) -> CoefficientStats:
    """Summary statistics of the off-diagonal coefficients.

    The diagonal 1s are excluded (they would bias the mean upward).  The
    histogram covers [-1, 1]; values that exceed the range by float noise
    are clipped onto it so the densities integrate to exactly one.
    """
    if bin_width <= 0.0:
        raise DomainError(f"bin width must be positive, got {bin_width}")
    if cm.n_series < 2:
        raise DomainError("need at least 2 series for coefficient statistics")
    coeffs = upper_triangle(cm)
    mean = float(coeffs.mean())
    std = float(coeffs.std())

    n_bins = int(np.ceil(2.0 / bin_width - 1e-9))
    edges = -1.0 + bin_width * np.arange(n_bins + 1)
    edges[-1] = max(edges[-1], 1.0)
    counts, _ = np.histogram(np.clip(coeffs, -1.0, 1.0), bins=edges)
    widths = np.diff(edges)
    densities = counts / (coeffs.size * widths)
    centers = edges[:-1] + widths / 2.0
    return CoefficientStats(mean=mean, std=std, bin_width=bin_width,
                            bin_centers=centers, densities=densities)
