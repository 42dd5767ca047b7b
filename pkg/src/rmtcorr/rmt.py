"""Random-matrix null model for correlation spectra.

For N independent series of L standard-normal observations with
Q = L/N >= 1, the eigenvalue density of the sample correlation matrix
approaches

    p(lam) = Q/(2 pi) * sqrt((lam_plus - lam)(lam - lam_minus)) / lam

on the support [lam_minus, lam_plus] with lam_pm = 1 + 1/Q +- 2 sqrt(1/Q).
Empirical eigenvalues outside the support carry structure that a random
panel cannot produce.

Surrogate panels are drawn from a splitmix64 generator feeding a
Box-Muller transform, so the same (N, L, seed) produces the identical
stream in any implementation of this scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .correlation import correlation_matrix
from .errors import DomainError
from .returns import ReturnPanel, normalize
from .spectral import SpectralDecomposition, eigendecompose

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = 0xFFFFFFFFFFFFFFFF


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of a splitmix64 generator seeded with ``seed``."""
    steps = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + steps * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def standard_normals(seed: int, count: int) -> np.ndarray:
    """Deterministic N(0,1) stream: splitmix64 words through Box-Muller.

    Word 2k maps to u1 in (0, 1], word 2k+1 to u2 in [0, 1); the pair
    yields r*cos and r*sin with r = sqrt(-2 ln u1).  Odd counts drop the
    final sine term.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    pairs = (count + 1) // 2
    words = splitmix64(seed, 2 * pairs)
    u1 = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0 ** -53
    u2 = (words[1::2] >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


@dataclass(frozen=True)
class MPModel:
    """Null-model parameters: observation ratio and spectrum bounds."""

    q: float
    lam_minus: float
    lam_plus: float


@dataclass
class SpectrumClassification:
    """Partition of a spectrum against the null bounds (bounds count as bulk)."""

    below: np.ndarray
    bulk: np.ndarray
    above: np.ndarray

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.below.size, self.bulk.size, self.above.size


def mp_bounds(q: float) -> MPModel:
    """Spectrum edges 1 + 1/Q +- 2 sqrt(1/Q); only Q >= 1 is supported."""
    if q < 1.0:
        raise DomainError(
            f"Q = {q} < 1 is out of scope: the null density gains a point "
            f"mass at zero and the stated bounds no longer apply"
        )
    inv = 1.0 / q
    lam_minus = max(1.0 + inv - 2.0 * np.sqrt(inv), 0.0)
    lam_plus = 1.0 + inv + 2.0 * np.sqrt(inv)
    return MPModel(q=float(q), lam_minus=float(lam_minus), lam_plus=float(lam_plus))


def mp_density(model: MPModel, lam):
    """Analytic eigenvalue density; zero outside the open support interval.

    The endpoints return 0 (the square root vanishes), which also covers
    lam = 0 when Q = 1.
    """
    arr = np.asarray(lam, dtype=float)
    out = np.zeros_like(arr)
    inside = (arr > model.lam_minus) & (arr < model.lam_plus)
    x = arr[inside]
    out[inside] = (
        model.q / (2.0 * np.pi)
        * np.sqrt((model.lam_plus - x) * (x - model.lam_minus)) / x
    )
    if np.isscalar(lam) or arr.ndim == 0:
        return float(out)
    return out


def density_curve(model: MPModel, lo: float | None = None, hi: float | None = None,
                  points: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """Sampled density for plotting; default grid pads the support by 0.1."""
    if lo is None:
        lo = model.lam_minus - 0.1
    if hi is None:
        hi = model.lam_plus + 0.1
    grid = np.linspace(lo, hi, points)
    return grid, mp_density(model, grid)


def classify_spectrum(sd, model: MPModel) -> SpectrumClassification:
    """Split eigenvalues by the null bounds; strict comparisons on both sides."""
    values = np.asarray(getattr(sd, "eigenvalues", sd), dtype=float)
    return SpectrumClassification(
        below=values[values < model.lam_minus],
        bulk=values[(values >= model.lam_minus) & (values <= model.lam_plus)],
        above=values[values > model.lam_plus],
    )


def surrogate_tickers(n_series: int) -> list[str]:
    width = len(str(n_series))
    return [f"S{i + 1:0{width}d}" for i in range(n_series)]


def surrogate_panel(n_series: int, n_obs: int, seed: int) -> ReturnPanel:
    """Seeded pure-noise return panel (the Wishart null in panel form)."""
    if n_series < 2 or n_obs < n_series:
        raise DomainError(
            f"need L >= N >= 2, got N={n_series}, L={n_obs}"
        )
    draws = standard_normals(seed, n_series * n_obs).reshape(n_series, n_obs)
    return ReturnPanel(
        tickers=surrogate_tickers(n_series),
        returns=draws,
        means=draws.mean(axis=1),
        volatilities=draws.std(axis=1),
    )


def surrogate_spectrum(n_series: int, n_obs: int, seed: int) -> SpectralDecomposition:
    """Spectrum of one seeded random panel via the full analysis pipeline."""
    panel = surrogate_panel(n_series, n_obs, seed)
    return eigendecompose(correlation_matrix(normalize(panel)))


def surrogate_ensemble(n_series: int, n_obs: int, seed_count: int,
                       base_seed: int = 0) -> list[SpectralDecomposition]:
    """Spectra for seeds base_seed, base_seed+1, ..., base_seed+seed_count-1."""
    if seed_count < 1:
        raise DomainError(f"seed count must be >= 1, got {seed_count}")
    return [
        surrogate_spectrum(n_series, n_obs, base_seed + k)
        for k in range(seed_count)
    ]


def mp_bin_mass(model: MPModel, lo: float, hi: float) -> float:
    """Probability mass of the null density on [lo, hi] by adaptive quadrature."""
    lo = max(lo, model.lam_minus)
    hi = min(hi, model.lam_plus)
    if hi <= lo:
        return 0.0
    mass, _ = integrate.quad(lambda x: mp_density(model, x), lo, hi, limit=200)
    return float(mass)


@dataclass
class HistogramComparison:
    """Pooled empirical spectrum binned against the analytic null density."""

    bin_edges: np.ndarray
    bin_centers: np.ndarray
    bin_width: float
    empirical_mass: np.ndarray
    analytic_mass: np.ndarray
    l1_distance: float

    @property
    def empirical_density(self) -> np.ndarray:
        return self.empirical_mass / self.bin_width

    @property
    def analytic_density(self) -> np.ndarray:
        return self.analytic_mass / self.bin_width


def histogram_vs_density(values: np.ndarray, model: MPModel,
                         bin_width: float = 0.05) -> HistogramComparison:
    """Histogram eigenvalues on a grid aligned to ``bin_width`` and compare.

    The grid covers both the empirical range and the analytic support, so
    the two binned distributions each sum to one and the reported L1
    distance is sum_b |empirical_b - analytic_b|.
    """
    if bin_width <= 0.0:
        raise DomainError(f"bin width must be positive, got {bin_width}")
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise DomainError("no eigenvalues to bin")
    lo = min(float(values.min()), model.lam_minus)
    hi = max(float(values.max()), model.lam_plus)
    first = int(np.floor(lo / bin_width))
    last = int(np.ceil(hi / bin_width))
    if last * bin_width <= hi:  # keep the max strictly inside the last edge
        last += 1
    edges = np.arange(first, last + 1, dtype=float) * bin_width

    counts, _ = np.histogram(values, bins=edges)
    empirical = counts / values.size
    analytic = np.array([
        mp_bin_mass(model, edges[i], edges[i + 1]) for i in range(len(edges) - 1)
    ])
    l1 = float(np.abs(empirical - analytic).sum())
    centers = (edges[:-1] + edges[1:]) / 2.0
    return HistogramComparison(
        bin_edges=edges, bin_centers=centers, bin_width=bin_width,
        empirical_mass=empirical, analytic_mass=analytic, l1_distance=l1,
    )
