"""Eigenvector-level analyses and per-window report assembly.

The inverse participation ratio of a unit-norm eigenvector u is
I = sum_l u_l^4; its reciprocal estimates how many components contribute
significantly (1/N for an equal-weight vector, 1 for a single-component
vector).  Cross-window comparisons first orient the second vector to agree
globally with the first, so only genuine component-level sign flips are
counted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import CoefficientStats, coefficient_stats, correlation_matrix
from .errors import ComparisonError, PipelineError, RmtcorrError
from .ingest import AlignedPanel, WindowSpec, slice_window
from .returns import log_returns, normalize
from .rmt import MPModel, SpectrumClassification, classify_spectrum, mp_bounds
from .spectral import (SpectralDecomposition, decomposition_from_dict,
                       decomposition_to_dict, eigendecompose)

IPR_DEFINITION = (
    "I = sum_l u_l^4 over the unit-norm eigenvector; 1/I estimates the "
    "number of significantly contributing components"
)


@dataclass
class IPRSeries:
    """IPR and participation number per eigenvalue rank (1-based, descending)."""

    eigenvalues: np.ndarray
    ipr: np.ndarray
    participation: np.ndarray


@dataclass
class VectorComparison:
    """Per-ticker sign comparison of one eigenvector rank across two windows."""

    rank: int
    floor: float
    tickers: list[str]
    components_a: np.ndarray
    components_b: np.ndarray       # after global orientation
    status: list[str]              # "same" | "flipped" | "indeterminate"
    orientation_flipped: bool

    @property
    def flipped_count(self) -> int:
        return sum(s == "flipped" for s in self.status)

    @property
    def flipped_fraction(self) -> float:
        return self.flipped_count / len(self.tickers)


def ipr(sd: SpectralDecomposition) -> IPRSeries:
    """Fourth-power inverse participation ratio for every eigenvector."""
    fourth = (sd.eigenvectors ** 4).sum(axis=0)
    return IPRSeries(eigenvalues=sd.eigenvalues.copy(), ipr=fourth,
                     participation=1.0 / fourth)


def compare_vectors(sd_a: SpectralDecomposition, sd_b: SpectralDecomposition,
                    rank: int, floor: float = 0.0) -> VectorComparison:
    """Flag per-ticker sign flips of eigenvector ``rank`` between two windows.

    B's vector is reordered to A's ticker order and multiplied by -1 when
    its dot product with A's vector is negative (eigenvector sign is
    arbitrary, so only the relative orientation is meaningful).  A flip is
    a strictly negative product of components; components whose magnitude
    is below ``floor`` in either window are marked indeterminate instead.
    """
    set_a, set_b = set(sd_a.tickers), set(sd_b.tickers)
    if set_a != set_b:
        diff = sorted(set_a.symmetric_difference(set_b))
        raise ComparisonError(f"ticker sets differ; not shared: {diff}")
    limit = min(sd_a.eigenvectors.shape[1], sd_b.eigenvectors.shape[1])
    if not 1 <= rank <= limit:
        raise ComparisonError(f"rank {rank} outside 1..{limit}")
    if floor < 0.0:
        raise ComparisonError(f"magnitude floor must be >= 0, got {floor}")

    vec_a = sd_a.vector(rank)
    order_b = [sd_b.tickers.index(t) for t in sd_a.tickers]
    vec_b = sd_b.vector(rank)[order_b]
    oriented = bool(np.dot(vec_a, vec_b) < 0.0)
    if oriented:
        vec_b = -vec_b

    status = []
    for a, b in zip(vec_a, vec_b):
        if abs(a) < floor or abs(b) < floor:
            status.append("indeterminate")
        elif a * b < 0.0:
            status.append("flipped")
        else:
            status.append("same")
    return VectorComparison(rank=rank, floor=floor, tickers=list(sd_a.tickers),
                            components_a=vec_a.copy(), components_b=vec_b,
                            status=status, orientation_flipped=oriented)


@dataclass
class WindowReport:
    """Everything the pipeline produces for one analysis window."""

    window: WindowSpec
    tickers: list[str]
    n_dates: int
    n_returns: int
    q: float
    volatilities: np.ndarray
    coefficients: CoefficientStats
    model: MPModel
    spectrum: SpectralDecomposition
    classification: SpectrumClassification
    ipr_series: IPRSeries
    top_components: dict[int, list[tuple[str, float]]]

    def __post_init__(self):
        n = len(self.tickers)
        if (self.volatilities.size != n or self.spectrum.n_series != n
                or self.spectrum.tickers != self.tickers):
            raise ValueError("report sections disagree on the ticker set")


def top_components(sd: SpectralDecomposition, rank: int, k: int) -> list[tuple[str, float]]:
    """The k components of eigenvector ``rank`` largest in magnitude."""
    vec = sd.vector(rank)
    order = np.argsort(-np.abs(vec), kind="stable")[:k]
    return [(sd.tickers[i], float(vec[i])) for i in order]


def build_report(window: WindowSpec, aligned: AlignedPanel,
                 bin_width: float = 0.05, top_k: int = 20) -> WindowReport:
    """Run the full pipeline on one window of an aligned panel."""
    try:
        sliced = slice_window(aligned, window)
        rp = log_returns(sliced)
        npanel = normalize(rp)
        cm = correlation_matrix(npanel)
        stats = coefficient_stats(cm, bin_width=bin_width)
        sd = eigendecompose(cm)
        model = mp_bounds(rp.n_obs / rp.n_series)
        classified = classify_spectrum(sd, model)
        iprs = ipr(sd)
    except RmtcorrError as exc:
        raise PipelineError(window.name, exc) from exc

    tops = {
        rank: top_components(sd, rank, top_k)
        for rank in range(1, min(2, sd.n_series) + 1)
    }
    return WindowReport(
        window=window, tickers=list(sliced.tickers),
        n_dates=sliced.n_dates, n_returns=rp.n_obs, q=model.q,
        volatilities=rp.volatilities.copy(), coefficients=stats, model=model,
        spectrum=sd, classification=classified, ipr_series=iprs,
        top_components=tops,
    )


def report_to_dict(report: WindowReport, ipr_note: bool = True) -> dict:
    """JSON-ready report; floats keep full binary precision."""
    ipr_block: dict = {}
    if ipr_note:
        ipr_block["definition"] = IPR_DEFINITION
    ipr_block["series"] = [
        {"rank": k + 1, "eigenvalue": float(lam), "ipr": float(i),
         "participation": float(p)}
        for k, (lam, i, p) in enumerate(zip(report.ipr_series.eigenvalues,
                                            report.ipr_series.ipr,
                                            report.ipr_series.participation))
    ]
    below, bulk, above = report.classification.counts
    return {
        "window": {
            "name": report.window.name,
            "start": report.window.start.isoformat(),
            "end": report.window.end.isoformat(),
        },
        "n_series": len(report.tickers),
        "n_dates": report.n_dates,
        "n_returns": report.n_returns,
        "q": report.q,
        "tickers": list(report.tickers),
        "volatility": [
            [t, float(s)] for t, s in zip(report.tickers, report.volatilities)
        ],
        "coefficients": {
            "mean": report.coefficients.mean,
            "std": report.coefficients.std,
            "histogram": {
                "bin_width": report.coefficients.bin_width,
                "bin_centers": [float(x) for x in report.coefficients.bin_centers],
                "densities": [float(x) for x in report.coefficients.densities],
            },
        },
        "marchenko_pastur": {
            "q": report.model.q,
            "lambda_minus": report.model.lam_minus,
            "lambda_plus": report.model.lam_plus,
        },
        "eigenvalues": [float(v) for v in report.spectrum.eigenvalues],
        "classification": {
            "counts": {"below": below, "bulk": bulk, "above": above},
            "below": [float(v) for v in report.classification.below],
            "bulk": [float(v) for v in report.classification.bulk],
            "above": [float(v) for v in report.classification.above],
        },
        "top_components": {
            str(rank): [[t, c] for t, c in pairs]
            for rank, pairs in sorted(report.top_components.items())
        },
        "ipr": ipr_block,
        "spectrum": decomposition_to_dict(report.spectrum),
    }


def report_from_dict(data: dict) -> WindowReport:
    """Inverse of report_to_dict (used by the cross-window comparison)."""
    from datetime import date

    window = WindowSpec(
        name=data["window"]["name"],
        start=date.fromisoformat(data["window"]["start"]),
        end=date.fromisoformat(data["window"]["end"]),
    )
    coeff = data["coefficients"]
    stats = CoefficientStats(
        mean=coeff["mean"], std=coeff["std"],
        bin_width=coeff["histogram"]["bin_width"],
        bin_centers=np.array(coeff["histogram"]["bin_centers"], dtype=float),
        densities=np.array(coeff["histogram"]["densities"], dtype=float),
    )
    mp = data["marchenko_pastur"]
    model = MPModel(q=mp["q"], lam_minus=mp["lambda_minus"], lam_plus=mp["lambda_plus"])
    spectrum = decomposition_from_dict(data["spectrum"])
    cls = SpectrumClassification(
        below=np.array(data["classification"]["below"], dtype=float),
        bulk=np.array(data["classification"]["bulk"], dtype=float),
        above=np.array(data["classification"]["above"], dtype=float),
    )
    series = data["ipr"]["series"]
    iprs = IPRSeries(
        eigenvalues=np.array([s["eigenvalue"] for s in series], dtype=float),
        ipr=np.array([s["ipr"] for s in series], dtype=float),
        participation=np.array([s["participation"] for s in series], dtype=float),
    )
    return WindowReport(
        window=window, tickers=list(data["tickers"]),
        n_dates=data["n_dates"], n_returns=data["n_returns"], q=data["q"],
        volatilities=np.array([s for _, s in data["volatility"]], dtype=float),
        coefficients=stats, model=model, spectrum=spectrum,
        classification=cls, ipr_series=iprs,
        top_components={
            int(rank): [(t, float(c)) for t, c in pairs]
            for rank, pairs in data["top_components"].items()
        },
    )
