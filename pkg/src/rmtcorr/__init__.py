"""Random-matrix analysis of cross-correlations in financial return panels.

Pipeline: load daily closing prices, align the calendar (holiday removal
plus forward fill), compute log returns and the equal-time correlation
matrix per analysis window, eigendecompose it with a from-scratch Jacobi
solver, and compare the spectrum against the analytic random-matrix null
(bounds, density, deviating eigenvalues, eigenvector mode structure,
inverse participation ratios, cross-window sign flips).
"""

from .analysis import (IPRSeries, VectorComparison, WindowReport, build_report,
                       compare_vectors, ipr, report_from_dict, report_to_dict)
from .correlation import (CoefficientStats, CorrelationMatrix, coefficient_stats,
                          correlation_matrix, upper_triangle)
from .errors import (AlignmentError, ComparisonError, ConfigError,
                     ConvergenceError, DegenerateSeriesError, DomainError,
                     LoadError, PipelineError, RmtcorrError, WindowError)
from .ingest import (AlignedPanel, PricePanel, WindowSpec, align,
                     default_windows, load_prices, load_windows, slice_window,
                     write_panel)
from .returns import (NormalizedPanel, ReturnPanel, log_returns, normalize,
                      volatility_report)
from .rmt import (HistogramComparison, MPModel, SpectrumClassification,
                  classify_spectrum, density_curve, histogram_vs_density,
                  mp_bounds, mp_density, splitmix64, standard_normals,
                  surrogate_ensemble, surrogate_panel, surrogate_spectrum)
from .spectral import (SpectralDecomposition, eigendecompose, jacobi_eigh,
                       market_mode)

__version__ = "0.1.0"

__all__ = [
    "AlignedPanel", "AlignmentError", "CoefficientStats", "ComparisonError",
    "ConfigError", "ConvergenceError", "CorrelationMatrix",
    "DegenerateSeriesError", "DomainError", "HistogramComparison", "IPRSeries",
    "LoadError", "MPModel", "NormalizedPanel", "PipelineError", "PricePanel",
    "ReturnPanel", "RmtcorrError", "SpectralDecomposition",
    "SpectrumClassification", "VectorComparison", "WindowError", "WindowReport",
    "WindowSpec", "align", "build_report", "classify_spectrum",
    "coefficient_stats", "compare_vectors", "correlation_matrix",
    "default_windows", "density_curve", "eigendecompose", "histogram_vs_density",
    "ipr", "jacobi_eigh", "load_prices", "load_windows", "log_returns",
    "market_mode", "mp_bounds", "mp_density", "normalize", "report_from_dict",
    "report_to_dict", "slice_window", "splitmix64", "standard_normals",
    "surrogate_ensemble", "surrogate_panel", "surrogate_spectrum",
    "upper_triangle", "volatility_report", "write_panel",
]
