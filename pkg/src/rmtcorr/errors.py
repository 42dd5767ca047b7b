"""Exception hierarchy shared across the pipeline.

Each class carries a ``module`` label so the CLI can report which stage of
the pipeline rejected the data.
"""


class RmtcorrError(Exception):
    """Base class for all errors raised by this package."""

    module = "rmtcorr"


class LoadError(RmtcorrError):
    """Price-table file could not be parsed."""

    module = "ingest"


class AlignmentError(RmtcorrError):
    """Panel cannot be aligned (e.g. a ticker has no usable prices)."""

    module = "ingest"


class WindowError(RmtcorrError):
    """Analysis window does not intersect the panel, or is ill-formed."""

    module = "ingest"


class DegenerateSeriesError(RmtcorrError):
    """A return series has zero volatility; correlations would be undefined."""

    module = "returns"


class ConvergenceError(RmtcorrError):
    """Eigensolver failed to reach its tolerance within the sweep budget."""

    module = "spectral"


class DomainError(RmtcorrError):
    """Argument outside the supported domain (e.g. Q < 1)."""

    module = "rmt"


class ComparisonError(RmtcorrError):
    """Two decompositions cannot be compared (ticker mismatch, bad rank)."""

    module = "analysis"


class PipelineError(RmtcorrError):
    """Wraps an upstream error with the window it occurred in."""

    module = "analysis"

    def __init__(self, window_name: str, cause: Exception):
        self.window_name = window_name
        self.cause_module = getattr(cause, "module", "analysis")
        super().__init__(f"window '{window_name}': {cause}")


class ConfigError(RmtcorrError):
    """Run configuration is invalid."""

    module = "cli"
