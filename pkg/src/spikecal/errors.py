"""Exception hierarchy shared by all spikecal modules."""


class SpikecalError(Exception):
    """Base class for every error raised by the toolkit."""


class DataError(SpikecalError, ValueError):
    """Malformed or invalid input data (files, grids, parameter values)."""


class ConfigError(DataError):
    """Invalid configuration key or value."""


class PipelineError(DataError):
    """A preprocessing stage failed for one sample."""

    def __init__(self, sample_id, stage, message):
        self.sample_id = sample_id
        self.stage = stage
        super().__init__(f"sample {sample_id!r}, stage {stage!r}: {message}")


class NumericalError(SpikecalError, ArithmeticError):
    """A numerical procedure could not produce a valid result."""


class DegenerateFitError(NumericalError):
    """PLS deflation exhausted the data before the requested component count."""

    def __init__(self, requested, achievable):
        self.requested = requested
        self.achievable = achievable
        super().__init__(
            f"requested {requested} PLS components but the data only supports "
            f"{achievable} (achievable rank)"
        )
