"""Exception types shared across the toolkit."""


class EgowordsError(Exception):
    """Base class for all toolkit errors."""


class InputError(EgowordsError):
    """An input stream could not be read or decoded."""


class EmptyCorpusError(EgowordsError):
    """Parsing produced no valid records at all."""


class ClassificationError(EgowordsError):
    """Activity classification was asked about an empty timeline."""


class ConfigurationError(EgowordsError):
    """Unknown resource identifier or invalid configuration value."""


class DegenerateInputError(EgowordsError):
    """The input carries no usable variation (e.g. all values identical)."""


class InsufficientDataError(EgowordsError):
    """An estimator needs more data points than were supplied."""


class StageDependencyError(EgowordsError):
    """A report artifact was requested before its producing stage ran."""

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


class StageError(EgowordsError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
