"""Exception hierarchy shared by all evaluation components."""


class EvaluationError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(EvaluationError):
    """Input data violates the expected shape or mixes payload kinds."""


class LengthMismatch(EvaluationError):
    """Paired prediction/reference containers have different lengths."""


class ScorerFailure(EvaluationError):
    """A metric computation failed; the message carries the context."""


class DegenerateCorpus(EvaluationError):
    """Pooled corpus statistics are empty (e.g. zero candidate tokens)."""


class DegenerateInput(EvaluationError):
    """A single input is unusable for the metric (e.g. empty reference)."""


class ParamError(EvaluationError):
    """A metric parameter has an unsupported value or may not be set."""


class UnknownParam(ParamError):
    """A metric parameter name is not recognised."""


class UnknownMetric(EvaluationError):
    """No metric is registered under the requested name."""


class TaskUnavailable(EvaluationError):
    """The metric exists, but not for the requested task."""


class DuplicateRegistration(EvaluationError):
    """A metric name/task pair is already registered."""


class TaskMismatch(EvaluationError):
    """Metrics bound to different tasks were combined in one run."""


class ConfigError(EvaluationError):
    """An evaluation run was configured inconsistently."""
