"""Multi-prediction / multi-reference evaluation with combined scoring.

Every metric shares one computation scheme: each prediction of an
instance is scored against every reference, two reduce stages fold those
scores into one value per instance, and a corpus-level reduce yields the
final score. A scorer runs many same-task metrics over one collection,
concurrently or sequentially, and emits a unified report.
"""

from .core import (
    CLASS_LABEL,
    LABEL_SEQUENCE,
    TEXT,
    EvaluationCollection,
    EvaluationInstance,
    EvaluationReport,
    MetricResult,
    PredictionInstance,
    ReducePolicy,
    ReferenceInstance,
    count_empty,
    validate_collection,
)
from .errors import (
    ConfigError,
    DegenerateCorpus,
    DegenerateInput,
    DuplicateRegistration,
    EvaluationError,
    LengthMismatch,
    ParamError,
    SchemaError,
    ScorerFailure,
    TaskMismatch,
    TaskUnavailable,
    UnknownMetric,
    UnknownParam,
)
from .metrics.base import CORPUS_STATISTIC, INSTANCE_SCORED, Metric, TaskClass
from .registry import (
    LoadedMetric,
    MetricDescriptor,
    available_metrics,
    load_metric,
    register_metric,
)
from .scorer import Scorer, ScorerConfig, check_task_compatibility, evaluate, evaluate_timed

__version__ = "0.1.0"

__all__ = [
    "CLASS_LABEL",
    "CORPUS_STATISTIC",
    "ConfigError",
    "DegenerateCorpus",
    "DegenerateInput",
    "DuplicateRegistration",
    "EvaluationCollection",
    "EvaluationError",
    "EvaluationInstance",
    "EvaluationReport",
    "INSTANCE_SCORED",
    "LABEL_SEQUENCE",
    "LengthMismatch",
    "LoadedMetric",
    "Metric",
    "MetricDescriptor",
    "MetricResult",
    "ParamError",
    "PredictionInstance",
    "ReducePolicy",
    "ReferenceInstance",
    "SchemaError",
    "Scorer",
    "ScorerConfig",
    "ScorerFailure",
    "TEXT",
    "TaskClass",
    "TaskMismatch",
    "TaskUnavailable",
    "UnknownMetric",
    "UnknownParam",
    "available_metrics",
    "check_task_compatibility",
    "count_empty",
    "evaluate",
    "evaluate_timed",
    "load_metric",
    "register_metric",
    "validate_collection",
]
