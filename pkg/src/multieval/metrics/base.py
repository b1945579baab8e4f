"""Task binding and the two metric execution contracts."""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any

from .. import engine
from ..core import (
    CLASS_LABEL,
    LABEL_SEQUENCE,
    TEXT,
    EvaluationCollection,
    MetricResult,
    ReducePolicy,
    ReferenceInstance,
)


class TaskClass(str, Enum):
    """The four task families a metric can be computed for."""

    LANGUAGE_GENERATION = "language-generation"
    SEQUENCE_CLASSIFICATION = "sequence-classification"
    SEQUENCE_LABELING = "sequence-labeling"
    CROSS_LINGUAL_EVALUATION = "cross-lingual-evaluation"


TASK_PAYLOAD_KIND = {
    TaskClass.LANGUAGE_GENERATION: TEXT,
    TaskClass.SEQUENCE_CLASSIFICATION: CLASS_LABEL,
    TaskClass.SEQUENCE_LABELING: LABEL_SEQUENCE,
    TaskClass.CROSS_LINGUAL_EVALUATION: TEXT,
}

INSTANCE_SCORED = "instance_scored"
CORPUS_STATISTIC = "corpus_statistic"


class Metric(ABC):
    """A computable metric bound to one task.

    Instances are immutable after construction (parameters frozen) and may
    be shared by any number of workers.
    """

    name: str
    task: TaskClass
    mode: str
    higher_is_better: bool = True

    @abstractmethod
    def compute(self, collection: EvaluationCollection, policy: ReducePolicy) -> MetricResult:
        """Score a full collection under the given reduce policy."""

    def extra_components(self) -> dict[str, float]:
        return {}


class InstanceMetric(Metric):
    """Metric scored per prediction/reference pair, then reduced."""

    mode = INSTANCE_SCORED

    @abstractmethod
    def pair_score(self, prediction: Any, reference: Any) -> float:
        """Deterministic score of a single pair."""

    def compute(self, collection, policy, workers: int = 1) -> MetricResult:
        score = engine.score_collection(
            collection, self.pair_score, policy, self.higher_is_better, workers
        )
        return MetricResult(self.name, score, self.extra_components())


class CorpusMetric(Metric):
    """Metric finalized from statistics pooled over the collection."""

    mode = CORPUS_STATISTIC

    @abstractmethod
    def instance_stats(self, prediction: Any, references: ReferenceInstance):
        """Additive sufficient statistics of one chosen prediction."""

    @abstractmethod
    def provisional_score(self, prediction: Any, references: ReferenceInstance) -> float:
        """Cheap per-prediction score used only to rank candidates."""

    @abstractmethod
    def finalize(self, pooled) -> MetricResult:
        """Turn pooled statistics into the final result."""

    def compute(self, collection, policy, workers: int = 1) -> MetricResult:
        return engine.score_collection_corpus(
            collection,
            self.instance_stats,
            self.finalize,
            policy,
            self.provisional_score,
            self.higher_is_better,
        )
