"""Metrics for single-label sequence classification."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..core import MetricResult, ReducePolicy, ReferenceInstance, validate_collection
from ..errors import ParamError
from .base import CorpusMetric, InstanceMetric, TaskClass

AVERAGINGS = ("micro", "macro", "weighted")


class AccuracyMetric(InstanceMetric):
    """Exact-match indicator composed by the generic reduce framework, so
    with several predictions a max reduce means any correct one counts."""

    name = "accuracy"
    task = TaskClass.SEQUENCE_CLASSIFICATION

    def pair_score(self, prediction, reference):
        return 1.0 if prediction == reference else 0.0


def accuracy_cls(predictions: list, references: list) -> float:
    collection = validate_collection(predictions, references, payload_kind="class_label")
    return AccuracyMetric().compute(collection, ReducePolicy()).score


@dataclass(frozen=True, slots=True)
class ConfusionStats:
    """Pooled (reference label, predicted label) pair counts."""

    pairs: Counter = field(default_factory=Counter)

    def __add__(self, other: "ConfusionStats") -> "ConfusionStats":
        return ConfusionStats(self.pairs + other.pairs)


class ClassF1Metric(CorpusMetric):
    """Precision/recall/F1 from a pooled confusion matrix.

    A class never predicted has precision 0 by convention; the count of
    such classes is flagged in the components.
    """

    name = "f1"
    task = TaskClass.SEQUENCE_CLASSIFICATION

    def __init__(self, averaging: str = "macro"):
        if averaging not in AVERAGINGS:
            raise ParamError(f"unknown averaging: {averaging!r}")
        self.averaging = averaging

    def provisional_score(self, prediction, references: ReferenceInstance):
        return 1.0 if prediction in references.items else 0.0

    def instance_stats(self, prediction, references: ReferenceInstance):
        # Credit the prediction against the reference it matches, if any.
        ref = prediction if prediction in references.items else references.items[0]
        return ConfusionStats(Counter({(ref, prediction): 1}))

    def finalize(self, pooled: ConfusionStats) -> MetricResult:
        pairs = pooled.pairs
        tp: Counter = Counter()
        predicted: Counter = Counter()
        expected: Counter = Counter()
        for (ref, pred), count in pairs.items():
            if ref == pred:
                tp[ref] += count
            predicted[pred] += count
            expected[ref] += count
        labels = sorted(set(predicted) | set(expected))
        components: dict[str, float] = {}
        per_class = {}
        zero_predicted = 0
        for label in labels:
            p = tp[label] / predicted[label] if predicted[label] else 0.0
            if not predicted[label]:
                zero_predicted += 1
            r = tp[label] / expected[label] if expected[label] else 0.0
            f = 2 * p * r / (p + r) if p + r else 0.0
            per_class[label] = (p, r, f)
            components[f"precision_{label}"] = p
            components[f"recall_{label}"] = r
            components[f"f1_{label}"] = f
            components[f"support_{label}"] = float(expected[label])
        total = sum(pairs.values())
        correct = sum(tp.values())
        if self.averaging == "micro":
            precision = recall = f1 = correct / total if total else 0.0
        else:
            present = [label for label in labels if expected[label]]
            if self.averaging == "macro":
                weights = {label: 1.0 / len(present) for label in present}
            else:
                support = sum(expected[label] for label in present)
                weights = {label: expected[label] / support for label in present}
            precision = sum(per_class[c][0] * w for c, w in weights.items())
            recall = sum(per_class[c][1] * w for c, w in weights.items())
            f1 = sum(per_class[c][2] * w for c, w in weights.items())
        components["precision"] = precision
        components["recall"] = recall
        components["zero_predicted_classes"] = float(zero_predicted)
        return MetricResult(self.name, f1, components)


def precision_recall_f1_cls(
    predictions: list, references: list, averaging: str = "macro"
) -> MetricResult:
    collection = validate_collection(predictions, references, payload_kind="class_label")
    return ClassF1Metric(averaging).compute(collection, ReducePolicy())
