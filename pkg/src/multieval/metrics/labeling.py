"""Entity-level F1 for BIO-tagged sequence labeling."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..core import MetricResult, ReducePolicy, ReferenceInstance, validate_collection
from ..errors import LengthMismatch, SchemaError
from .base import CorpusMetric, TaskClass

Span = tuple[str, int, int]  # entity type, start, end (exclusive)


def repair_bio(tags: tuple[str, ...]) -> tuple[tuple[str, ...], int]:
    """Turn dangling I-X tags into B-X; returns (tags, repair count)."""
    repaired = []
    fixes = 0
    prev_type = None
    for tag in tags:
        if tag == "O":
            repaired.append(tag)
            prev_type = None
            continue
        if len(tag) < 3 or tag[1] != "-" or tag[0] not in "BI":
            raise SchemaError(f"not a BIO tag: {tag!r}")
        prefix, entity = tag[0], tag[2:]
        if prefix == "I" and prev_type != entity:
            repaired.append(f"B-{entity}")
            fixes += 1
        else:
            repaired.append(tag)
        prev_type = entity
    return tuple(repaired), fixes


def extract_spans(tags: tuple[str, ...]) -> set[Span]:
    """Entity spans of a repaired BIO sequence."""
    spans: set[Span] = set()
    start = None
    current = None
    for i, tag in enumerate(tags):
        if tag.startswith("B-"):
            if current is not None:
                spans.add((current, start, i))
            current, start = tag[2:], i
        elif tag.startswith("I-"):
            continue
        else:  # O
            if current is not None:
                spans.add((current, start, i))
                current = None
    if current is not None:
        spans.add((current, start, len(tags)))
    return spans


@dataclass(frozen=True, slots=True)
class SpanStats:
    """Pooled per-type span counts; an entity is correct only when type
    and exact span both match."""

    true_positive: Counter = field(default_factory=Counter)
    predicted: Counter = field(default_factory=Counter)
    expected: Counter = field(default_factory=Counter)
    repaired_tags: int = 0

    def __add__(self, other: "SpanStats") -> "SpanStats":
        return SpanStats(
            self.true_positive + other.true_positive,
            self.predicted + other.predicted,
            self.expected + other.expected,
            self.repaired_tags + other.repaired_tags,
        )


def _pair_stats(pred_tags: tuple[str, ...], ref_tags: tuple[str, ...]) -> SpanStats:
    if len(pred_tags) != len(ref_tags):
        raise LengthMismatch(
            f"tag sequences differ in length: {len(pred_tags)} vs {len(ref_tags)}"
        )
    pred_tags, pred_fixes = repair_bio(pred_tags)
    ref_tags, ref_fixes = repair_bio(ref_tags)
    pred_spans = extract_spans(pred_tags)
    ref_spans = extract_spans(ref_tags)
    stats = SpanStats(repaired_tags=pred_fixes + ref_fixes)
    for span in pred_spans:
        stats.predicted[span[0]] += 1
    for span in ref_spans:
        stats.expected[span[0]] += 1
    for span in pred_spans & ref_spans:
        stats.true_positive[span[0]] += 1
    return stats


def _micro_f1(stats: SpanStats) -> float:
    tp = sum(stats.true_positive.values())
    p_total = sum(stats.predicted.values())
    r_total = sum(stats.expected.values())
    precision = tp / p_total if p_total else 0.0
    recall = tp / r_total if r_total else 0.0
    if precision + recall == 0.0:
        # No entities anywhere means nothing was missed or invented.
        return 1.0 if p_total == r_total == 0 else 0.0
    return 2 * precision * recall / (precision + recall)


class SpanF1Metric(CorpusMetric):
    """CoNLL-style exact-span entity F1 (micro over entity types)."""

    name = "span-f1"
    task = TaskClass.SEQUENCE_LABELING

    def provisional_score(self, prediction, references: ReferenceInstance):
        return max(_micro_f1(_pair_stats(prediction, r)) for r in references.items)

    def instance_stats(self, prediction, references: ReferenceInstance):
        # With several references the best-matching one provides the counts.
        best = None
        best_f1 = -1.0
        for ref in references.items:
            stats = _pair_stats(prediction, ref)
            f1 = _micro_f1(stats)
            if f1 > best_f1:
                best, best_f1 = stats, f1
        return best

    def finalize(self, pooled: SpanStats) -> MetricResult:
        tp = sum(pooled.true_positive.values())
        p_total = sum(pooled.predicted.values())
        r_total = sum(pooled.expected.values())
        precision = tp / p_total if p_total else 0.0
        recall = tp / r_total if r_total else 0.0
        if precision + recall:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            # No entities predicted or expected anywhere is a perfect run.
            f1 = 1.0 if p_total == r_total == 0 else 0.0
        components: dict[str, float] = {
            "precision": precision,
            "recall": recall,
            "repaired_tags": float(pooled.repaired_tags),
        }
        for entity in sorted(set(pooled.predicted) | set(pooled.expected)):
            e_tp = pooled.true_positive[entity]
            e_p = e_tp / pooled.predicted[entity] if pooled.predicted[entity] else 0.0
            e_r = e_tp / pooled.expected[entity] if pooled.expected[entity] else 0.0
            e_f = 2 * e_p * e_r / (e_p + e_r) if e_p + e_r else 0.0
            components[f"precision_{entity}"] = e_p
            components[f"recall_{entity}"] = e_r
            components[f"f1_{entity}"] = e_f
            components[f"support_{entity}"] = float(pooled.expected[entity])
        return MetricResult(self.name, f1, components)


def seqlabel_f1(predictions: list, references: list) -> MetricResult:
    """Entity F1 over parallel lists of BIO tag sequences."""
    collection = validate_collection(predictions, references, payload_kind="label_sequence")
    return SpanF1Metric().compute(collection, ReducePolicy())
