"""Domain types for evaluation data, reduce policies, and results.

The data model is a corpus of paired instances: every instance carries one
or more predictions and one or more references for the same source item.
All types are immutable after construction and safe to share across
concurrent workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import LengthMismatch, SchemaError

TEXT = "text"
CLASS_LABEL = "class_label"
LABEL_SEQUENCE = "label_sequence"
PAYLOAD_KINDS = (TEXT, CLASS_LABEL, LABEL_SEQUENCE)

REF_REDUCES = ("max", "mean", "min")
PRED_REDUCES = ("max", "mean", "min")
CORPUS_REDUCES = ("mean", "sum", "metric_defined")

Payload = Any  # str | int | tuple[str, ...] depending on payload kind


def _kind_of(item: Any) -> str:
    """Classify one payload item, or raise SchemaError."""
    if isinstance(item, str):
        return TEXT
    if isinstance(item, bool):
        raise SchemaError(f"boolean payload not supported: {item!r}")
    if isinstance(item, int):
        return CLASS_LABEL
    if isinstance(item, (list, tuple)):
        if not item:
            raise SchemaError("empty tag sequence")
        if all(isinstance(t, str) for t in item):
            return LABEL_SEQUENCE
    raise SchemaError(f"unsupported payload item: {item!r}")


def _freeze_item(item: Any, kind: str) -> Payload:
    if kind == LABEL_SEQUENCE:
        return tuple(item)
    return item


def _check_items(items: Sequence[Any], what: str) -> tuple[tuple[Payload, ...], str]:
    if not isinstance(items, (list, tuple)) or len(items) == 0:
        raise SchemaError(f"{what} must hold at least one item")
    kinds = {_kind_of(it) for it in items}
    if len(kinds) != 1:
        raise SchemaError(f"{what} mixes payload kinds: {sorted(kinds)}")
    kind = kinds.pop()
    return tuple(_freeze_item(it, kind) for it in items), kind


@dataclass(frozen=True, slots=True)
class PredictionInstance:
    """All predictions produced for a single source item (length k >= 1)."""

    items: tuple[Payload, ...]
    kind: str = field(compare=False, default="")

    def __post_init__(self) -> None:
        items, kind = _check_items(self.items, "prediction instance")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "kind", kind)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True, slots=True)
class ReferenceInstance:
    """All references paired with a single source item (length m >= 1)."""

    items: tuple[Payload, ...]
    kind: str = field(compare=False, default="")

    def __post_init__(self) -> None:
        items, kind = _check_items(self.items, "reference instance")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "kind", kind)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True, slots=True)
class EvaluationInstance:
    """One paired (predictions, references) data point.

    Prediction and reference counts are independent; only the payload kind
    must agree.
    """

    predictions: PredictionInstance
    references: ReferenceInstance

    def __post_init__(self) -> None:
        if self.predictions.kind != self.references.kind:
            raise SchemaError(
                "prediction and reference payload kinds differ: "
                f"{self.predictions.kind} vs {self.references.kind}"
            )

    @property
    def kind(self) -> str:
        return self.predictions.kind


@dataclass(frozen=True, slots=True)
class EvaluationCollection:
    """The full ordered corpus of evaluation instances."""

    instances: tuple[EvaluationInstance, ...]
    payload_kind: str = field(compare=False, default="")

    def __post_init__(self) -> None:
        if not self.instances:
            raise SchemaError("collection must hold at least one instance")
        object.__setattr__(self, "instances", tuple(self.instances))
        kinds = {inst.kind for inst in self.instances}
        if len(kinds) != 1:
            raise SchemaError(f"collection mixes payload kinds: {sorted(kinds)}")
        object.__setattr__(self, "payload_kind", kinds.pop())

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    def raw_predictions(self) -> list[list[Payload]]:
        """Prediction items in the nested-list ingestion shape."""
        return [[_thaw(it) for it in inst.predictions.items] for inst in self.instances]

    def raw_references(self) -> list[list[Payload]]:
        """Reference items in the nested-list ingestion shape."""
        return [[_thaw(it) for it in inst.references.items] for inst in self.instances]


def _thaw(item: Payload) -> Any:
    return list(item) if isinstance(item, tuple) else item


@dataclass(frozen=True, slots=True)
class ReducePolicy:
    """Aggregation choices for the three reduce stages.

    ``ref_reduce`` folds the scores of one prediction against every
    reference; ``pred_reduce`` folds the per-prediction scores into one
    instance score; ``corpus_reduce`` folds instance scores into the final
    score. ``max``/``min`` follow best/worst semantics: for a
    lower-is-better metric ``max`` selects the numerically smallest score.
    """

    ref_reduce: str = "max"
    pred_reduce: str = "max"
    corpus_reduce: str = "mean"

    def __post_init__(self) -> None:
        if self.ref_reduce not in REF_REDUCES:
            raise SchemaError(f"unknown ref_reduce: {self.ref_reduce!r}")
        if self.pred_reduce not in PRED_REDUCES:
            raise SchemaError(f"unknown pred_reduce: {self.pred_reduce!r}")
        if self.corpus_reduce not in CORPUS_REDUCES:
            raise SchemaError(f"unknown corpus_reduce: {self.corpus_reduce!r}")


@dataclass(frozen=True)
class MetricResult:
    """Final score of one metric plus auxiliary named values."""

    metric_name: str
    score: float
    components: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        score = float(self.score)
        if score != score or score in (float("inf"), float("-inf")):
            raise SchemaError(f"{self.metric_name}: non-finite score {self.score!r}")
        object.__setattr__(self, "score", score)
        object.__setattr__(self, "components", dict(self.components))

    def to_dict(self) -> dict[str, Any]:
        return {
            "score": self.score,
            "components": {k: self.components[k] for k in sorted(self.components)},
        }


@dataclass(frozen=True)
class EvaluationReport:
    """Unified output of a multi-metric run.

    ``results`` preserves the configuration order of the metrics no matter
    how the run was executed.
    """

    total_items: int
    empty_items: int
    results: Mapping[str, MetricResult]

    def __post_init__(self) -> None:
        if not 0 <= self.empty_items <= self.total_items:
            raise SchemaError(
                f"empty_items {self.empty_items} outside [0, {self.total_items}]"
            )
        object.__setattr__(self, "results", dict(self.results))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "total_items": self.total_items,
            "empty_items": self.empty_items,
        }
        for name, result in self.results.items():
            out[name] = result.to_dict()
        return out

    def to_json(self) -> str:
        """Canonical JSON: fixed top-level order, sorted component keys."""
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"


def _instance_from_raw(entry: Any, declared: str | None, what: str, lineno: int):
    """Interpret one raw entry as (items tuple, kind). Scalars become
    singleton instances; lists are either several payloads or, for the
    label-sequence kind, possibly a single tag sequence."""
    where = f"{what}[{lineno}]"
    if isinstance(entry, str):
        if declared == LABEL_SEQUENCE:
            raise SchemaError(f"{where}: expected tag sequence, got text")
        return (entry,), TEXT
    if isinstance(entry, bool):
        raise SchemaError(f"{where}: boolean payload not supported")
    if isinstance(entry, int):
        if declared == LABEL_SEQUENCE:
            raise SchemaError(f"{where}: expected tag sequence, got label id")
        return (entry,), CLASS_LABEL
    if isinstance(entry, (list, tuple)):
        if not entry:
            raise SchemaError(f"{where}: empty inner list")
        if all(isinstance(x, str) for x in entry):
            if declared == LABEL_SEQUENCE:
                # One BIO tag sequence, promoted to a singleton instance.
                return (tuple(entry),), LABEL_SEQUENCE
            return tuple(entry), TEXT
        items, kind = _check_items(list(entry), where)
        return items, kind
    raise SchemaError(f"{where}: unsupported entry {entry!r}")


def validate_collection(
    raw_predictions: Sequence[Any] | EvaluationCollection,
    raw_references: Sequence[Any] | None = None,
    payload_kind: str | None = None,
) -> EvaluationCollection:
    """Validate raw paired inputs and build an EvaluationCollection.

    Accepts, per entry, a scalar payload (promoted to a singleton
    instance) or a list of payloads. The payload kind is inferred unless
    ``payload_kind`` is given; ``label_sequence`` must be declared because
    a list of strings is otherwise read as several text predictions.
    Passing an existing collection returns it unchanged.
    """
    if isinstance(raw_predictions, EvaluationCollection):
        return raw_predictions
    if payload_kind is not None and payload_kind not in PAYLOAD_KINDS:
        raise SchemaError(f"unknown payload kind: {payload_kind!r}")
    if not isinstance(raw_predictions, (list, tuple)) or not raw_predictions:
        raise SchemaError("predictions must be a non-empty list")
    if not isinstance(raw_references, (list, tuple)) or not raw_references:
        raise SchemaError("references must be a non-empty list")
    if len(raw_predictions) != len(raw_references):
        raise LengthMismatch(
            f"{len(raw_predictions)} predictions vs {len(raw_references)} references"
        )

    instances = []
    seen_kind = payload_kind
    for i, (p_raw, r_raw) in enumerate(zip(raw_predictions, raw_references)):
        p_items, p_kind = _instance_from_raw(p_raw, seen_kind, "predictions", i)
        r_items, r_kind = _instance_from_raw(r_raw, seen_kind, "references", i)
        for kind, what in ((p_kind, "predictions"), (r_kind, "references")):
            if seen_kind is None:
                seen_kind = kind
            elif kind != seen_kind:
                raise SchemaError(
                    f"{what}[{i}]: payload kind {kind} conflicts with {seen_kind}"
                )
        instances.append(
            EvaluationInstance(PredictionInstance(p_items), ReferenceInstance(r_items))
        )
    return EvaluationCollection(tuple(instances))


def count_empty(collection: EvaluationCollection) -> int:
    """Number of instances whose every prediction is empty or whitespace."""
    if collection.payload_kind != TEXT:
        raise SchemaError("count_empty requires a text collection")
    return sum(
        1
        for inst in collection
        if all(not item.strip() for item in inst.predictions.items)
    )


def iter_items(collection: EvaluationCollection) -> Iterable[Payload]:
    """Every prediction and reference item, in corpus order."""
    for inst in collection:
        yield from inst.predictions.items
        yield from inst.references.items
