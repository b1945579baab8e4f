"""Metric lookup by name, task mapping, and custom-metric registration.

Names are case-, hyphen-, and underscore-insensitive. A task-suffixed
name like ``accuracy-for-sequence-classification`` pins the task; a bare
name resolves to the language-generation variant when one exists,
otherwise to the metric's only task.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .core import MetricResult, ReducePolicy, validate_collection
from .errors import (
    DuplicateRegistration,
    TaskUnavailable,
    UnknownMetric,
    UnknownParam,
)
from .metrics.base import (
    CORPUS_STATISTIC,
    INSTANCE_SCORED,
    TASK_PAYLOAD_KIND,
    Metric,
    TaskClass,
)
from .metrics import classification, generation, labeling


@dataclass(frozen=True)
class MetricDescriptor:
    """Everything needed to identify one computable metric."""

    base_name: str
    task: TaskClass
    params: Mapping[str, Any] = field(default_factory=dict)
    mode: str = INSTANCE_SCORED

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", dict(self.params))

    @property
    def full_name(self) -> str:
        return f"{self.base_name}-for-{self.task.value}"


@dataclass(frozen=True)
class _Entry:
    descriptor: MetricDescriptor
    factory: Callable[..., Metric]


def _normalize(name: str) -> str:
    return name.lower().replace("-", "").replace("_", "").replace(" ", "")


_TASK_SUFFIXES = {f"for{_normalize(task.value)}": task for task in TaskClass}

_entries: dict[tuple[str, TaskClass], _Entry] = {}
_by_base: dict[str, dict[TaskClass, _Entry]] = {}
_aliases: dict[str, str] = {"googlebleu": "gleu"}


def register_metric(descriptor: MetricDescriptor, implementation: Callable[..., Metric]) -> None:
    """Make a metric loadable and scorer-usable like the bundled ones.

    ``implementation`` is a factory called with the merged parameter set;
    ``descriptor.params`` define the accepted parameters and defaults.
    """
    norm = _normalize(descriptor.base_name)
    key = (norm, descriptor.task)
    if key in _entries:
        raise DuplicateRegistration(
            f"{descriptor.base_name!r} is already registered for {descriptor.task.value}"
        )
    entry = _Entry(descriptor, implementation)
    _entries[key] = entry
    _by_base.setdefault(norm, {})[descriptor.task] = entry


def _split_task_suffix(norm: str) -> tuple[str, TaskClass | None]:
    for suffix, task in _TASK_SUFFIXES.items():
        if norm.endswith(suffix) and len(norm) > len(suffix):
            return norm[: -len(suffix)], task
    return norm, None


def _resolve(name: str, task: TaskClass | str | None = None) -> _Entry:
    norm, parsed_task = _split_task_suffix(_normalize(name))
    norm = _aliases.get(norm, norm)
    if task is not None and not isinstance(task, TaskClass):
        task = TaskClass(task)
    if parsed_task is not None and task is not None and parsed_task is not task:
        raise TaskUnavailable(
            f"{name!r} names task {parsed_task.value} but {task.value} was requested"
        )
    wanted = parsed_task or task
    variants = _by_base.get(norm)
    if not variants:
        raise UnknownMetric(f"no metric registered under {name!r}")
    if wanted is not None:
        if wanted not in variants:
            raise TaskUnavailable(f"{norm!r} is not available for task {wanted.value}")
        return variants[wanted]
    if TaskClass.LANGUAGE_GENERATION in variants:
        return variants[TaskClass.LANGUAGE_GENERATION]
    if len(variants) == 1:
        return next(iter(variants.values()))
    raise TaskUnavailable(
        f"{name!r} is registered for several tasks; add a -for-<task> suffix"
    )


@dataclass(frozen=True)
class LoadedMetric:
    """A resolved descriptor together with its ready-to-run implementation."""

    descriptor: MetricDescriptor
    metric: Metric

    def compute(self, *, predictions, references, policy: ReducePolicy | None = None) -> MetricResult:
        """Score in-memory lists; arguments are keyword-only by design."""
        collection = validate_collection(
            predictions, references, payload_kind=TASK_PAYLOAD_KIND[self.descriptor.task]
        )
        return self.metric.compute(collection, policy or ReducePolicy())


def load_metric(
    name: str,
    params: Mapping[str, Any] | None = None,
    task: TaskClass | str | None = None,
    **kwargs: Any,
) -> LoadedMetric:
    """Resolve a metric by name and bind its parameters."""
    entry = _resolve(name, task)
    overrides = {**(params or {}), **kwargs}
    defaults = entry.descriptor.params
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise UnknownParam(
            f"{entry.descriptor.base_name} does not accept: {', '.join(unknown)}"
        )
    merged = {**defaults, **overrides}
    descriptor = MetricDescriptor(
        entry.descriptor.base_name, entry.descriptor.task, merged, entry.descriptor.mode
    )
    return LoadedMetric(descriptor, entry.factory(**merged))


def instantiate(descriptor: MetricDescriptor) -> Metric:
    """Build the implementation for a previously resolved descriptor."""
    entry = _resolve(descriptor.base_name, descriptor.task)
    return entry.factory(**descriptor.params)


def available_metrics() -> tuple[MetricDescriptor, ...]:
    """Default descriptors of every registered metric, registration order."""
    return tuple(entry.descriptor for entry in _entries.values())


def _register_bundled() -> None:
    whitespace_text = {"tokenizer": "whitespace", "normalize_unicode": True}
    bundled: list[tuple[str, TaskClass, dict, str, Callable[..., Metric]]] = [
        (
            "bleu",
            TaskClass.LANGUAGE_GENERATION,
            {"max_order": 4, "smoothing": "none", "smooth_k": 1.0, **whitespace_text},
            CORPUS_STATISTIC,
            generation.BleuMetric,
        ),
        (
            "sacrebleu",
            TaskClass.LANGUAGE_GENERATION,
            {"max_order": 4, "normalize_unicode": True},
            CORPUS_STATISTIC,
            generation.SacreBleuMetric,
        ),
        (
            "gleu",
            TaskClass.LANGUAGE_GENERATION,
            {"min_order": 1, "max_order": 4, **whitespace_text},
            INSTANCE_SCORED,
            generation.GleuMetric,
        ),
        (
            "rouge-n",
            TaskClass.LANGUAGE_GENERATION,
            {"order": 1, "beta": 1.0, **whitespace_text},
            INSTANCE_SCORED,
            generation.RougeNMetric,
        ),
        (
            "rouge-l",
            TaskClass.LANGUAGE_GENERATION,
            {"beta": 1.0, **whitespace_text},
            INSTANCE_SCORED,
            generation.RougeLMetric,
        ),
        (
            "chrf",
            TaskClass.LANGUAGE_GENERATION,
            {"char_order": 6, "word_order": 0, "beta": 2.0, "normalize_unicode": True},
            INSTANCE_SCORED,
            generation.ChrfMetric,
        ),
        (
            "ter",
            TaskClass.LANGUAGE_GENERATION,
            dict(whitespace_text),
            INSTANCE_SCORED,
            generation.TerMetric,
        ),
        (
            "meteor",
            TaskClass.LANGUAGE_GENERATION,
            {"alpha": 0.9, "beta": 3.0, "gamma": 0.5, **whitespace_text},
            INSTANCE_SCORED,
            generation.MeteorLiteMetric,
        ),
        (
            "accuracy",
            TaskClass.SEQUENCE_CLASSIFICATION,
            {},
            INSTANCE_SCORED,
            classification.AccuracyMetric,
        ),
        (
            "f1",
            TaskClass.SEQUENCE_CLASSIFICATION,
            {"averaging": "macro"},
            CORPUS_STATISTIC,
            classification.ClassF1Metric,
        ),
        (
            "span-f1",
            TaskClass.SEQUENCE_LABELING,
            {},
            CORPUS_STATISTIC,
            labeling.SpanF1Metric,
        ),
    ]
    for name, task, defaults, mode, factory in bundled:
        register_metric(MetricDescriptor(name, task, defaults, mode), factory)
    # The cross-lingual task class is supported at the type level; no
    # bundled metric is shipped for it.


_register_bundled()
