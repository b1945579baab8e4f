"""Combined evaluation: many same-task metrics over one collection.

The unit of concurrency is the metric; each worker computes one metric
end to end and writes into its own result slot, so concurrent and
sequential runs produce bit-identical reports.
"""

from __future__ import annotations

import concurrent.futures
import multiprocessing
import os
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

from .core import (
    TEXT,
    EvaluationCollection,
    EvaluationReport,
    MetricResult,
    ReducePolicy,
    count_empty,
    validate_collection,
)
from .errors import ConfigError, SchemaError, ScorerFailure, TaskMismatch
from .metrics.base import TASK_PAYLOAD_KIND, Metric, TaskClass
from .registry import LoadedMetric, MetricDescriptor, instantiate, load_metric

RUN_MODES = ("concurrent", "sequential")


@dataclass(frozen=True)
class ScorerConfig:
    """A combined run: which metrics, how to execute, how to reduce."""

    metrics: tuple[MetricDescriptor, ...]
    run_mode: str = "concurrent"
    worker_cap: int | None = None  # None means min(metric count, cores)
    policy: ReducePolicy = field(default_factory=ReducePolicy)

    def __post_init__(self) -> None:
        if self.run_mode not in RUN_MODES:
            raise ConfigError(f"unknown run mode: {self.run_mode!r}")
        if self.worker_cap is not None and self.worker_cap < 1:
            raise ConfigError(f"worker_cap must be >= 1, got {self.worker_cap}")
        object.__setattr__(self, "metrics", tuple(self.metrics))


def check_task_compatibility(metrics: Sequence[MetricDescriptor]) -> None:
    """Reject bundles whose metrics do not share one task."""
    if not metrics:
        raise ConfigError("at least one metric is required")
    tasks = {descriptor.task for descriptor in metrics}
    if len(tasks) > 1:
        names = ", ".join(f"{d.base_name} ({d.task.value})" for d in metrics)
        raise TaskMismatch(f"metrics must share one task: {names}")


def _available_cores() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _timed_compute(metric: Metric, collection, policy) -> tuple[MetricResult, float]:
    start = time.perf_counter()
    result = metric.compute(collection, policy)
    return result, time.perf_counter() - start


# Forked workers inherit the collection through this module global, which
# avoids re-pickling a large corpus once per metric.
_shared_collection: EvaluationCollection | None = None


def _timed_compute_shared(metric: Metric, policy) -> tuple[MetricResult, float]:
    return _timed_compute(metric, _shared_collection, policy)


def _run_concurrent(metrics, collection, policy, cap):
    global _shared_collection
    use_fork = multiprocessing.get_start_method() == "fork"
    _shared_collection = collection if use_fork else None
    try:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cap) as pool:
            if use_fork:
                futures = [pool.submit(_timed_compute_shared, m, policy) for m in metrics]
            else:
                futures = [pool.submit(_timed_compute, m, collection, policy) for m in metrics]
            outcomes = []
            for metric, future in zip(metrics, futures):
                try:
                    outcomes.append(future.result())
                except Exception as exc:
                    for other in futures:
                        other.cancel()
                    raise ScorerFailure(f"metric '{metric.name}' failed: {exc}") from exc
    finally:
        _shared_collection = None
    return outcomes


def evaluate_timed(
    collection: EvaluationCollection, config: ScorerConfig
) -> tuple[EvaluationReport, float, dict[str, float]]:
    """As :func:`evaluate`, plus wall time and per-metric seconds."""
    check_task_compatibility(config.metrics)
    names = [descriptor.base_name for descriptor in config.metrics]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate metric names in one run: {names}")
    expected_kind = TASK_PAYLOAD_KIND[config.metrics[0].task]
    if collection.payload_kind != expected_kind:
        raise SchemaError(
            f"task {config.metrics[0].task.value} expects {expected_kind} payloads, "
            f"got {collection.payload_kind}"
        )
    metrics = [instantiate(descriptor) for descriptor in config.metrics]

    start = time.perf_counter()
    if config.run_mode == "sequential":
        outcomes = []
        for metric in metrics:
            try:
                outcomes.append(_timed_compute(metric, collection, config.policy))
            except Exception as exc:
                raise ScorerFailure(f"metric '{metric.name}' failed: {exc}") from exc
    else:
        cap = config.worker_cap or min(len(metrics), _available_cores())
        outcomes = _run_concurrent(metrics, collection, config.policy, cap)
    wall_time = time.perf_counter() - start

    results: dict[str, MetricResult] = {}
    per_metric_times: dict[str, float] = {}
    for name, (result, seconds) in zip(names, outcomes):
        results[name] = result if result.metric_name == name else replace(result, metric_name=name)
        per_metric_times[name] = seconds
    empty = count_empty(collection) if collection.payload_kind == TEXT else 0
    report = EvaluationReport(len(collection), empty, results)
    return report, wall_time, per_metric_times


def evaluate(collection: EvaluationCollection, config: ScorerConfig) -> EvaluationReport:
    """Run every configured metric and assemble the unified report."""
    return evaluate_timed(collection, config)[0]


class Scorer:
    """High-level entry point bundling several same-task metrics.

    Metrics may be given as names, descriptors, or loaded metrics; task
    compatibility is checked at construction time.
    """

    def __init__(
        self,
        metrics: Sequence[str | MetricDescriptor | LoadedMetric],
        run_mode: str = "concurrent",
        worker_cap: int | None = None,
        policy: ReducePolicy | None = None,
        task: TaskClass | str | None = None,
    ):
        descriptors = []
        for metric in metrics:
            if isinstance(metric, LoadedMetric):
                descriptors.append(metric.descriptor)
            elif isinstance(metric, MetricDescriptor):
                descriptors.append(metric)
            else:
                descriptors.append(load_metric(metric, task=task).descriptor)
        check_task_compatibility(descriptors)
        self.config = ScorerConfig(
            tuple(descriptors), run_mode, worker_cap, policy or ReducePolicy()
        )

    @property
    def task(self) -> TaskClass:
        return self.config.metrics[0].task

    def evaluate(self, collection: EvaluationCollection) -> EvaluationReport:
        return evaluate(collection, self.config)

    def evaluate_timed(self, collection: EvaluationCollection):
        return evaluate_timed(collection, self.config)

    def __call__(self, *, predictions, references) -> dict:
        """Score in-memory lists; arguments are keyword-only by design."""
        collection = validate_collection(
            predictions, references, payload_kind=TASK_PAYLOAD_KIND[self.task]
        )
        return self.evaluate(collection).to_dict()
