"""Generic reduce-based computation over evaluation collections.

Two execution schemes cover every metric:

* instance scoring: each prediction is scored against every reference of
  its instance, the scores are folded by ``ref_reduce`` and
  ``pred_reduce``, and the per-instance scores are folded by
  ``corpus_reduce``;
* corpus statistics: metrics whose final score is a function of pooled
  sufficient statistics (the BLEU family). Per instance, one prediction's
  statistics are selected by ranking provisional per-prediction scores,
  then statistics are summed over the corpus and finalized.
"""

from __future__ import annotations

import concurrent.futures
from typing import Any, Callable, Protocol, Sequence

from .core import EvaluationCollection, EvaluationInstance, MetricResult, ReducePolicy, ReferenceInstance
from .errors import DegenerateCorpus, EvaluationError, ScorerFailure


def _with_instance_index(exc: Exception, index: int) -> Exception:
    """Attach the failing instance to an error, keeping domain error types."""
    if isinstance(exc, EvaluationError):
        return type(exc)(f"instance {index}: {exc}")
    return ScorerFailure(f"instance {index}: {exc}")

PairScorer = Callable[[Any, Any], float]
StatExtractor = Callable[[Any, ReferenceInstance], Any]
Finalizer = Callable[[Any], MetricResult]
ProvisionalScorer = Callable[[Any, ReferenceInstance], float]


class InstanceStatistics(Protocol):
    """Additive per-instance sufficient statistics (pooled with ``+``)."""

    def __add__(self, other: "InstanceStatistics") -> "InstanceStatistics": ...


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _fold(values: Sequence[float], op: str, higher_is_better: bool) -> float:
    """Apply one reduce stage; max/min carry best/worst semantics."""
    if op == "mean":
        return _mean(values)
    best = max(values) if higher_is_better else min(values)
    worst = min(values) if higher_is_better else max(values)
    return best if op == "max" else worst


def select_index(scores: Sequence[float], op: str, higher_is_better: bool) -> int:
    """Index of the prediction a reduce stage designates.

    ``max`` picks the best score, ``min`` the worst (first occurrence wins
    ties); ``mean`` picks the medoid, the score closest in total distance
    to all others.
    """
    if op == "mean":
        costs = [sum(abs(s - t) for t in scores) for s in scores]
        return min(range(len(scores)), key=lambda i: (costs[i], i))
    target = _fold(scores, op, higher_is_better)
    return scores.index(target)


def score_instance(
    instance: EvaluationInstance,
    scorer: PairScorer,
    policy: ReducePolicy,
    higher_is_better: bool = True,
) -> float:
    """Score one instance: all k*m pairs, then the two inner reduces."""
    per_prediction = []
    for pred in instance.predictions.items:
        pair_scores = [scorer(pred, ref) for ref in instance.references.items]
        per_prediction.append(_fold(pair_scores, policy.ref_reduce, higher_is_better))
    return _fold(per_prediction, policy.pred_reduce, higher_is_better)


def _instance_scores(
    collection: EvaluationCollection,
    scorer: PairScorer,
    policy: ReducePolicy,
    higher_is_better: bool,
    workers: int,
) -> list[float]:
    if workers <= 1 or len(collection) < 2:
        return [
            _scored(i, inst, scorer, policy, higher_is_better) for i, inst in enumerate(collection)
        ]
    # Index-addressed buffer: partitioning cannot reorder the reduce input.
    buffer: list[float] = [0.0] * len(collection)
    chunks = _partition(len(collection), workers)
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_score_chunk, collection.instances[lo:hi], lo, scorer, policy, higher_is_better): (lo, hi)
            for lo, hi in chunks
        }
        for fut, (lo, hi) in futures.items():
            buffer[lo:hi] = fut.result()
    return buffer


def _scored(index, instance, scorer, policy, higher_is_better):
    try:
        return score_instance(instance, scorer, policy, higher_is_better)
    except Exception as exc:
        raise _with_instance_index(exc, index) from exc


def _score_chunk(instances, offset, scorer, policy, higher_is_better):
    return [
        _scored(offset + i, inst, scorer, policy, higher_is_better)
        for i, inst in enumerate(instances)
    ]


def _partition(n: int, workers: int) -> list[tuple[int, int]]:
    step = max(1, -(-n // workers))
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def score_collection(
    collection: EvaluationCollection,
    scorer: PairScorer,
    policy: ReducePolicy,
    higher_is_better: bool = True,
    workers: int = 1,
) -> float:
    """Fold every instance score with ``corpus_reduce`` (mean by default).

    ``workers`` > 1 partitions instances across processes; results are
    bit-identical to the single-worker run.
    """
    scores = _instance_scores(collection, scorer, policy, higher_is_better, workers)
    if policy.corpus_reduce == "sum":
        return sum(scores)
    return _mean(scores)  # "mean" and the metric_defined default


def score_collection_corpus(
    collection: EvaluationCollection,
    stat_extractor: StatExtractor,
    finalize: Finalizer,
    policy: ReducePolicy,
    provisional_score: ProvisionalScorer,
    higher_is_better: bool = True,
) -> MetricResult:
    """Pool per-instance statistics and finalize once.

    With several predictions per instance, provisional per-prediction
    scores rank the candidates and ``pred_reduce`` designates whose
    statistics enter the pool; pooling is an elementwise sum.
    """
    pooled = None
    for index, instance in enumerate(collection):
        try:
            preds = instance.predictions.items
            if len(preds) == 1:
                chosen = preds[0]
            else:
                provisional = [provisional_score(p, instance.references) for p in preds]
                chosen = preds[select_index(provisional, policy.pred_reduce, higher_is_better)]
            stats = stat_extractor(chosen, instance.references)
        except Exception as exc:
            raise _with_instance_index(exc, index) from exc
        pooled = stats if pooled is None else pooled + stats
    if getattr(pooled, "candidate_length", None) == 0:
        raise DegenerateCorpus("pooled candidate length is 0")
    return finalize(pooled)
