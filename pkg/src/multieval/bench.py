"""Throughput benchmark harness with a seeded synthetic corpus.

Two experiments: throughput against input size with a fixed two-metric
bundle, and throughput against the number of metrics (2 to 6) at a fixed
input size, in both run modes. Every row reports evaluation instances
per second; repeats are run back to back to avoid self-interference.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .core import EvaluationCollection, ReducePolicy, validate_collection
from .errors import ConfigError
from .registry import load_metric
from .scorer import ScorerConfig, evaluate_timed

DEFAULT_SEED = 42
VOCABULARY_SIZE = 1000
SENTENCE_LENGTH = (5, 25)
INPUT_SCALING_SIZES = (10, 100, 1_000, 10_000, 100_000)
INPUT_SCALING_METRICS = ("bleu", "sacrebleu")
METRIC_LADDER = ("bleu", "sacrebleu", "meteor", "ter", "chrf", "gleu")
DEFAULT_REPEATS = 5
DEFAULT_METRIC_SCALING_SIZE = 10_000


@dataclass(frozen=True)
class BenchRecord:
    """One timed run of one configuration."""

    experiment: str
    input_size: int
    metric_count: int
    run_mode: str
    run_index: int
    wall_time: float
    throughput: float  # evaluation instances per second

    def __post_init__(self) -> None:
        if self.throughput <= 0:
            raise ConfigError("throughput must be positive")


def synthetic_collection(size: int, seed: int = DEFAULT_SEED) -> EvaluationCollection:
    """Seeded random corpus: one prediction and one reference per instance.

    Predictions are perturbed copies of their reference (drops,
    substitutions, and occasional swaps) so edit- and match-based metrics
    all get realistic work.
    """
    rng = random.Random(seed)
    vocabulary = [f"w{i:03d}" for i in range(VOCABULARY_SIZE)]
    predictions: list[str] = []
    references: list[str] = []
    low, high = SENTENCE_LENGTH
    for _ in range(size):
        length = rng.randint(low, high)
        ref = [rng.choice(vocabulary) for _ in range(length)]
        pred: list[str] = []
        for token in ref:
            roll = rng.random()
            if roll < 0.08:
                continue  # dropped token
            if roll < 0.28:
                pred.append(rng.choice(vocabulary))
            else:
                pred.append(token)
        if len(pred) >= 2 and rng.random() < 0.2:
            i = rng.randrange(len(pred) - 1)
            pred[i], pred[i + 1] = pred[i + 1], pred[i]
        if not pred:
            pred = [rng.choice(vocabulary)]
        references.append(" ".join(ref))
        predictions.append(" ".join(pred))
    return validate_collection(predictions, references)


def _timed_runs(
    experiment: str,
    collection: EvaluationCollection,
    metric_names: Sequence[str],
    run_mode: str,
    repeats: int,
) -> list[BenchRecord]:
    descriptors = tuple(load_metric(name).descriptor for name in metric_names)
    config = ScorerConfig(descriptors, run_mode=run_mode, policy=ReducePolicy())
    records = []
    for run_index in range(1, repeats + 1):
        _, wall_time, _ = evaluate_timed(collection, config)
        records.append(
            BenchRecord(
                experiment,
                len(collection),
                len(metric_names),
                run_mode,
                run_index,
                wall_time,
                len(collection) / wall_time,
            )
        )
    return records


def run_input_scaling(
    sizes: Sequence[int] = INPUT_SCALING_SIZES,
    repeats: int = DEFAULT_REPEATS,
    seed: int = DEFAULT_SEED,
    run_mode: str = "concurrent",
    metrics: Sequence[str] = INPUT_SCALING_METRICS,
) -> list[BenchRecord]:
    """Fixed metric pair, growing corpus."""
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    records = []
    for size in sizes:
        collection = synthetic_collection(size, seed)
        records.extend(_timed_runs("input-scaling", collection, metrics, run_mode, repeats))
    return records


def run_metric_scaling(
    input_size: int = DEFAULT_METRIC_SCALING_SIZE,
    repeats: int = DEFAULT_REPEATS,
    seed: int = DEFAULT_SEED,
    ladder: Sequence[str] = METRIC_LADDER,
) -> list[BenchRecord]:
    """Fixed corpus, one metric added at a time, both run modes."""
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    collection = synthetic_collection(input_size, seed)
    records = []
    for run_mode in ("concurrent", "sequential"):
        for count in range(2, len(ladder) + 1):
            records.extend(
                _timed_runs("metric-scaling", collection, ladder[:count], run_mode, repeats)
            )
    return records


def _header_comment(seed: int) -> str:
    low, high = SENTENCE_LENGTH
    return (
        f"# seed={seed} vocabulary={VOCABULARY_SIZE} "
        f"sentence_tokens={low}..{high} predictions_per_instance=1 references_per_instance=1\n"
    )


def write_records_csv(records: Sequence[BenchRecord], path: str | Path, seed: int) -> None:
    """One row per run, with a log2 throughput column for plotting."""
    lines = [_header_comment(seed)]
    lines.append(
        "experiment,input_size,metric_count,run_mode,run_index,wall_time_s,throughput,log2_throughput\n"
    )
    for r in records:
        lines.append(
            f"{r.experiment},{r.input_size},{r.metric_count},{r.run_mode},"
            f"{r.run_index},{r.wall_time:.6f},{r.throughput:.3f},{math.log2(r.throughput):.4f}\n"
        )
    Path(path).write_text("".join(lines), encoding="utf-8")


def summarize(records: Sequence[BenchRecord]) -> list[dict]:
    """Mean throughput per configuration, in first-seen order."""
    groups: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.experiment, r.input_size, r.metric_count, r.run_mode), []).append(r)
    summary = []
    for (experiment, size, count, mode), group in groups.items():
        mean_throughput = sum(g.throughput for g in group) / len(group)
        summary.append(
            {
                "experiment": experiment,
                "input_size": size,
                "metric_count": count,
                "run_mode": mode,
                "runs": len(group),
                "mean_wall_time_s": sum(g.wall_time for g in group) / len(group),
                "mean_throughput": mean_throughput,
                "log2_mean_throughput": math.log2(mean_throughput),
            }
        )
    return summary


def write_summary_csv(records: Sequence[BenchRecord], path: str | Path, seed: int) -> None:
    rows = summarize(records)
    lines = [_header_comment(seed)]
    lines.append(
        "experiment,input_size,metric_count,run_mode,runs,mean_wall_time_s,mean_throughput,log2_mean_throughput\n"
    )
    for row in rows:
        lines.append(
            f"{row['experiment']},{row['input_size']},{row['metric_count']},{row['run_mode']},"
            f"{row['runs']},{row['mean_wall_time_s']:.6f},{row['mean_throughput']:.3f},"
            f"{row['log2_mean_throughput']:.4f}\n"
        )
    Path(path).write_text("".join(lines), encoding="utf-8")


def write_gnuplot_script(experiment: str, summary_csv: Path, path: str | Path) -> None:
    """Plot-ready companion script for the summary table."""
    if experiment == "input-scaling":
        x_column, x_label, log_x = 2, "input size (instances)", True
    else:
        x_column, x_label, log_x = 3, "number of metrics", False
    script = [
        "set datafile separator ','",
        f"set xlabel '{x_label}'",
        "set ylabel 'log2 throughput (items/s)'",
        "set key left bottom",
        "set logscale x 10" if log_x else "unset logscale x",
        f"plot '{summary_csv}' every ::1 using {x_column}:8 with linespoints title 'throughput'",
    ]
    Path(path).write_text("\n".join(script) + "\n", encoding="utf-8")
