"""Command-line front end: JSONL evaluation runs and the benchmark harness.

``eval`` pairs line i of the predictions file with line i of the
references file and writes the report as canonical JSON; each error class
maps to its own exit code so callers can react programmatically.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import bench
from .core import ReducePolicy, validate_collection
from .errors import (
    ConfigError,
    DegenerateCorpus,
    DegenerateInput,
    EvaluationError,
    LengthMismatch,
    ParamError,
    SchemaError,
    ScorerFailure,
    TaskMismatch,
    TaskUnavailable,
    UnknownMetric,
)
from .metrics.base import TASK_PAYLOAD_KIND
from .registry import load_metric
from .scorer import ScorerConfig, check_task_compatibility, evaluate

EXIT_CODES: tuple[tuple[type, int], ...] = (
    (LengthMismatch, 3),
    (TaskMismatch, 5),
    (UnknownMetric, 6),
    (ParamError, 7),  # includes unknown parameter names
    (TaskUnavailable, 8),
    (ConfigError, 9),
    (DegenerateCorpus, 10),
    (DegenerateInput, 10),
    (ScorerFailure, 11),
    (SchemaError, 4),
    (EvaluationError, 2),
)
EXIT_IO = 12


@dataclass(frozen=True)
class RunSpec:
    """One configured evaluation run."""

    predictions_path: Path | None
    references_path: Path | None
    metric_names: tuple[str, ...]
    metric_params: dict[str, dict[str, Any]] = field(default_factory=dict)
    task: str | None = None
    policy: ReducePolicy = field(default_factory=ReducePolicy)
    run_mode: str = "concurrent"
    workers: int | None = None
    output_path: Path | None = None
    repeat: int = 1

    def __post_init__(self) -> None:
        if self.repeat < 1:
            raise ConfigError(f"repeat must be >= 1, got {self.repeat}")


def read_jsonl(path: Path) -> list[Any]:
    """Parse one payload entry per line.

    Accepted line shapes: a JSON string, a JSON array of strings, or a
    JSON array of integer label ids. Anything else is rejected with the
    offending line number.
    """
    if not path.is_file():
        raise FileNotFoundError(path)
    entries = []
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.strip()
            if not line:
                raise SchemaError(f"{path}:{lineno}: blank line")
            try:
                value = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if isinstance(value, str):
                entries.append(value)
                continue
            if isinstance(value, list) and value:
                if all(isinstance(x, str) for x in value):
                    entries.append(value)
                    continue
                if all(isinstance(x, int) and not isinstance(x, bool) for x in value):
                    entries.append(value)
                    continue
            raise SchemaError(
                f"{path}:{lineno}: expected a JSON string, array of strings, "
                f"or array of label ids, got {json.dumps(value)[:80]}"
            )
    if not entries:
        raise SchemaError(f"{path}: no entries")
    return entries


def _build_config(spec: RunSpec) -> ScorerConfig:
    descriptors = []
    for name in spec.metric_names:
        params = spec.metric_params.get(name, {})
        descriptors.append(load_metric(name, params, task=spec.task).descriptor)
    check_task_compatibility(descriptors)
    return ScorerConfig(
        tuple(descriptors),
        run_mode=spec.run_mode,
        worker_cap=spec.workers,
        policy=spec.policy,
    )


def run_eval(spec: RunSpec) -> str:
    """Execute a run and return the canonical report JSON."""
    config = _build_config(spec)
    task = config.metrics[0].task
    raw_predictions = read_jsonl(spec.predictions_path)
    raw_references = read_jsonl(spec.references_path)
    collection = validate_collection(
        raw_predictions, raw_references, payload_kind=TASK_PAYLOAD_KIND[task]
    )
    payload = None
    for _ in range(spec.repeat):
        report = evaluate(collection, config).to_json()
        if payload is not None and report != payload:
            raise ScorerFailure("repeated runs produced different reports")
        payload = report
    return payload


def _parse_metric_params(raw: str | None) -> dict[str, dict[str, Any]]:
    if not raw:
        return {}
    try:
        parsed = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--metric-params is not valid JSON: {exc}") from exc
    if not isinstance(parsed, dict) or not all(isinstance(v, dict) for v in parsed.values()):
        raise ConfigError("--metric-params must map metric name to a parameter object")
    return parsed


def _add_eval_parser(subparsers) -> None:
    p = subparsers.add_parser("eval", help="evaluate prediction/reference JSONL files")
    p.add_argument("--predictions", type=Path, help="predictions JSONL path")
    p.add_argument("--references", type=Path, help="references JSONL path")
    p.add_argument("--metrics", required=True, help="comma-separated metric names")
    p.add_argument("--metric-params", help="JSON object: {metric: {param: value}}")
    p.add_argument("--task", help="task name, e.g. language-generation")
    p.add_argument("--reduce-ref", default="max", choices=("max", "mean", "min"))
    p.add_argument("--reduce-pred", default="max", choices=("max", "mean", "min"))
    p.add_argument(
        "--reduce-corpus", default="mean", choices=("mean", "sum", "metric_defined")
    )
    p.add_argument("--run-mode", default="concurrent", choices=("concurrent", "sequential"))
    p.add_argument("--workers", type=int, help="worker cap (default: auto)")
    p.add_argument("--output", type=Path, help="report path (default: stdout)")
    p.add_argument("--repeat", type=int, default=1, help="run N times, verify identical reports")
    p.add_argument(
        "--dry-run",
        action="store_true",
        help="only check that the metric bundle is loadable and task-compatible",
    )


def _add_bench_parser(subparsers) -> None:
    p = subparsers.add_parser("bench", help="run the throughput benchmark harness")
    p.add_argument("experiment", choices=("input-scaling", "metric-scaling"))
    p.add_argument("--out", type=Path, required=True, help="per-run CSV output path")
    p.add_argument("--repeats", type=int, default=bench.DEFAULT_REPEATS)
    p.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    p.add_argument("--sizes", help="input-scaling sizes, comma-separated")
    p.add_argument(
        "--input-size", type=int, default=bench.DEFAULT_METRIC_SCALING_SIZE,
        help="metric-scaling corpus size",
    )
    p.add_argument("--run-mode", default="concurrent", choices=("concurrent", "sequential"))


def _cmd_eval(args) -> int:
    spec = RunSpec(
        predictions_path=args.predictions,
        references_path=args.references,
        metric_names=tuple(name.strip() for name in args.metrics.split(",") if name.strip()),
        metric_params=_parse_metric_params(args.metric_params),
        task=args.task,
        policy=ReducePolicy(args.reduce_ref, args.reduce_pred, args.reduce_corpus),
        run_mode=args.run_mode,
        workers=args.workers,
        output_path=args.output,
        repeat=args.repeat,
    )
    if args.dry_run:
        _build_config(spec)
        print("ok: metric bundle is loadable and task-compatible")
        return 0
    if spec.predictions_path is None or spec.references_path is None:
        raise ConfigError("--predictions and --references are required")
    payload = run_eval(spec)
    if spec.output_path is not None:
        spec.output_path.write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_bench(args) -> int:
    if args.experiment == "input-scaling":
        sizes = bench.INPUT_SCALING_SIZES
        if args.sizes:
            sizes = tuple(int(s) for s in args.sizes.split(","))
        records = bench.run_input_scaling(
            sizes=sizes, repeats=args.repeats, seed=args.seed, run_mode=args.run_mode
        )
    else:
        records = bench.run_metric_scaling(
            input_size=args.input_size, repeats=args.repeats, seed=args.seed
        )
    out: Path = args.out
    summary = out.with_name(out.stem + "_summary.csv")
    script = out.with_suffix(".gnuplot")
    bench.write_records_csv(records, out, args.seed)
    bench.write_summary_csv(records, summary, args.seed)
    bench.write_gnuplot_script(args.experiment, summary, script)
    print(f"wrote {out}, {summary}, {script}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multieval",
        description="Multi-prediction / multi-reference evaluation runner",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_eval_parser(subparsers)
    _add_bench_parser(subparsers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_bench(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc}", file=sys.stderr)
        return EXIT_IO
    except EvaluationError as exc:
        for err_type, code in EXIT_CODES:
            if isinstance(exc, err_type):
                print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
                return code
        raise  # unreachable: EvaluationError is the last entry


if __name__ == "__main__":
    sys.exit(main())
