/**
 * Bindings for the multieval engine over native in-memory lists.
 *
 * The engine is consumed exclusively through its command-line interface:
 * inputs are written as temporary JSONL files, one evaluation run is
 * spawned, and the canonical JSON report is parsed back. Exit codes map
 * to typed errors. A single Scorer instance must not be invoked from
 * several threads at once.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** One line of input: a text, several texts, or label ids. */
export type PayloadEntry = string | string[] | number[];

export interface ComputeOptions {
  predictions: PayloadEntry[];
  references: PayloadEntry[];
}

export interface MetricValue {
  score: number;
  components: Record<string, number>;
}

export interface Report {
  total_items: number;
  empty_items: number;
  [metric: string]: number | MetricValue;
}

export type ReduceOp = "max" | "mean" | "min";

export interface ScorerOptions {
  metrics: string[];
  task?: string;
  runMode?: "concurrent" | "sequential";
  reduceRef?: ReduceOp;
  reducePred?: ReduceOp;
  reduceCorpus?: "mean" | "sum" | "metric_defined";
  metricParams?: Record<string, Record<string, unknown>>;
}

export class EvaluationError extends Error {}
export class LengthMismatchError extends EvaluationError {}
export class SchemaError extends EvaluationError {}
export class TaskMismatchError extends EvaluationError {}
export class UnknownMetricError extends EvaluationError {}
export class ParamError extends EvaluationError {}
export class TaskUnavailableError extends EvaluationError {}
export class ConfigError extends EvaluationError {}
export class DegenerateError extends EvaluationError {}
export class ScorerFailureError extends EvaluationError {}

const ERRORS_BY_EXIT_CODE: Record<number, new (message: string) => EvaluationError> = {
  3: LengthMismatchError,
  4: SchemaError,
  5: TaskMismatchError,
  6: UnknownMetricError,
  7: ParamError,
  8: TaskUnavailableError,
  9: ConfigError,
  10: DegenerateError,
  11: ScorerFailureError,
};

/** Override with e.g. MULTIEVAL_CLI="multieval" if the entry point is on PATH. */
function cliCommand(): string[] {
  const override = process.env.MULTIEVAL_CLI;
  if (override && override.trim()) return override.trim().split(/\s+/);
  return ["python3", "-m", "multieval"];
}

function runCli(args: string[]): string {
  const [command, ...prefix] = cliCommand();
  const proc = spawnSync(command, [...prefix, ...args], {
    encoding: "utf-8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (proc.error) throw proc.error;
  if (proc.status !== 0) {
    const message = (proc.stderr || proc.stdout || "").trim() || `exit code ${proc.status}`;
    const ErrorClass = ERRORS_BY_EXIT_CODE[proc.status ?? 0] ?? EvaluationError;
    throw new ErrorClass(message);
  }
  return proc.stdout;
}

function toJsonl(entries: PayloadEntry[]): string {
  return entries.map((entry) => JSON.stringify(entry)).join("\n") + "\n";
}

/**
 * Enforce the keyword-style calling convention: exactly one plain options
 * object carrying named predictions/references.
 */
function checkComputeOptions(args: unknown[]): ComputeOptions {
  const [options] = args;
  if (
    args.length !== 1 ||
    typeof options !== "object" ||
    options === null ||
    Array.isArray(options)
  ) {
    throw new TypeError(
      "pass a single options object with named fields: compute({predictions, references})",
    );
  }
  const record = options as Partial<ComputeOptions>;
  if (!Array.isArray(record.predictions) || !Array.isArray(record.references)) {
    throw new TypeError("both 'predictions' and 'references' must be arrays");
  }
  return record as ComputeOptions;
}

function evaluateViaCli(config: ResolvedConfig, options: ComputeOptions): Report {
  const workdir = mkdtempSync(join(tmpdir(), "multieval-bindings-"));
  try {
    const predictionsPath = join(workdir, "predictions.jsonl");
    const referencesPath = join(workdir, "references.jsonl");
    writeFileSync(predictionsPath, toJsonl(options.predictions));
    writeFileSync(referencesPath, toJsonl(options.references));
    const stdout = runCli([
      "eval",
      "--predictions", predictionsPath,
      "--references", referencesPath,
      ...config.args,
    ]);
    return JSON.parse(stdout) as Report;
  } finally {
    rmSync(workdir, { recursive: true, force: true });
  }
}

interface ResolvedConfig {
  args: string[];
}

function buildConfig(options: ScorerOptions): ResolvedConfig {
  if (!Array.isArray(options.metrics) || options.metrics.length === 0) {
    throw new ConfigError("at least one metric is required");
  }
  const args = ["--metrics", options.metrics.join(",")];
  if (options.task) args.push("--task", options.task);
  if (options.runMode) args.push("--run-mode", options.runMode);
  if (options.reduceRef) args.push("--reduce-ref", options.reduceRef);
  if (options.reducePred) args.push("--reduce-pred", options.reducePred);
  if (options.reduceCorpus) args.push("--reduce-corpus", options.reduceCorpus);
  if (options.metricParams) args.push("--metric-params", JSON.stringify(options.metricParams));
  return { args };
}

export class BoundMetric {
  private readonly config: ResolvedConfig;

  constructor(
    readonly name: string,
    params?: Record<string, unknown>,
  ) {
    this.config = buildConfig({
      metrics: [name],
      metricParams: params ? { [name]: params } : undefined,
    });
    runCli(["eval", ...this.config.args, "--dry-run"]);
  }

  /** Score in-memory lists; the argument is a named-field object. */
  compute(...args: [ComputeOptions]): MetricValue {
    const options = checkComputeOptions(args);
    const report = evaluateViaCli(this.config, options);
    return report[this.name] as MetricValue;
  }
}

/** Load a single metric: a one-liner returning a computable handle. */
export function loadMetric(name: string, params?: Record<string, unknown>): BoundMetric {
  return new BoundMetric(name, params);
}

/** Several same-task metrics over one input, unified report out. */
export class Scorer {
  private readonly config: ResolvedConfig;

  constructor(options: ScorerOptions) {
    this.config = buildConfig(options);
    // Surfaces TaskMismatch and unknown names at construction time.
    runCli(["eval", ...this.config.args, "--dry-run"]);
  }

  evaluate(...args: [ComputeOptions]): Report {
    const options = checkComputeOptions(args);
    return evaluateViaCli(this.config, options);
  }
}
