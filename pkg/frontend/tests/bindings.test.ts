import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, describe, expect, it } from "vitest";

import {
  ConfigError,
  Scorer,
  TaskMismatchError,
  UnknownMetricError,
  loadMetric,
} from "../src/index.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixtures = join(here, "..", "..", "tests", "fixtures");
const predictionsPath = join(fixtures, "predictions_100.jsonl");
const referencesPath = join(fixtures, "references_100.jsonl");

function readJsonl(path: string): string[] {
  return readFileSync(path, "utf-8")
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line) as string);
}

const scratch: string[] = [];
afterAll(() => {
  for (const dir of scratch) rmSync(dir, { recursive: true, force: true });
});

function cliReport(metrics: string, runMode: string): unknown {
  const workdir = mkdtempSync(join(tmpdir(), "bindings-test-"));
  scratch.push(workdir);
  const out = join(workdir, "report.json");
  const proc = spawnSync(
    "python3",
    [
      "-m", "multieval", "eval",
      "--predictions", predictionsPath,
      "--references", referencesPath,
      "--metrics", metrics,
      "--run-mode", runMode,
      "--output", out,
    ],
    { encoding: "utf-8" },
  );
  expect(proc.status, proc.stderr).toBe(0);
  return JSON.parse(readFileSync(out, "utf-8"));
}

describe("binding fidelity", () => {
  it("scorer evaluate on the fixture equals the CLI report value-for-value", () => {
    const scorer = new Scorer({
      metrics: ["bleu", "sacrebleu", "chrf", "gleu"],
      runMode: "sequential",
    });
    const viaBindings = scorer.evaluate({
      predictions: readJsonl(predictionsPath),
      references: readJsonl(referencesPath),
    });
    const viaCli = cliReport("bleu,sacrebleu,chrf,gleu", "sequential");
    expect(viaBindings).toStrictEqual(viaCli);
  });

  it("run modes agree through the binding too", () => {
    const input = {
      predictions: readJsonl(predictionsPath).slice(0, 20),
      references: readJsonl(referencesPath).slice(0, 20),
    };
    const sequential = new Scorer({ metrics: ["bleu", "ter"], runMode: "sequential" });
    const concurrent = new Scorer({ metrics: ["bleu", "ter"], runMode: "concurrent" });
    expect(sequential.evaluate(input)).toStrictEqual(concurrent.evaluate(input));
  });

  it("single-metric handle returns the score and components", () => {
    const bleu = loadMetric("bleu");
    const result = bleu.compute({ predictions: ["the cat sat"], references: ["the cat sat"] });
    expect(result.score).toBe(1.0);
    expect(result.components.brevity_penalty).toBe(1.0);
  });

  it("metric parameters pass through", () => {
    const rouge2 = loadMetric("rouge-n", { order: 2 });
    const result = rouge2.compute({
      predictions: ["a b c"],
      references: ["a b d"],
    });
    expect(result.score).toBeCloseTo(0.5, 12);
  });

  it("nested multi-prediction / multi-reference inputs round-trip", () => {
    const gleu = loadMetric("gleu");
    const result = gleu.compute({
      predictions: [["totally wrong", "the cat sat"]],
      references: [["the cat sat", "a cat sat"]],
    });
    expect(result.score).toBe(1.0);
  });
});

describe("calling convention", () => {
  it("rejects positional arguments", () => {
    const bleu = loadMetric("bleu");
    const compute = bleu.compute.bind(bleu) as unknown as (...args: unknown[]) => unknown;
    expect(() => compute(["the cat"], ["the cat"])).toThrow(TypeError);
    expect(() => compute("the cat")).toThrow(TypeError);
    const scorer = new Scorer({ metrics: ["bleu"] });
    const evaluate = scorer.evaluate.bind(scorer) as unknown as (...args: unknown[]) => unknown;
    expect(() => evaluate(["the cat"], ["the cat"])).toThrow(TypeError);
  });

  it("requires both named fields", () => {
    const bleu = loadMetric("bleu");
    const compute = bleu.compute.bind(bleu) as unknown as (...args: unknown[]) => unknown;
    expect(() => compute({ predictions: ["x"] })).toThrow(TypeError);
  });
});

describe("error propagation", () => {
  it("task-incompatible metrics fail at construction", () => {
    expect(() => new Scorer({ metrics: ["bleu", "accuracy"] })).toThrow(TaskMismatchError);
  });

  it("empty metric list is a configuration error", () => {
    expect(() => new Scorer({ metrics: [] })).toThrow(ConfigError);
  });

  it("unknown metric names fail at load time", () => {
    expect(() => loadMetric("wer")).toThrow(UnknownMetricError);
  });
});
