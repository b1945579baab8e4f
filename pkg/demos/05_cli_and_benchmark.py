"""The command-line surface: JSONL evaluation and the benchmark harness.

Everything here shells out to the installed ``multieval`` entry point, so
it doubles as a smoke test of the external interface. Benchmark sizes
are kept small; the real harness defaults are documented in the README.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

workdir = Path(tempfile.mkdtemp(prefix="multieval-demo-"))
preds = workdir / "predictions.jsonl"
refs = workdir / "references.jsonl"
report_path = workdir / "report.json"

preds.write_text('"the cat sat"\n["a dog ran", "the dog ran"]\n"hello world"\n')
refs.write_text('"the cat sat"\n"the dog ran"\n["hello world", "hi world"]\n')


def run(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "multieval", *args], capture_output=True, text=True
    )
    print("$ multieval", " ".join(args))
    if proc.returncode != 0:
        print("  exit", proc.returncode, proc.stderr.strip())
    return proc


run(
    "eval",
    "--predictions", str(preds),
    "--references", str(refs),
    "--metrics", "bleu,chrf,gleu",
    "--run-mode", "sequential",
    "--output", str(report_path),
)
report = json.loads(report_path.read_text())
print(json.dumps(report, indent=2)[:400], "...\n")

# Error classes map to distinct exit codes (here: unknown metric).
run("eval", "--predictions", str(preds), "--references", str(refs), "--metrics", "wer")

# A small slice of the input-scaling experiment; the full run uses sizes
# 10^1..10^5 with 5 repeats.
bench_csv = workdir / "bench.csv"
run(
    "bench", "input-scaling",
    "--out", str(bench_csv),
    "--sizes", "50,100",
    "--repeats", "2",
    "--run-mode", "sequential",
)
print(bench_csv.read_text())
print("companion files:", sorted(p.name for p in workdir.glob("bench*")))
