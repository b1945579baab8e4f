"""Combined evaluation: many metrics, one collection, one report.

The scorer rejects mixed-task bundles, runs the rest concurrently or
sequentially (reports are byte-identical either way), and user-defined
metrics plug straight in.
"""

from multieval import (
    MetricDescriptor,
    Scorer,
    TaskClass,
    TaskMismatch,
    register_metric,
    validate_collection,
)
from multieval.metrics.base import InstanceMetric
from multieval.scorer import ScorerConfig, evaluate_timed

predictions = ["the cat sat on the mat", "a dog ran in the park", "she read the book"]
references = ["the cat sat on a mat", "the dog ran in the park", "she read a book"]

scorer = Scorer(["bleu", "chrf", "rouge-l", "ter"], run_mode="sequential")
report = scorer(predictions=predictions, references=references)
for name, value in report.items():
    print(name, "->", value if not isinstance(value, dict) else round(value["score"], 4))

# Cross-task bundles are refused up front.
try:
    Scorer(["bleu", "accuracy"])
except TaskMismatch as exc:
    print("\nrejected mixed bundle:", exc)


# A custom metric is a class with a pair score; register it once and it
# behaves exactly like the bundled ones (loading, scorer, reports).
class LengthRatio(InstanceMetric):
    name = "length-ratio"
    task = TaskClass.LANGUAGE_GENERATION

    def pair_score(self, prediction, reference):
        shorter, longer = sorted((len(prediction.split()), len(reference.split())))
        return shorter / longer if longer else 1.0


register_metric(
    MetricDescriptor("length-ratio", TaskClass.LANGUAGE_GENERATION, {}), LengthRatio
)
combined = Scorer(["bleu", "length-ratio"], run_mode="sequential")
print("\nwith a custom metric:", combined(predictions=predictions, references=references)["length-ratio"])

# Timings per metric come from the same run.
collection = validate_collection(predictions, references)
config = ScorerConfig(combined.config.metrics, run_mode="sequential")
_, wall, per_metric = evaluate_timed(collection, config)
print(f"\nwall time {wall * 1e3:.1f} ms; per metric:", {k: f"{v * 1e3:.1f} ms" for k, v in per_metric.items()})
