"""Task-mapped metrics: classification labels and BIO tag sequences.

The same loading interface serves every task family; a task suffix (or
the task argument) picks the right computation.
"""

from multieval import load_metric

# Sequence classification: label ids instead of text.
accuracy = load_metric("accuracy-for-sequence-classification")
f1 = load_metric("f1", task="sequence-classification")

predictions = [0, 2, 1, 1, 0, 2, 2, 1]
references = [0, 1, 1, 1, 0, 2, 1, 1]

print("accuracy:", accuracy.compute(predictions=predictions, references=references).score)
result = f1.compute(predictions=predictions, references=references)
print("macro F1:", round(result.score, 4))
for key in sorted(result.components):
    if key.startswith("f1_"):
        print(f"  {key}: {result.components[key]:.4f}")

# Multiple predictions compose through the same reduce framework: under
# the default best-of reduce, any correct candidate counts.
multi = accuracy.compute(predictions=[[0, 1], [2, 2]], references=[[1], [0]])
print("multi-prediction accuracy (any correct counts):", multi.score)

# Sequence labeling: entity-level exact-span F1 over BIO tags. A dangling
# I- tag is repaired to B- and the repair is reported.
span_f1 = load_metric("span-f1")
result = span_f1.compute(
    predictions=[["B-PER", "I-PER", "O", "B-LOC"], ["O", "I-ORG"]],
    references=[["B-PER", "I-PER", "O", "B-LOC"], ["O", "B-ORG"]],
)
print("\nspan F1:", result.score)
print("repaired tags:", int(result.components["repaired_tags"]))
