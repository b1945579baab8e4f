"""Tour of the bundled language-generation metrics.

Each metric is loaded by name and computed over the same tiny corpus so
the outputs are easy to compare. BLEU variants pool corpus statistics;
the rest score every pair and reduce.
"""

from multieval import load_metric

predictions = [
    "the cat sat on the mat",
    "a dog was running in the park",
    "he reads many books",
]
references = [
    ["the cat sat on the mat", "a cat was sitting on the mat"],
    ["the dog ran in the park"],
    ["he reads a lot of books"],
]

for name in ("bleu", "sacrebleu", "gleu", "rouge-n", "rouge-l", "chrf", "meteor", "ter"):
    loaded = load_metric(name)
    result = loaded.compute(predictions=predictions, references=references)
    direction = "lower is better" if name == "ter" else "higher is better"
    print(f"{name:10s} {result.score:8.4f}   ({direction})")
    if result.components:
        shown = ", ".join(f"{k}={v:.3f}" for k, v in sorted(result.components.items())[:4])
        print(f"{'':10s} components: {shown}")

# Parameters are part of the name resolution: the same metric family can
# be loaded with different settings.
bigram = load_metric("rouge-n", order=2)
print("\nrouge-n order=2:", f"{bigram.compute(predictions=predictions, references=references).score:.4f}")

# BLEU accepts a tokenizer argument; the standardized variant pins it.
intl = load_metric("bleu", tokenizer="intl")
print("bleu intl tokenizer:", f"{intl.compute(predictions=['hi!'], references=['hi !']).score:.4f}")
