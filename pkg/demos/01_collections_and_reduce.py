"""Walk through the data model: instances, collections, reduce stages.

Every evaluation data point pairs a bundle of predictions with a bundle
of references. This script builds a small corpus by hand and shows how
the three reduce stages turn a matrix of pair scores into one number.
"""

from multieval import ReducePolicy, validate_collection
from multieval.engine import score_collection, score_instance
from multieval.metrics.generation import rouge_l

# Scalars are promoted to singleton bundles; lists stay as-is. Counts of
# predictions and references are independent per instance.
collection = validate_collection(
    [
        "the cat sat on the mat",
        ["a dog ran fast", "the dog runs quickly"],  # two candidate outputs
    ],
    [
        ["the cat sat on the mat", "a cat was sitting on the mat"],
        "the dog ran fast",
    ],
)

print(f"instances: {len(collection)}, payload kind: {collection.payload_kind}")
for i, inst in enumerate(collection):
    print(f"  instance {i}: {len(inst.predictions)} prediction(s) x {len(inst.references)} reference(s)")

# One instance, scored pair by pair. With the default policy both inner
# reduces take the best score: each prediction gets its most favourable
# reference, then the best prediction wins.
first = collection.instances[0]
best = score_instance(first, rouge_l, ReducePolicy("max", "max"))
mean = score_instance(first, rouge_l, ReducePolicy("mean", "mean"))
print(f"\ninstance 0 under (max, max):   {best:.4f}")
print(f"instance 0 under (mean, mean): {mean:.4f}")

# The corpus stage folds per-instance scores; arithmetic mean by default.
for policy in (ReducePolicy(), ReducePolicy("mean", "mean"), ReducePolicy(corpus_reduce="sum")):
    score = score_collection(collection, rouge_l, policy)
    print(
        f"corpus score with ref={policy.ref_reduce}, pred={policy.pred_reduce}, "
        f"corpus={policy.corpus_reduce}: {score:.4f}"
    )
