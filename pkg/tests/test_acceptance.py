"""Acceptance suite: one test per exit criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the pass/fail
lines as they complete.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from multieval import (
    ReducePolicy,
    ScorerConfig,
    TaskMismatch,
    available_metrics,
    check_task_compatibility,
    evaluate,
    load_metric,
    validate_collection,
)
from multieval.bench import run_input_scaling, run_metric_scaling, summarize
from multieval.engine import score_collection, score_instance
from multieval.metrics.generation import (
    bleu_instance_stats,
    brevity_penalty,
    chrf_score,
    gleu_score,
    meteor_lite_score,
    rouge_l,
    rouge_n,
    sacrebleu_score,
    ter_score,
)
from multieval.metrics.classification import accuracy_cls, precision_recall_f1_cls
from multieval.metrics.labeling import seqlabel_f1

from conftest import VOCAB, random_label_pairs, random_text_pairs
from oracles import (
    nested_loop_oracle,
    char_ngram_prf_oracle,
    clipped_matches_oracle,
    confusion_oracle,
    gleu_oracle,
    lcs_oracle,
    levenshtein_oracle,
    meteor_oracle,
    span_oracle,
    ter_single_shift_oracle,
)

# Captured at import time, before any test can register extra metrics.
BUNDLED = available_metrics()
INSTANCE_SCORED = tuple(d for d in BUNDLED if d.mode == "instance_scored")
FIXTURES = Path(__file__).parent / "fixtures"
TOLERANCE = 1e-12
REDUCES = ("max", "mean", "min")


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def _cores() -> int:
    return len(os.sched_getaffinity(0))


def _random_collection_for(descriptor, rng):
    if descriptor.task.value == "sequence-classification":
        predictions, references = random_label_pairs(rng)
    else:
        predictions, references = random_text_pairs(rng, max_tokens=6)
    kind = "class_label" if descriptor.task.value == "sequence-classification" else "text"
    return validate_collection(predictions, references, payload_kind=kind)


class TestReduceFrameworkOracleSuite:
    def test_engine_matches_triple_nested_loop_oracle(self):
        with criterion(
            "Reduce-framework oracle suite: 200 random collections per "
            "instance-scored metric match the nested-loop oracle within 1e-12 "
            "in under 60 s"
        ):
            started = time.perf_counter()
            for descriptor in INSTANCE_SCORED:
                metric = load_metric(descriptor.base_name, task=descriptor.task).metric
                rng = random.Random(f"oracle:{descriptor.base_name}")
                for _ in range(200):
                    collection = _random_collection_for(descriptor, rng)
                    policy = ReducePolicy(rng.choice(REDUCES), rng.choice(REDUCES))
                    raw = [
                        (inst.predictions.items, inst.references.items)
                        for inst in collection
                    ]
                    expected = nested_loop_oracle(
                        raw,
                        metric.pair_score,
                        policy.ref_reduce,
                        policy.pred_reduce,
                        "mean",
                        metric.higher_is_better,
                    )
                    actual = score_collection(
                        collection, metric.pair_score, policy, metric.higher_is_better
                    )
                    assert abs(actual - expected) <= TOLERANCE, descriptor.base_name
            elapsed = time.perf_counter() - started
            assert elapsed < 60.0, f"oracle suite took {elapsed:.1f}s"


class TestMetricGroundTruths:
    def test_derived_examples_pass_against_their_oracles(self):
        with criterion("Metric ground truths: derived examples match their oracles"):
            # BLEU: clipped n-gram counting.
            stats = bleu_instance_stats("the the the", ["the cat"])
            assert stats.matches[0] == clipped_matches_oracle(
                ("the", "the", "the"), [("the", "cat")], 1
            ) == 1
            assert stats.matches[1] == clipped_matches_oracle(
                ("the", "the", "the"), [("the", "cat")], 2
            ) == 0
            # BLEU: brevity penalty at c=2, r=4 is e^-1.
            assert abs(brevity_penalty(2, 4) - 2.718281828459045**-1) <= TOLERANCE
            # SacreBLEU differs from whitespace BLEU on punctuation.
            from multieval.metrics.generation import BleuMetric

            pair = validate_collection(["hi!"], ["hi !"])
            ws = BleuMetric(smoothing="exp").compute(pair, ReducePolicy()).score
            assert sacrebleu_score(["hi!"], ["hi !"]).score == 1.0
            assert abs(ws - 0.18393972058572117) <= TOLERANCE
            # GLEU enumeration oracle (3 matches over 3 vs 6 pooled n-grams).
            expected = gleu_oracle(("the", "cat"), ("the", "cat", "sat"))
            assert abs(gleu_score("the cat", "the cat sat") - expected) <= TOLERANCE
            # ROUGE-L exhaustive LCS oracle.
            assert lcs_oracle(("a", "b", "c", "d"), ("a", "c", "b", "d")) == 3
            assert abs(rouge_l("a b c d", "a c b d") - 0.75) <= TOLERANCE
            # chrF per-order hand counting.
            orders = [char_ngram_prf_oracle("abcd", "abce", k) for k in range(1, 7)]
            usable = [f for f in orders if f is not None]
            assert abs(chrf_score("abcd", "abce") - sum(usable) / len(usable)) <= TOLERANCE
            # TER: word Levenshtein and greedy shift.
            assert levenshtein_oracle(("a", "x", "c", "d"), ("a", "b", "c", "d")) == 1
            assert abs(ter_score("a x c d", "a b c d") - 0.25) <= TOLERANCE
            shift = ter_single_shift_oracle(("b", "a", "c", "d"), ("a", "b", "c", "d"))
            assert abs(ter_score("b a c d", "a b c d") - shift) <= TOLERANCE
            assert shift == 0.25
            # METEOR: closed form on identity, chunk enumeration on permutation.
            assert abs(meteor_lite_score("a b c", "a b c") - (1 - 0.5 * (1 / 3) ** 3)) <= TOLERANCE
            permuted = meteor_oracle(("c", "a", "b"), ("a", "b", "c"))
            assert abs(meteor_lite_score("c a b", "a b c") - permuted) <= TOLERANCE
            assert meteor_lite_score("c a b", "a b c") < meteor_lite_score("a b c", "a b c")
            # Classification: enumeration and confusion-matrix oracle.
            assert abs(accuracy_cls([1, 0, 1], [1, 1, 1]) - 2 / 3) <= TOLERANCE
            preds = [0, 1, 2, 2, 0, 1, 1, 2, 0]
            refs = [0, 1, 1, 2, 2, 1, 0, 2, 0]
            oracle = confusion_oracle(preds, refs)
            macro = sum(s["f1"] for s in oracle.values()) / len(oracle)
            assert abs(precision_recall_f1_cls(preds, refs).score - macro) <= TOLERANCE
            # Labeling: span-extraction oracle.
            assert span_oracle(("B-PER", "I-PER", "O")) == {("PER", 0, 2)}
            assert seqlabel_f1([["B-PER", "I-PER", "O"]], [["B-PER", "O", "O"]]).score == 0.0
            assert seqlabel_f1([["B-PER", "O", "B-LOC"]], [["B-PER", "O", "B-ORG"]]).score == 0.5

    def test_trivial_identity_and_zero_cases_for_all_tokenizers(self):
        with criterion(
            "Metric ground truths: identity/zero cases hold for every tokenizer mode"
        ):
            texts = ("the cat sat on the mat", "hi there!", "a")
            for mode in ("whitespace", "intl", "char"):
                for text in texts:
                    assert gleu_score(text, text, tokenizer=mode) == 1.0
                    assert rouge_n(text, text, tokenizer=mode) == 1.0
                    assert rouge_l(text, text, tokenizer=mode) == 1.0
                    assert ter_score(text, text, tokenizer=mode) == 0.0
                    collection = validate_collection([text], [text])
                    from multieval.metrics.generation import BleuMetric

                    assert BleuMetric(tokenizer=mode).compute(
                        collection, ReducePolicy()
                    ).score == 1.0
                assert gleu_score("aa bb", "cc dd", tokenizer=mode) == 0.0
                assert rouge_n("aa bb", "cc dd", tokenizer=mode) == 0.0
            # chrF and METEOR identity (tokenizer-independent and whitespace).
            for text in texts:
                assert chrf_score(text, text) == 1.0
            assert chrf_score("abc", "xyz") == 0.0
            assert meteor_lite_score("aa bb", "cc dd") == 0.0
            assert sacrebleu_score(["the cat!"], ["the cat!"]).score == 1.0
            assert sacrebleu_score([""], ["the cat"]).score == 0.0


class TestReduceSemantics:
    def test_monotone_under_best_reduce_and_singleton_invariance(self):
        with criterion(
            "Reduce semantics: 1000 trials of added options never hurt under "
            "(max, max); singleton collections are policy-invariant"
        ):
            lg_metrics = [
                load_metric(d.base_name).metric
                for d in INSTANCE_SCORED
                if d.task.value == "language-generation"
            ]
            rng = random.Random("monotone")
            policy = ReducePolicy("max", "max")
            for _ in range(1000):
                metric = rng.choice(lg_metrics)
                k, m = rng.randint(1, 3), rng.randint(1, 3)
                sentence = lambda: " ".join(
                    rng.choice(VOCAB) for _ in range(rng.randint(1, 6))
                )
                preds = [sentence() for _ in range(k)]
                refs = [sentence() for _ in range(m)]
                grown_preds = preds + [sentence()]
                grown_refs = refs + [sentence()]
                base = score_instance(
                    _instance(preds, refs), metric.pair_score, policy, metric.higher_is_better
                )
                more_preds = score_instance(
                    _instance(grown_preds, refs), metric.pair_score, policy, metric.higher_is_better
                )
                more_refs = score_instance(
                    _instance(preds, grown_refs), metric.pair_score, policy, metric.higher_is_better
                )
                if metric.higher_is_better:
                    assert more_preds >= base - TOLERANCE
                    assert more_refs >= base - TOLERANCE
                else:  # best is numerically smallest
                    assert more_preds <= base + TOLERANCE
                    assert more_refs <= base + TOLERANCE

            # Singleton degeneracy: with k = m = 1 every (ref, pred) reduce
            # combination yields the same corpus score.
            for trial in range(20):
                seed_rng = random.Random(trial)
                preds = [" ".join(seed_rng.choice(VOCAB) for _ in range(4)) for _ in range(5)]
                refs = [" ".join(seed_rng.choice(VOCAB) for _ in range(4)) for _ in range(5)]
                collection = validate_collection(preds, refs)
                metric = lg_metrics[trial % len(lg_metrics)]
                scores = {
                    score_collection(
                        collection,
                        metric.pair_score,
                        ReducePolicy(rr, pr),
                        metric.higher_is_better,
                    )
                    for rr in REDUCES
                    for pr in REDUCES
                }
                assert len(scores) == 1


def _instance(preds, refs):
    return validate_collection([preds], [refs]).instances[0]


class TestScorerDeterminism:
    def test_concurrent_equals_sequential_over_random_configurations(self):
        with criterion(
            "Scorer determinism: concurrent and sequential reports are "
            "byte-identical over 50 random 2-6 metric configurations"
        ):
            lg_names = [
                d.base_name for d in BUNDLED if d.task.value == "language-generation"
            ]
            rng = random.Random("determinism")
            for _ in range(50):
                names = rng.sample(lg_names, rng.randint(2, 6))
                policy = ReducePolicy(rng.choice(REDUCES), rng.choice(REDUCES))
                predictions, references = random_text_pairs(rng, n_max=8, max_tokens=6)
                collection = validate_collection(predictions, references)
                descriptors = tuple(load_metric(n).descriptor for n in names)
                sequential = evaluate(
                    collection,
                    ScorerConfig(descriptors, run_mode="sequential", policy=policy),
                )
                concurrent = evaluate(
                    collection,
                    ScorerConfig(
                        descriptors,
                        run_mode="concurrent",
                        policy=policy,
                        worker_cap=rng.randint(1, 4),
                    ),
                )
                assert sequential.to_json().encode() == concurrent.to_json().encode()


class TestTaskSanityCheck:
    def test_exhaustive_metric_pairs(self):
        with criterion(
            "Task sanity: every cross-task bundled pair raises TaskMismatch, "
            "every same-task pair passes (exhaustive)"
        ):
            for first in BUNDLED:
                for second in BUNDLED:
                    pair = (first, second)
                    if first.task is second.task:
                        check_task_compatibility(pair)
                    else:
                        with pytest.raises(TaskMismatch):
                            check_task_compatibility(pair)


class TestTrendReproduction:
    def test_input_scaling_throughput_is_flat_within_an_order_of_magnitude(self):
        with criterion(
            "Trend reproduction: input-scaling throughput varies by less than "
            "10x across 10^2..10^4 instances"
        ):
            started = time.perf_counter()
            records = run_input_scaling(sizes=(100, 1_000, 10_000), repeats=5)
            means = [
                row["mean_throughput"]
                for row in summarize(records)
            ]
            assert len(means) == 3
            assert max(means) / min(means) < 10.0
            assert time.perf_counter() - started < 900.0

    def test_sequential_throughput_decreases_with_metric_count(self):
        with criterion(
            "Trend reproduction: sequential throughput decreases monotonically "
            "as metrics are added"
        ):
            records = run_metric_scaling(input_size=2_000, repeats=3)
            throughput: dict[int, float] = {}
            for row in summarize(records):
                if row["run_mode"] == "sequential":
                    throughput[row["metric_count"]] = row["mean_throughput"]
            for count in range(2, 6):
                assert throughput[count + 1] < throughput[count], (
                    count,
                    throughput,
                )

    @pytest.mark.skipif(
        _cores() < 4,
        reason=(
            "criterion is defined on a >=4-core machine; "
            f"this machine exposes {_cores()} core(s)"
        ),
    )
    def test_metric_scaling_concurrent_beats_sequential(self):
        with criterion(
            "Trend reproduction: concurrent beats sequential at every metric "
            "count, speedup >= 1.5x at 6 metrics (10k instances, 5 repeats)"
        ):
            started = time.perf_counter()
            records = run_metric_scaling(input_size=10_000, repeats=5)
            walls: dict[tuple[str, int], float] = {}
            for row in summarize(records):
                walls[(row["run_mode"], row["metric_count"])] = row["mean_wall_time_s"]
            for count in range(2, 7):
                assert walls[("concurrent", count)] < walls[("sequential", count)], count
            speedup = walls[("sequential", 6)] / walls[("concurrent", 6)]
            assert speedup >= 1.5, f"speedup at 6 metrics was {speedup:.2f}x"
            assert time.perf_counter() - started < 900.0


class TestCliRoundTrip:
    def test_fixture_reports_byte_identical_across_invocations_and_modes(self, tmp_path):
        with criterion(
            "CLI round-trip: 100-line fixture report is byte-identical across "
            "invocations and run modes"
        ):
            outputs = []
            for index, mode in enumerate(
                ("sequential", "sequential", "concurrent", "concurrent")
            ):
                out = tmp_path / f"report_{index}.json"
                proc = subprocess.run(
                    [
                        sys.executable, "-m", "multieval", "eval",
                        "--predictions", str(FIXTURES / "predictions_100.jsonl"),
                        "--references", str(FIXTURES / "references_100.jsonl"),
                        "--metrics", "bleu,sacrebleu,chrf,gleu",
                        "--run-mode", mode,
                        "--output", str(out),
                    ],
                    capture_output=True,
                    text=True,
                )
                assert proc.returncode == 0, proc.stderr
                outputs.append(out.read_bytes())
            assert len(set(outputs)) == 1
            report = json.loads(outputs[0])
            assert report["total_items"] == 100
