"""Synthetic corpus and harness bookkeeping."""

import pytest

from multieval.bench import (
    BenchRecord,
    run_input_scaling,
    run_metric_scaling,
    summarize,
    synthetic_collection,
)
from multieval.errors import ConfigError


class TestSyntheticCorpus:
    def test_deterministic_for_a_seed(self):
        a = synthetic_collection(50, seed=42)
        b = synthetic_collection(50, seed=42)
        assert a == b

    def test_different_seeds_differ(self):
        assert synthetic_collection(50, seed=1) != synthetic_collection(50, seed=2)

    def test_shape(self):
        collection = synthetic_collection(20)
        assert len(collection) == 20
        for inst in collection:
            assert len(inst.predictions) == 1
            assert len(inst.references) == 1
            assert 5 <= len(inst.references.items[0].split()) <= 25
            assert inst.predictions.items[0]  # never empty

    def test_predictions_overlap_references(self):
        collection = synthetic_collection(20)
        overlaps = []
        for inst in collection:
            pred = set(inst.predictions.items[0].split())
            ref = set(inst.references.items[0].split())
            overlaps.append(len(pred & ref) / len(ref))
        assert sum(overlaps) / len(overlaps) > 0.5


class TestHarness:
    def test_input_scaling_record_grid(self):
        records = run_input_scaling(sizes=(5, 10), repeats=3, run_mode="sequential")
        assert len(records) == 6
        assert {r.input_size for r in records} == {5, 10}
        assert all(r.metric_count == 2 for r in records)
        assert all(r.throughput > 0 for r in records)
        assert [r.run_index for r in records if r.input_size == 5] == [1, 2, 3]

    def test_metric_scaling_record_grid(self):
        records = run_metric_scaling(input_size=6, repeats=2)
        # 2 modes x counts 2..6 x 2 repeats
        assert len(records) == 20
        assert {r.run_mode for r in records} == {"concurrent", "sequential"}
        assert {r.metric_count for r in records} == {2, 3, 4, 5, 6}

    def test_summary_groups_means(self):
        records = run_input_scaling(sizes=(5,), repeats=3, run_mode="sequential")
        summary = summarize(records)
        assert len(summary) == 1
        row = summary[0]
        assert row["runs"] == 3
        assert row["mean_throughput"] == pytest.approx(
            sum(r.throughput for r in records) / 3
        )

    def test_repeats_validated(self):
        with pytest.raises(ConfigError):
            run_input_scaling(sizes=(5,), repeats=0)

    def test_record_requires_positive_throughput(self):
        with pytest.raises(ConfigError):
            BenchRecord("x", 1, 1, "sequential", 1, 1.0, 0.0)
