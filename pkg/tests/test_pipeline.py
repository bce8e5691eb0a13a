import math
import random

import numpy as np
import pytest

from lcpkit.corpus import Instance, split_train_dev
from lcpkit.errors import DataError
from lcpkit.features import FeatureConfig
from lcpkit.forest import ForestConfig
from lcpkit.pipeline import fit_and_evaluate, gold_vector, predict_scores, run_ablation

from conftest import continuous_lexicon, make_registry, random_word, synthetic_complexity


def toy_world(n=80, seed=0):
    """Distinct-token corpus whose gold follows the syllable/frequency recipe."""
    rng = random.Random(seed)
    words = set()
    while len(words) < n:
        words.add(random_word(rng))
    max_log = math.log1p(9999)
    freq = {}
    instances = []
    for k, w in enumerate(sorted(words)):
        freq[w] = rng.randint(1, 9999)
        gold = synthetic_complexity(w, freq[w], rng.gauss(0, 0.02), max_log)
        instances.append(Instance(f"i{k:04d}", "bible", f"the {w} was seen", w, gold))
    prevalence = {w: rng.uniform(1.0, 5.0) for w in list(sorted(words))[: int(0.7 * n)]}
    registry = make_registry(
        freq=continuous_lexicon("frequency", {w: float(c) for w, c in freq.items()}),
        prev=continuous_lexicon("prevalence", prevalence),
    )
    return instances, registry


FOREST = ForestConfig(n_trees=8, seed=11)
FEATURES = FeatureConfig(
    enabled=frozenset({"length", "syllables", "frequency", "char_trigrams", "prevalence"}),
    trigram_min_count=1,
)


class TestFitAndEvaluate:
    def test_produces_report_and_model(self):
        instances, registry = toy_world()
        split = split_train_dev(instances, 0.2, seed=3)
        result = fit_and_evaluate(split, registry, FEATURES, FOREST)
        assert result.report is not None
        assert result.report.n == len(split.dev)
        assert len(result.model.trees) == FOREST.n_trees
        assert result.model.feature_names == result.schema.column_names()
        assert result.report.mae < 0.2

    def test_eval_on_train(self):
        instances, registry = toy_world(n=40)
        split = split_train_dev(instances, 0.2, seed=3)
        result = fit_and_evaluate(split, registry, FEATURES, FOREST, eval_on="train")
        assert result.report.n == len(split.train)

    def test_bad_eval_side_rejected(self):
        instances, registry = toy_world(n=10)
        split = split_train_dev(instances, 0.2, seed=3)
        with pytest.raises(ValueError):
            fit_and_evaluate(split, registry, FEATURES, FOREST, eval_on="test")

    def test_missing_gold_rejected(self):
        instances, registry = toy_world(n=10)
        unlabeled = [Instance("u1", "bible", "a word here", "word", None)] + instances[1:]
        split = split_train_dev(unlabeled, 0.2, seed=3)
        with pytest.raises(DataError, match="gold"):
            fit_and_evaluate(split, registry, FEATURES, FOREST)

    def test_gold_vector_lists_offenders(self):
        bad = [Instance(f"u{k}", "bible", "a word here", "word", None) for k in range(7)]
        with pytest.raises(DataError, match="u0"):
            gold_vector(bad)


class TestPredictScores:
    def test_scores_clamped_and_sized(self):
        instances, registry = toy_world()
        split = split_train_dev(instances, 0.2, seed=3)
        result = fit_and_evaluate(split, registry, FEATURES, FOREST)
        scores = predict_scores(split.dev, result.schema, result.model, registry)
        assert scores.shape == (len(split.dev),)
        assert np.all((scores >= 0.0) & (scores <= 1.0))

    def test_fingerprint_mismatch_rejected(self):
        instances, registry = toy_world(n=30)
        split = split_train_dev(instances, 0.2, seed=3)
        result = fit_and_evaluate(split, registry, FEATURES, FOREST)
        other_features = FeatureConfig(enabled=frozenset({"length", "syllables"}))
        other = fit_and_evaluate(split, registry, other_features, FOREST)
        with pytest.raises(DataError, match="fingerprint"):
            predict_scores(split.dev, other.schema, result.model, registry)

    def test_empty_instances(self):
        instances, registry = toy_world(n=20)
        split = split_train_dev(instances, 0.2, seed=3)
        result = fit_and_evaluate(split, registry, FEATURES, FOREST)
        assert predict_scores([], result.schema, result.model, registry).shape == (0,)


class TestAblation:
    def test_rows_and_labels(self):
        instances, registry = toy_world()
        split = split_train_dev(instances, 0.2, seed=3)
        baseline = FeatureConfig(enabled=frozenset({"length", "syllables"}))
        rows = run_ablation(split, registry, baseline, ["frequency", "prevalence"], FOREST)
        assert [r.label for r in rows] == ["baseline", "frequency", "prevalence"]

    def test_empty_candidates_is_baseline_only(self):
        instances, registry = toy_world(n=30)
        split = split_train_dev(instances, 0.2, seed=3)
        baseline = FeatureConfig(enabled=frozenset({"length", "syllables"}))
        rows = run_ablation(split, registry, baseline, [], FOREST)
        assert len(rows) == 1 and rows[0].label == "baseline"

    def test_baseline_row_matches_standalone(self):
        instances, registry = toy_world()
        split = split_train_dev(instances, 0.2, seed=3)
        baseline = FeatureConfig(enabled=frozenset({"length", "syllables", "frequency"}))
        rows = run_ablation(split, registry, baseline, ["prevalence"], FOREST)
        standalone = fit_and_evaluate(split, registry, baseline, FOREST)
        assert rows[0].report == standalone.report

    def test_reproducible(self):
        instances, registry = toy_world(n=40)
        split = split_train_dev(instances, 0.2, seed=3)
        baseline = FeatureConfig(enabled=frozenset({"length", "syllables"}))
        a = run_ablation(split, registry, baseline, ["frequency"], FOREST)
        b = run_ablation(split, registry, baseline, ["frequency"], FOREST)
        assert a == b

    def test_unknown_candidate_rejected(self):
        instances, registry = toy_world(n=10)
        split = split_train_dev(instances, 0.2, seed=3)
        baseline = FeatureConfig(enabled=frozenset({"length"}))
        with pytest.raises(ValueError, match="embeddings"):
            run_ablation(split, registry, baseline, ["embeddings"], FOREST)

    def test_duplicate_candidates_rejected(self):
        instances, registry = toy_world(n=10)
        split = split_train_dev(instances, 0.2, seed=3)
        baseline = FeatureConfig(enabled=frozenset({"length"}))
        with pytest.raises(ValueError, match="duplicate"):
            run_ablation(split, registry, baseline, ["syllables", "syllables"], FOREST)
