"""End-to-end glue: fit schema + forest, score instances, run ablations.

Predicted complexity scores leave this layer clamped to [0, 1]; the forest
itself stays a generic unclamped regressor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import evaluation, forest
from .corpus import DatasetSplit, Instance
from .errors import DataError
from .evaluation import AblationRow, MetricsReport
from .features import (
    FEATURE_FAMILIES,
    FeatureConfig,
    FeatureSchema,
    Tagger,
    extract_matrix,
    fit_schema,
    with_families,
)
from .forest import ForestConfig, RandomForest
from .lexicons import LexiconRegistry

EVAL_SIDES = ("dev", "train")


def gold_vector(instances: Sequence[Instance]) -> np.ndarray:
    missing = [inst.id for inst in instances if inst.gold is None]
    if missing:
        shown = ", ".join(missing[:5]) + ("..." if len(missing) > 5 else "")
        raise DataError(f"{len(missing)} instance(s) lack a gold complexity value: {shown}")
    return np.asarray([inst.gold for inst in instances], dtype=np.float64)


@dataclass
class TrainResult:
    schema: FeatureSchema
    model: RandomForest
    report: MetricsReport | None


def predict_scores(
    instances: Sequence[Instance],
    schema: FeatureSchema,
    model: RandomForest,
    registry: LexiconRegistry,
    tagger: Tagger | None = None,
) -> np.ndarray:
    """Clamped complexity predictions for instances under a fitted pipeline."""
    if schema.fingerprint() != model.schema_fingerprint:
        raise DataError(
            "schema fingerprint mismatch: the model was trained with a different feature schema"
        )
    X = extract_matrix(instances, schema, registry, tagger)
    if X.shape[0] == 0:
        return np.zeros(0, dtype=np.float64)
    return np.clip(forest.predict_batch(model, X), 0.0, 1.0)


def fit_and_evaluate(
    split: DatasetSplit,
    registry: LexiconRegistry,
    feature_config: FeatureConfig,
    forest_config: ForestConfig,
    tagger: Tagger | None = None,
    eval_on: str = "dev",
    n_threads: int = 1,
) -> TrainResult:
    """Fit schema and forest on the train side, score on the chosen side.

    The report is None when the evaluation side is empty.
    """
    if eval_on not in EVAL_SIDES:
        raise ValueError(f"eval_on must be one of {EVAL_SIDES}, got {eval_on!r}")
    schema = fit_schema(split.train, registry, feature_config, tagger)
    X = extract_matrix(split.train, schema, registry, tagger)
    y = gold_vector(split.train)
    model = forest.fit(X, y, forest_config, feature_names=schema.column_names(), n_threads=n_threads)
    side = split.dev if eval_on == "dev" else split.train
    report = None
    if side:
        pred = predict_scores(side, schema, model, registry, tagger)
        report = evaluation.evaluate(pred, gold_vector(side))
    return TrainResult(schema=schema, model=model, report=report)


def run_ablation(
    split: DatasetSplit,
    registry: LexiconRegistry,
    baseline: FeatureConfig,
    candidates: Sequence[str],
    forest_config: ForestConfig,
    tagger: Tagger | None = None,
    eval_on: str = "dev",
    n_threads: int = 1,
) -> list[AblationRow]:
    """Baseline-plus-one-feature ablation.

    Row 0 is the baseline configuration alone; row i adds exactly candidate i.
    Every row shares the same split and forest seed, so differences are
    attributable to the added family.
    """
    unknown = [c for c in candidates if c not in FEATURE_FAMILIES]
    if unknown:
        raise ValueError(f"unknown feature families: {unknown}")
    if len(set(candidates)) != len(candidates):
        raise ValueError("duplicate candidate families")

    def score(config: FeatureConfig) -> MetricsReport:
        result = fit_and_evaluate(
            split, registry, config, forest_config, tagger, eval_on, n_threads
        )
        if result.report is None:
            raise DataError("ablation evaluation side is empty; nothing to score")
        return result.report

    rows = [AblationRow("baseline", score(baseline))]
    for fam in candidates:
        rows.append(AblationRow(fam, score(with_families(baseline, fam))))
    return rows
