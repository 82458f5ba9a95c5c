"""Pairwise one-vs-one algorithm selection with vote counting.

One binary forest per unordered algorithm pair predicts which side is faster;
votes across all pairs pick the algorithm. Optional per-algorithm timeout
forests exclude algorithms predicted to time out before the vote, unless
every algorithm is predicted to time out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forest import ForestConfig, RandomForest, fit_forest
from .labels import LabelStore, Solved, pairwise_label
from .preprocess import ImputerModel, par10
from .scenario import Scenario

TIMEOUT_CONFIDENCE_THRESHOLD = 0.5


@dataclass
class PairwiseModel:
    pair: tuple[str, str]  # (a, b) in portfolio order; class 0 = a faster
    model: RandomForest | None  # None = untrained, abstains from voting


@dataclass
class TimeoutModel:
    algorithm: str
    trained_at: float  # timeout level the predictor reflects
    model: RandomForest | None  # class 1 = will time out


@dataclass
class SelectorEnsemble:
    algorithms: list[str]
    pairwise: list[PairwiseModel]  # one per unordered pair, portfolio order
    timeout_models: list[TimeoutModel] | None
    imputer: ImputerModel


def algorithm_pairs(algorithms) -> list[tuple[str, str]]:
    return [
        (algorithms[i], algorithms[j])
        for i in range(len(algorithms))
        for j in range(i + 1, len(algorithms))
    ]


def _sub_seed(base_seed: int, *path: int) -> int:
    return int(np.random.SeedSequence((base_seed, *path)).generate_state(1)[0])


def timeout_label(obs, timeout: float) -> int | None:
    """Training label for a timeout predictor at the given level.

    None marks an undetermined observation (censored below the level).
    """
    if isinstance(obs, Solved):
        return 0 if obs.runtime <= timeout else 1
    return 1 if obs.at >= timeout else None


def train_ensemble(
    scenario: Scenario,
    train_instances,
    store: LabelStore,
    imputer: ImputerModel,
    forest_config: ForestConfig,
    timeout_enabled: bool = False,
    current_timeout: float | None = None,
    allow_untrained: bool = False,
) -> SelectorEnsemble:
    """Fit pairwise (and optionally timeout) forests from observed labels.

    Row order follows train_instances, so two stores with identical
    observations produce identical ensembles.
    """
    train_instances = list(train_instances)
    if current_timeout is None:
        current_timeout = scenario.cutoff
    feature_rows = {
        i: imputer.transform_row(scenario.feature_row(i)) for i in train_instances
    }

    pairwise: list[PairwiseModel] = []
    any_rows = False
    for p, (a, b) in enumerate(algorithm_pairs(scenario.algorithms)):
        rows, labels = [], []
        for inst in train_instances:
            obs_a = store.get(inst, a)
            obs_b = store.get(inst, b)
            if obs_a is None or obs_b is None:
                continue
            side = pairwise_label(obs_a, obs_b)
            if side is None:
                continue
            rows.append(feature_rows[inst])
            labels.append(0 if side == "a" else 1)
        if rows:
            any_rows = True
            cfg = ForestConfig(
                n_trees=forest_config.n_trees,
                max_depth=forest_config.max_depth,
                min_samples_split=forest_config.min_samples_split,
                seed=_sub_seed(forest_config.seed, 1, p),
            )
            model = fit_forest(np.vstack(rows), np.array(labels), cfg)
        else:
            model = None
        pairwise.append(PairwiseModel(pair=(a, b), model=model))
    if not any_rows and not allow_untrained:
        raise ValueError("no labelled data: every pairwise model would be untrained")

    timeout_models = None
    if timeout_enabled:
        timeout_models = []
        for k, algo in enumerate(scenario.algorithms):
            rows, labels = [], []
            for inst in train_instances:
                obs = store.get(inst, algo)
                if obs is None:
                    continue
                label = timeout_label(obs, current_timeout)
                if label is None:
                    continue
                rows.append(feature_rows[inst])
                labels.append(label)
            if rows:
                cfg = ForestConfig(
                    n_trees=forest_config.n_trees,
                    max_depth=forest_config.max_depth,
                    min_samples_split=forest_config.min_samples_split,
                    seed=_sub_seed(forest_config.seed, 2, k),
                )
                model = fit_forest(np.vstack(rows), np.array(labels), cfg)
            else:
                model = None
            timeout_models.append(
                TimeoutModel(algorithm=algo, trained_at=current_timeout, model=model)
            )

    return SelectorEnsemble(
        algorithms=list(scenario.algorithms),
        pairwise=pairwise,
        timeout_models=timeout_models,
        imputer=imputer,
    )


def predicted_timeout_set(ensemble: SelectorEnsemble, row: np.ndarray) -> set[str]:
    """Algorithms whose timeout predictor is confident they will time out."""
    if ensemble.timeout_models is None:
        return set()
    out = set()
    for tm in ensemble.timeout_models:
        if tm.model is None:
            continue
        p1 = tm.model.predict_proba(row.reshape(1, -1))[0, 1]
        if p1 > TIMEOUT_CONFIDENCE_THRESHOLD:
            out.add(tm.algorithm)
    return out


def select_batch(ensemble: SelectorEnsemble, raw_rows) -> list[str]:
    """Pick an algorithm for each raw (unimputed) feature vector."""
    X = ensemble.imputer.transform(np.atleast_2d(np.asarray(raw_rows, dtype=np.float64)))
    n = X.shape[0]

    pair_votes_for_b = [
        pm.model.predict_label(X) if pm.model is not None else None
        for pm in ensemble.pairwise
    ]
    timeout_pred: dict[str, np.ndarray] = {}
    if ensemble.timeout_models is not None:
        for tm in ensemble.timeout_models:
            if tm.model is not None:
                timeout_pred[tm.algorithm] = (
                    tm.model.predict_proba(X)[:, 1] > TIMEOUT_CONFIDENCE_THRESHOLD
                )

    chosen: list[str] = []
    for r in range(n):
        excluded = {a for a, pred in timeout_pred.items() if pred[r]}
        if excluded == set(ensemble.algorithms):
            # All predicted to time out: fall back to the full portfolio.
            excluded = set()
        candidates = [a for a in ensemble.algorithms if a not in excluded]

        votes = {a: 0 for a in candidates}
        for pm, labels in zip(ensemble.pairwise, pair_votes_for_b):
            a, b = pm.pair
            if labels is None or a not in votes or b not in votes:
                continue
            votes[b if labels[r] == 1 else a] += 1

        # Ties resolve to the earliest algorithm in portfolio order.
        chosen.append(max(candidates, key=lambda a: (votes[a], -candidates.index(a))))
    return chosen


def select_algorithm(ensemble: SelectorEnsemble, raw_row) -> str:
    return select_batch(ensemble, np.asarray(raw_row, dtype=np.float64).reshape(1, -1))[0]


def evaluate_selector(ensemble: SelectorEnsemble, instances, scenario: Scenario) -> float:
    """Total PAR10 of the selected algorithms' true recorded runs."""
    instances = list(instances)
    if not instances:
        return 0.0
    rows = np.vstack([scenario.feature_row(i) for i in instances])
    total = 0.0
    for inst, algo in zip(instances, select_batch(ensemble, rows)):
        rec = scenario.run(inst, algo)
        total += par10(rec.runtime, rec.status, scenario.cutoff)
    return total
