"""From-scratch random forest for binary classification.

Hyperparameters follow the fixed configuration used throughout: 100 trees,
Gini splits, sqrt(n_features) candidates per node, effectively unbounded
depth, min 2 samples to split, bootstrap resampling. Predictions expose the
fraction of tree votes as a confidence.

The inner split scan runs in a compiled extension when available and falls
back to a numpy implementation with identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

try:
    from ._split import scan_split as _scan_split

    KERNEL_IMPL = "compiled"
except ImportError:  # extension not built; numpy fallback
    from ._split_py import scan_split as _scan_split

    KERNEL_IMPL = "pure"


def gini(counts) -> float:
    """Gini impurity of a node given per-class sample counts."""
    total = sum(counts)
    if total < 1:
        raise ValueError("gini needs at least one sample")
    return 1.0 - sum((c / total) ** 2 for c in counts)


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 2**31
    min_samples_split: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")


@dataclass
class DecisionTree:
    """Flat-array binary tree; feature == -1 marks a leaf."""

    feature: np.ndarray  # int32
    threshold: np.ndarray  # float64
    left: np.ndarray  # int32
    right: np.ndarray  # int32
    n0: np.ndarray  # int64 leaf sample counts (0 on internal nodes)
    n1: np.ndarray
    leaf_class: np.ndarray  # int8, majority with ties toward class 0

    def predict(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feat = self.feature[idx]
            rows = np.nonzero(feat >= 0)[0]
            if rows.size == 0:
                break
            at = idx[rows]
            go_left = X[rows, feat[rows]] <= self.threshold[at]
            idx[rows] = np.where(go_left, self.left[at], self.right[at])
        return self.leaf_class[idx]


@dataclass
class RandomForest:
    config: ForestConfig
    n_features: int
    max_features: int
    trees: list[DecisionTree] = field(default_factory=list)

    def predict_proba(self, X) -> np.ndarray:
        """(n, 2) array of class probabilities from hard tree votes."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        if np.isnan(X).any():
            raise ValueError("missing values must be imputed before prediction")
        votes1 = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees:
            votes1 += tree.predict(X)
        n = len(self.trees)
        p1 = votes1 / n
        p0 = (n - votes1) / n
        return np.column_stack([p0, p1])

    def predict_label(self, X) -> np.ndarray:
        """0/1 labels; a (0.5, 0.5) tie resolves to class 0."""
        proba = self.predict_proba(X)
        return (proba[:, 1] > proba[:, 0]).astype(np.int8)


class _TreeBuilder:
    def __init__(self, X, y, max_features, config, rng):
        self.X = X
        self.y = y
        self.max_features = max_features
        self.config = config
        self.rng = rng
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.n0 = []
        self.n1 = []

    def _add_node(self):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.n0.append(0)
        self.n1.append(0)
        return len(self.feature) - 1

    def build(self, idx: np.ndarray, depth: int) -> int:
        node = self._add_node()
        labels = self.y[idx]
        c1 = int(labels.sum())
        c0 = idx.size - c1

        if (
            idx.size < self.config.min_samples_split
            or depth >= self.config.max_depth
            or c0 == 0
            or c1 == 0
        ):
            self.n0[node], self.n1[node] = c0, c1
            return node

        n = idx.size
        candidates = self.rng.choice(
            self.X.shape[1], size=self.max_features, replace=False
        )
        parent_score = n - (c0 * c0 + c1 * c1) / n
        best_score = np.inf
        best_feature = -1
        best_thr = 0.0
        for f in candidates:
            col = self.X[idx, f]
            order = np.argsort(col, kind="stable")
            score, thr, found = _scan_split(
                np.ascontiguousarray(col[order]),
                np.ascontiguousarray(labels[order].astype(np.int64)),
            )
            if found and score < best_score:
                best_score = score
                best_feature = int(f)
                best_thr = thr

        if best_feature < 0 or not best_score < parent_score:
            self.n0[node], self.n1[node] = c0, c1
            return node

        go_left = self.X[idx, best_feature] <= best_thr
        left_idx = idx[go_left]
        right_idx = idx[~go_left]
        self.feature[node] = best_feature
        self.threshold[node] = best_thr
        self.left[node] = self.build(left_idx, depth + 1)
        self.right[node] = self.build(right_idx, depth + 1)
        return node

    def finish(self) -> DecisionTree:
        n0 = np.array(self.n0, dtype=np.int64)
        n1 = np.array(self.n1, dtype=np.int64)
        return DecisionTree(
            feature=np.array(self.feature, dtype=np.int32),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int32),
            right=np.array(self.right, dtype=np.int32),
            n0=n0,
            n1=n1,
            leaf_class=(n1 > n0).astype(np.int8),
        )


def fit_forest(X, y, config: ForestConfig = ForestConfig()) -> RandomForest:
    """Train a forest; (seed, data) fully determine the result."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.int8).ravel()
    if X.shape[0] == 0:
        raise ValueError("cannot fit a forest on zero rows")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    if np.isnan(X).any():
        raise ValueError("missing values must be imputed before fitting")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")

    n, n_features = X.shape
    max_features = max(1, min(n_features, int(math.floor(math.sqrt(n_features)))))
    forest = RandomForest(config=config, n_features=n_features, max_features=max_features)

    # Per-tree generators are pre-derived so a parallel fit would match the
    # sequential result.
    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 10000))
    try:
        for t in range(config.n_trees):
            rng = np.random.default_rng(np.random.SeedSequence((config.seed, t)))
            sample = rng.integers(0, n, size=n)
            builder = _TreeBuilder(X, y, max_features, config, rng)
            builder.build(np.sort(sample), 0)
            forest.trees.append(builder.finish())
    finally:
        sys.setrecursionlimit(old_limit)
    return forest


def dump_trees(forest: RandomForest) -> str:
    """Line-oriented serialization of all trees (see README for the format)."""
    lines = []
    for t, tree in enumerate(forest.trees):
        lines.append(f"tree {t}")
        for i in range(tree.feature.shape[0]):
            if tree.feature[i] >= 0:
                lines.append(
                    f"node {i} feature {tree.feature[i]} "
                    f"threshold {float(tree.threshold[i])!r} "
                    f"left {tree.left[i]} right {tree.right[i]}"
                )
            else:
                lines.append(f"leaf {i} counts {tree.n0[i]} {tree.n1[i]}")
    return "\n".join(lines) + "\n"
