"""Nested cross-validation of a kernel SVC over spectral embeddings.

Protocol: stratified k-fold outer split; within each outer training portion,
every (C, gamma) grid point is scored by stratified inner cross-validation,
the best point (ties: smaller C, then smaller gamma) is retrained on the full
outer training portion and scored once on the held-out fold. The embedding
dimension is resolved once from the whole dataset's size distribution — it
uses no labels, so there is no selection leakage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .datasets import GraphDataset, stratified_folds
from .embedding import (
    EmbeddingConfig,
    choose_dimension,
    embed_dataset,
    embedding_matrix,
    squared_distances,
)
from .errors import ValidationError
from .svm import multiclass_predict, multiclass_train


@dataclass(frozen=True)
class CvResult:
    """Outcome of one nested cross-validation run."""

    per_fold_accuracy: tuple[float, ...]
    mean: float
    std: float
    chosen_hyperparams: tuple[tuple[float, float], ...]
    seed: int
    dim: int

    def to_json_dict(self, dataset_name: str) -> dict:
        return {
            "dataset": dataset_name,
            "dim": self.dim,
            "folds": list(self.per_fold_accuracy),
            "mean": self.mean,
            "std": self.std,
            "per_fold_hyperparams": [list(hp) for hp in self.chosen_hyperparams],
            "seed": self.seed,
        }


def accuracy(predicted: np.ndarray, truth: np.ndarray) -> float:
    return float(np.mean(np.asarray(predicted) == np.asarray(truth)))


def nested_cv(
    ds: GraphDataset,
    cfg: EmbeddingConfig,
    c_grid: Sequence[float],
    gamma_grid: Sequence[float],
    k_outer: int = 10,
    k_inner: int = 5,
    seed: int = 0,
) -> CvResult:
    """Run the full nested-CV protocol on a labeled dataset.

    The squared-distance matrix is computed once; each gamma reuses it, so a
    grid sweep costs one elementwise exponential per gamma plus the SVM
    trainings. Deterministic for a fixed seed.
    """
    if not c_grid or not gamma_grid:
        raise ValidationError("hyperparameter grids must be non-empty")
    if k_outer < 2 or k_inner < 2:
        raise ValidationError("fold counts must be >= 2")
    c_values = sorted(set(float(c) for c in c_grid))
    gamma_values = sorted(set(float(g) for g in gamma_grid))
    if min(c_values) <= 0 or min(gamma_values) <= 0:
        raise ValidationError("C and gamma values must be positive")

    dim = choose_dimension(ds.sizes, cfg)
    x = embedding_matrix(embed_dataset(ds.graphs, dim))
    sq = squared_distances(x)
    grams = {gamma: np.exp(-gamma * sq) for gamma in gamma_values}
    labels = ds.labels

    root = np.random.SeedSequence(seed)
    outer_seed, *inner_seeds = root.spawn(1 + k_outer)
    assignment = stratified_folds(labels, k_outer, np.random.default_rng(outer_seed))

    fold_accuracies: list[float] = []
    chosen: list[tuple[float, float]] = []
    for fold in range(k_outer):
        test = np.flatnonzero(assignment == fold)
        train = np.flatnonzero(assignment != fold)
        inner = stratified_folds(
            labels[train], k_inner, np.random.default_rng(inner_seeds[fold])
        )
        best_score, best_c, best_gamma = -np.inf, c_values[0], gamma_values[0]
        for c in c_values:
            for gamma in gamma_values:
                gram = grams[gamma]
                scores = []
                for inner_fold in range(k_inner):
                    fit_idx = train[inner != inner_fold]
                    val_idx = train[inner == inner_fold]
                    model = multiclass_train(
                        gram[np.ix_(fit_idx, fit_idx)], labels[fit_idx], c
                    )
                    pred = multiclass_predict(model, gram[np.ix_(val_idx, fit_idx)])
                    scores.append(accuracy(pred, labels[val_idx]))
                score = float(np.mean(scores))
                # Strict improvement keeps the first-seen point, so ties
                # resolve to the smallest C, then the smallest gamma.
                if score > best_score:
                    best_score, best_c, best_gamma = score, c, gamma
        gram = grams[best_gamma]
        model = multiclass_train(gram[np.ix_(train, train)], labels[train], best_c)
        pred = multiclass_predict(model, gram[np.ix_(test, train)])
        fold_accuracies.append(accuracy(pred, labels[test]))
        chosen.append((best_c, best_gamma))

    return CvResult(
        per_fold_accuracy=tuple(fold_accuracies),
        mean=float(np.mean(fold_accuracies)),
        std=float(np.std(fold_accuracies)),
        chosen_hyperparams=tuple(chosen),
        seed=seed,
        dim=dim,
    )


MOLECULAR_C_GRID = (0.5, 1.0, 5.0)
MOLECULAR_GAMMA_GRID = (0.0001, 0.001, 0.01, 0.1, 0.5, 1.0, 5.0)
SOCIAL_C_GRID = (0.5, 1.0, 5.0, 25.0, 50.0)
SOCIAL_GAMMA_GRID = (0.0001, 0.001, 0.01, 0.1)
