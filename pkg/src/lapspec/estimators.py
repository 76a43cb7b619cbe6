"""Scikit-learn style estimators over the spectral-embedding pipeline.

``GraphSpectrumEmbedder`` is a transformer from graphs to t-GLS feature
matrices; ``SpectrumKernelSVC`` is an RBF-kernel SVC over such features. They
compose in a standard Pipeline:

    Pipeline([("embed", GraphSpectrumEmbedder()), ("svc", SpectrumKernelSVC())])
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .embedding import (
    EmbeddingConfig,
    choose_dimension,
    cross_squared_distances,
    embed_dataset,
    embedding_matrix,
    squared_distances,
)
from .errors import ValidationError
from .graph import Graph
from .svm import multiclass_predict, multiclass_train


def check_graph_sequence(x: object) -> list[Graph]:
    """Validate that x is a non-empty sequence of Graph objects."""
    if isinstance(x, Graph):
        raise ValidationError("expected a sequence of graphs, got a single Graph")
    try:
        graphs = list(x)
    except TypeError:
        raise ValidationError(f"expected a sequence of graphs, got {type(x).__name__}") from None
    if not graphs:
        raise ValidationError("expected at least one graph")
    for k, g in enumerate(graphs):
        if not isinstance(g, Graph):
            raise ValidationError(f"item {k} is {type(g).__name__}, not a Graph")
    return graphs


def check_feature_matrix(x: object, dim: int | None = None) -> np.ndarray:
    """Validate a 2-D finite float feature matrix, optionally of fixed width."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"expected a 2-D feature matrix, got ndim={arr.ndim}")
    if arr.shape[0] == 0:
        raise ValidationError("feature matrix has no rows")
    if not np.isfinite(arr).all():
        raise ValidationError("feature matrix contains non-finite values")
    if dim is not None and arr.shape[1] != dim:
        raise ValidationError(f"expected {dim} features, got {arr.shape[1]}")
    return arr


class GraphSpectrumEmbedder(BaseEstimator, TransformerMixin):
    """Transform graphs into fixed-dimension Laplacian-spectrum features.

    Parameters
    ----------
    dim : int, optional
        Explicit embedding dimension.
    percentile : float, optional
        Percentile of the fitted graphs' node counts used to pick the
        dimension (nearest rank). Defaults to 95 when ``dim`` is not given.
    """

    def __init__(self, dim: int | None = None, percentile: float | None = None):
        self.dim = dim
        self.percentile = percentile

    def fit(self, X: Sequence[Graph], y: object = None) -> "GraphSpectrumEmbedder":
        graphs = check_graph_sequence(X)
        cfg = EmbeddingConfig(dim=self.dim, percentile=self.percentile)
        self.dim_ = choose_dimension([g.n for g in graphs], cfg)
        return self

    def transform(self, X: Sequence[Graph]) -> np.ndarray:
        if not hasattr(self, "dim_"):
            raise NotFittedError("GraphSpectrumEmbedder is not fitted; call fit first")
        graphs = check_graph_sequence(X)
        return embedding_matrix(embed_dataset(graphs, self.dim_))


class SpectrumKernelSVC(BaseEstimator, ClassifierMixin):
    """RBF-kernel support-vector classifier over embedding matrices.

    Parameters
    ----------
    C : float
        Soft-margin penalty.
    gamma : float
        RBF kernel width, K(x, y) = exp(-gamma * ||x - y||^2).
    """

    def __init__(self, C: float = 1.0, gamma: float = 0.01):
        self.C = C
        self.gamma = gamma

    def fit(self, X: np.ndarray, y: Sequence[int]) -> "SpectrumKernelSVC":
        x = check_feature_matrix(X)
        labels = np.asarray(y)
        if labels.shape != (x.shape[0],):
            raise ValidationError(
                f"got {labels.shape} labels for {x.shape[0]} rows"
            )
        if self.gamma <= 0.0:
            raise ValidationError("gamma must be positive")
        if self.C <= 0.0:
            raise ValidationError("C must be positive")
        gram = np.exp(-self.gamma * squared_distances(x))
        self.model_ = multiclass_train(gram, labels, self.C)
        self.X_train_ = x
        self.classes_ = np.array(self.model_.classes)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise NotFittedError("SpectrumKernelSVC is not fitted; call fit first")
        x = check_feature_matrix(X, dim=self.X_train_.shape[1])
        rows = np.exp(-self.gamma * cross_squared_distances(x, self.X_train_))
        return multiclass_predict(self.model_, rows)
