"""Undirected weighted graphs, node permutations, and Laplacian matrices.

Graphs are immutable: the weight matrix is copied and frozen at construction,
so instances are safe to share across threads. All operations here are pure
functions returning new objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
from scipy import sparse

from .errors import ValidationError


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with edge weights in [0, 1] and no self-loops.

    Parameters
    ----------
    weights : (n, n) array
        Symmetric weight matrix with zero diagonal. Unweighted graphs use
        weights in {0, 1}.
    label : int, optional
        Class id when the graph belongs to a labeled dataset.
    id : int, optional
        Dataset-local identifier (contiguous from 1 in file order).
    """

    weights: np.ndarray
    label: int | None = None
    id: int | None = None

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError(f"weight matrix must be square, got shape {w.shape}")
        if not np.isfinite(w).all():
            raise ValidationError("weight matrix contains non-finite entries")
        if not np.array_equal(w, w.T):
            raise ValidationError("weight matrix must be symmetric")
        if w.size and np.any(np.diagonal(w) != 0.0):
            raise ValidationError("self-loops are not allowed (diagonal must be zero)")
        if w.size and (w.min() < 0.0 or w.max() > 1.0):
            raise ValidationError("edge weights must lie in [0, 1]")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        """Node count."""
        return self.weights.shape[0]

    @property
    def edge_count(self) -> int:
        """Number of edges with nonzero weight."""
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    @property
    def total_weight(self) -> float:
        """Sum of edge weights (each undirected edge counted once)."""
        return float(np.triu(self.weights, 1).sum())

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield (i, j, weight) for every edge with i < j."""
        ii, jj = np.nonzero(np.triu(self.weights, 1))
        for i, j in zip(ii.tolist(), jj.tolist()):
            yield i, j, float(self.weights[i, j])


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..n-1}; ``mapping[i]`` is the new index of node i."""

    mapping: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.mapping, dtype=np.intp)
        if m.ndim != 1:
            raise ValidationError("permutation mapping must be one-dimensional")
        n = m.shape[0]
        seen = np.zeros(n, dtype=bool)
        if n and (m.min() < 0 or m.max() >= n):
            raise ValidationError("permutation entries out of range")
        seen[m] = True
        if not seen.all():
            raise ValidationError("permutation mapping is not a bijection")
        m.setflags(write=False)
        object.__setattr__(self, "mapping", m)

    @property
    def n(self) -> int:
        return self.mapping.shape[0]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    def inverse(self) -> "Permutation":
        return Permutation(np.argsort(self.mapping))

    def matrix(self) -> np.ndarray:
        """Permutation matrix M with M[i, mapping[i]] = 1.

        Conjugation M.T @ A @ M relabels A so that entry (i, j) moves to
        (mapping[i], mapping[j]).
        """
        m = np.zeros((self.n, self.n))
        m[np.arange(self.n), self.mapping] = 1.0
        return m


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int, float]],
    label: int | None = None,
    id: int | None = None,
) -> Graph:
    """Build a graph from an edge list of (i, j, weight) triples.

    Mirrored duplicates (i, j)/(j, i) are accepted when they carry the same
    weight, matching the both-directions convention of on-disk edge lists.
    """
    if n < 0:
        raise ValidationError("node count must be nonnegative")
    w = np.zeros((n, n))
    for i, j, weight in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"edge ({i}, {j}) references a node outside 0..{n - 1}")
        if i == j:
            raise ValidationError(f"self-loop edge ({i}, {i}) is not allowed")
        if not (0.0 < weight <= 1.0):
            raise ValidationError(f"edge weight {weight} outside (0, 1]")
        if w[i, j] != 0.0 and w[i, j] != weight:
            raise ValidationError(
                f"conflicting duplicate weights for edge ({i}, {j}): {w[i, j]} vs {weight}"
            )
        w[i, j] = weight
        w[j, i] = weight
    return Graph(w, label=label, id=id)


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian L = D - W with D = diag(row sums of W)."""
    degrees = g.weights.sum(axis=1)
    return np.diag(degrees) - g.weights


def laplacian_sparse(g: Graph) -> sparse.csr_matrix:
    """Laplacian in CSR form, assembled from the edge structure only."""
    ii, jj = np.nonzero(g.weights)
    vals = g.weights[ii, jj]
    degrees = np.bincount(ii, weights=vals, minlength=g.n)
    rows = np.concatenate([ii, np.arange(g.n)])
    cols = np.concatenate([jj, np.arange(g.n)])
    data = np.concatenate([-vals, degrees])
    return sparse.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def permute_graph(g: Graph, p: Permutation) -> Graph:
    """Relabel nodes so that result.weights[p(i), p(j)] == g.weights[i, j]."""
    if p.n != g.n:
        raise ValidationError(f"permutation size {p.n} does not match graph size {g.n}")
    inv = p.inverse().mapping
    return Graph(g.weights[np.ix_(inv, inv)], label=g.label, id=g.id)


def pad_isolated(g: Graph, m: int) -> Graph:
    """Append m isolated nodes, keeping the original block top-left."""
    if m < 0:
        raise ValidationError("pad count must be nonnegative")
    if m == 0:
        return g
    w = np.zeros((g.n + m, g.n + m))
    w[: g.n, : g.n] = g.weights
    return Graph(w, label=g.label, id=g.id)
