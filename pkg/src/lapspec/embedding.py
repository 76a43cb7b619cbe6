"""Spectral whole-graph embeddings (GLS / t-GLS) and kernels over them.

An embedding is the descending Laplacian spectrum, truncated to the d largest
eigenvalues and zero-padded when the graph has fewer than d nodes. Isolated
nodes contribute exactly-zero eigenvalues, so spectra are computed on the
isolated-node-free core and padded with exact zeros; this makes embeddings of
a graph and of its isolated-node-padded copies identical, not merely close.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import IO, Iterable, Sequence

import numpy as np

from .eigen import eigvals_topk, eigvalsh_full
from .errors import NumericalError, ValidationError
from .graph import Graph, laplacian

_PSD_TOL = 1e-10


@dataclass(frozen=True)
class SpectrumEmbedding:
    """Fixed-dimension vector of Laplacian eigenvalues, largest first."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValidationError("embedding values must be one-dimensional")
        if not np.isfinite(v).all():
            raise NumericalError("embedding contains non-finite values")
        if v.size and np.any(np.diff(v) > 1e-12):
            raise ValidationError("embedding values must be non-increasing")
        if v.size and v.min() < -_PSD_TOL:
            raise ValidationError("embedding values must be nonnegative (Laplacian spectra)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class EmbeddingConfig:
    """Dimension rule: an explicit ``dim``, or a ``percentile`` of graph sizes.

    At most one of the two may be given; the default is the 95th percentile.
    """

    dim: int | None = None
    percentile: float | None = None

    def __post_init__(self) -> None:
        if self.dim is not None and self.percentile is not None:
            raise ValidationError("give either an explicit dim or a percentile, not both")
        if self.dim is None and self.percentile is None:
            object.__setattr__(self, "percentile", 95.0)
        if self.dim is not None and self.dim < 1:
            raise ValidationError("explicit dimension must be >= 1")
        if self.percentile is not None and not 0.0 < self.percentile <= 100.0:
            raise ValidationError("percentile must lie in (0, 100]")


def _clip_spectrum(values: np.ndarray) -> np.ndarray:
    """Clamp the solver's tiny negative roundoff on PSD spectra to exact 0."""
    if values.size and values.min() < -_PSD_TOL:
        raise NumericalError(
            f"Laplacian spectrum has eigenvalue {values.min()} below -{_PSD_TOL}"
        )
    return np.maximum(values, 0.0)


def _core(g: Graph) -> Graph:
    """Subgraph on non-isolated nodes (its spectrum plus zeros is g's)."""
    active = np.flatnonzero(g.weights.sum(axis=1) > 0.0)
    if active.size == g.n:
        return g
    return Graph(g.weights[np.ix_(active, active)])


def gls(g: Graph) -> SpectrumEmbedding:
    """Full graph Laplacian spectrum, descending; dimension equals g.n."""
    return tgls(g, g.n) if g.n else SpectrumEmbedding(np.zeros(0))


def tgls(g: Graph, d: int) -> SpectrumEmbedding:
    """Truncated GLS: the d largest Laplacian eigenvalues, descending,
    zero-padded at the tail when d exceeds the node count."""
    if d < 1:
        raise ValidationError("embedding dimension must be >= 1")
    core = _core(g)
    if core.edge_count == 0:
        return SpectrumEmbedding(np.zeros(d))
    if d <= core.n:
        vals = _clip_spectrum(eigvals_topk(core, d))
    else:
        full = _clip_spectrum(eigvalsh_full(laplacian(core))[::-1])
        vals = np.concatenate([full, np.zeros(d - core.n)])
    return SpectrumEmbedding(vals)


def gls_distance(a: SpectrumEmbedding, b: SpectrumEmbedding) -> float:
    """Euclidean distance between two equal-dimension embeddings."""
    if a.dim != b.dim:
        raise ValidationError(f"embedding dimensions differ: {a.dim} vs {b.dim}")
    return float(np.linalg.norm(a.values - b.values))


def rbf_kernel(a: SpectrumEmbedding, b: SpectrumEmbedding, gamma: float) -> float:
    """exp(-gamma * distance^2); equals 1 exactly when the embeddings match."""
    if gamma <= 0.0:
        raise ValidationError("gamma must be positive")
    return float(np.exp(-gamma * gls_distance(a, b) ** 2))


def embedding_matrix(embeddings: Sequence[SpectrumEmbedding]) -> np.ndarray:
    """Stack embeddings into an (n, d) matrix, validating equal dimensions."""
    if not embeddings:
        raise ValidationError("at least one embedding is required")
    dims = {e.dim for e in embeddings}
    if len(dims) > 1:
        raise ValidationError(f"mixed embedding dimensions: {sorted(dims)}")
    return np.vstack([e.values for e in embeddings])


def squared_distances(x: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances of the rows of x.

    Exactly symmetric with an exactly zero diagonal, so kernels derived from
    it are valid Gram matrices regardless of summation order.
    """
    sq_norms = np.einsum("ij,ij->i", x, x)
    d2 = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (x @ x.T)
    d2 = np.triu(np.maximum(d2, 0.0), 1)
    return d2 + d2.T


def cross_squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances between rows of a and rows of b."""
    if a.shape[1] != b.shape[1]:
        raise ValidationError(f"row dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    d2 = (
        np.einsum("ij,ij->i", a, a)[:, None]
        + np.einsum("ij,ij->i", b, b)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.maximum(d2, 0.0)


def gram_matrix(embeddings: Sequence[SpectrumEmbedding], gamma: float) -> np.ndarray:
    """RBF Gram matrix over a set of embeddings; symmetric with unit diagonal."""
    if gamma <= 0.0:
        raise ValidationError("gamma must be positive")
    return np.exp(-gamma * squared_distances(embedding_matrix(embeddings)))


def choose_dimension(sizes: Sequence[int], cfg: EmbeddingConfig = EmbeddingConfig()) -> int:
    """Resolve the embedding dimension for a dataset of graph sizes.

    The percentile rule uses the nearest-rank statistic: the smallest size s
    such that at least p% of the graphs have at most s nodes.
    """
    if cfg.dim is not None:
        return cfg.dim
    sizes = list(sizes)
    if not sizes:
        raise ValidationError("cannot choose a dimension from an empty size list")
    ordered = sorted(sizes)
    rank = ceil(cfg.percentile / 100.0 * len(ordered))
    return int(ordered[rank - 1])


def embed_dataset(graphs: Sequence[Graph], d: int) -> list[SpectrumEmbedding]:
    """t-GLS embeddings for every graph at a common dimension d."""
    return [tgls(g, d) for g in graphs]


def write_embedding_csv(
    out: IO[str],
    ids: Iterable[int | None],
    labels: Iterable[int | None],
    embeddings: Sequence[SpectrumEmbedding],
) -> None:
    """Write `graph_id,label,e_1,...,e_d` rows with 12 significant digits."""
    x = embedding_matrix(embeddings)
    header = ["graph_id", "label"] + [f"e_{k + 1}" for k in range(x.shape[1])]
    out.write(",".join(header) + "\n")
    for gid, label, row in zip(ids, labels, x):
        cells = ["" if gid is None else str(gid), "" if label is None else str(label)]
        cells.extend(f"{v:.12g}" for v in row)
        out.write(",".join(cells) + "\n")
