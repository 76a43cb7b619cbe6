"""Eigenvalue computation for real symmetric matrices.

Two paths: a dense full-spectrum solver, and an iterative Krylov path for the
top-d Laplacian eigenvalues that only touches the sparse edge structure. The
iterative path falls back to the dense one for small matrices (n <= 128,
where dense is cheaper) and whenever the Krylov solver cannot be applied or
fails to converge, so its results always agree with the dense solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackError, eigsh

from .errors import NumericalError, ValidationError
from .graph import Graph, laplacian, laplacian_sparse

_DENSE_CUTOFF = 128


def _checked(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise NumericalError("matrix contains non-finite entries")
    if not np.array_equal(m, m.T):
        raise ValidationError("matrix must be symmetric")
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the aligned orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def eigvalsh_full(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    m = _checked(m)
    if m.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(m)


def eigh_full(m: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition with a deterministic sign convention.

    Each eigenvector is flipped so its largest-magnitude component is
    positive, making repeated runs byte-identical. All downstream bound
    formulas are invariant to this choice.
    """
    m = _checked(m)
    if m.shape[0] == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    values, vectors = np.linalg.eigh(m)
    anchor = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[anchor, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return EigenDecomposition(values, vectors * signs)


def eigvals_topk(g: Graph, d: int) -> np.ndarray:
    """The d largest Laplacian eigenvalues of ``g``, descending."""
    if not 1 <= d <= g.n:
        raise ValidationError(f"d={d} out of range 1..{g.n}")
    n = g.n
    if n <= _DENSE_CUTOFF or d >= n - 1:
        return eigvalsh_full(laplacian(g))[n - d :][::-1].copy()
    lap = laplacian_sparse(g)
    if lap.nnz == 0:
        return np.zeros(d)
    # Deterministic start vector; a fixed random direction avoids the
    # all-ones vector, which is the Laplacian null vector.
    v0 = np.random.default_rng(7).standard_normal(n)
    try:
        vals = eigsh(
            lap,
            k=d,
            which="LA",
            ncv=min(n, max(2 * d + 16, 20)),
            v0=v0,
            maxiter=max(10 * n, 1000),
            return_eigenvectors=False,
        )
    except ArpackError:
        return eigvalsh_full(laplacian(g))[n - d :][::-1].copy()
    vals = np.sort(vals)
    return vals[::-1].copy()
