"""Edge/node perturbations and their Laplacians.

A perturbed graph is modeled as ``alignment^T (padded_weights + delta) alignment``:
``delta`` is a signed symmetric edge-perturbation matrix and ``alignment`` the
node relabeling between the (padded) source and the target. Generators return
the ground-truth pair alongside the perturbed graph so distance bounds can be
checked against a known decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .graph import Graph, Permutation, pad_isolated, permute_graph


@dataclass(frozen=True)
class Perturbation:
    """Signed edge perturbation ``delta`` plus the node ``alignment``.

    ``delta`` is symmetric with zero diagonal; entries may be negative (edge
    removal). Validity against a concrete source graph (padded weights plus
    delta staying inside [0, 1]) is checked by :func:`apply_perturbation`.
    """

    delta: np.ndarray
    alignment: Permutation

    def __post_init__(self) -> None:
        d = np.array(self.delta, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError(f"delta must be square, got shape {d.shape}")
        if not np.isfinite(d).all():
            raise ValidationError("delta contains non-finite entries")
        if not np.array_equal(d, d.T):
            raise ValidationError("delta must be symmetric")
        if d.size and np.any(np.diagonal(d) != 0.0):
            raise ValidationError("delta must have zero diagonal")
        if self.alignment.n != d.shape[0]:
            raise ValidationError(
                f"alignment size {self.alignment.n} does not match delta size {d.shape[0]}"
            )
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)

    @property
    def n(self) -> int:
        return self.delta.shape[0]


def apply_perturbation(g: Graph, pert: Perturbation) -> Graph:
    """Pad ``g`` to ``pert.n`` nodes, add ``delta``, then relabel by ``alignment``.

    The result satisfies
    ``result.weights[alignment(i), alignment(j)] == padded[i, j] + delta[i, j]``.
    """
    if pert.n < g.n:
        raise ValidationError(f"perturbation size {pert.n} smaller than graph size {g.n}")
    padded = pad_isolated(g, pert.n - g.n)
    perturbed = padded.weights + pert.delta
    if perturbed.size and (perturbed.min() < 0.0 or perturbed.max() > 1.0):
        raise ValidationError("perturbed weights leave [0, 1]; delta is invalid for this graph")
    return permute_graph(Graph(perturbed), pert.alignment)


def perturbation_laplacian(pert: Perturbation) -> np.ndarray:
    """Laplacian of the perturbation: diag(delta 1) - delta.

    Unlike a graph Laplacian this matrix can be indefinite (removing edges
    yields negative diagonal entries); its rows still sum to zero.
    """
    return np.diag(pert.delta.sum(axis=1)) - pert.delta


def random_edge_perturbation(
    g: Graph,
    k_add: int,
    k_remove: int,
    seed: int | np.random.Generator,
) -> Perturbation:
    """Flip edges uniformly at random: ``k_add`` new unit edges on non-adjacent
    pairs and ``k_remove`` deletions among existing unit-weight edges.

    Alignment is the identity. Deterministic for a fixed seed.
    """
    if k_add < 0 or k_remove < 0:
        raise ValidationError("edge-flip counts must be nonnegative")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(g.n, k=1)
    upper = g.weights[iu, ju]
    non_edges = np.flatnonzero(upper == 0.0)
    unit_edges = np.flatnonzero(upper == 1.0)
    if k_add > non_edges.size:
        raise CapacityError(
            f"cannot add {k_add} edges: only {non_edges.size} non-adjacent pairs"
        )
    if k_remove > unit_edges.size:
        raise CapacityError(
            f"cannot remove {k_remove} edges: only {unit_edges.size} unit-weight edges"
        )
    delta = np.zeros((g.n, g.n))
    chosen_add = rng.choice(non_edges, size=k_add, replace=False)
    chosen_remove = rng.choice(unit_edges, size=k_remove, replace=False)
    for sel, sign in ((chosen_add, 1.0), (chosen_remove, -1.0)):
        delta[iu[sel], ju[sel]] = sign
        delta[ju[sel], iu[sel]] = sign
    return Perturbation(delta, Permutation.identity(g.n))


def add_random_nodes(
    g: Graph,
    count: int,
    connectivity: int,
    seed: int | np.random.Generator,
) -> tuple[Graph, Perturbation]:
    """Append ``count`` nodes, wiring each to ``connectivity`` distinct nodes
    sampled uniformly among all nodes present at that step.

    Returns the grown graph together with the equivalent Perturbation against
    ``pad_isolated(g, count)`` (identity alignment). Deterministic for a fixed
    seed.
    """
    if count < 0:
        raise ValidationError("node count to add must be nonnegative")
    if connectivity < 0:
        raise ValidationError("connectivity must be nonnegative")
    if count > 0 and connectivity > g.n:
        raise CapacityError(
            f"connectivity {connectivity} exceeds available nodes ({g.n}) at the first step"
        )
    rng = np.random.default_rng(seed)
    total = g.n + count
    delta = np.zeros((total, total))
    for t in range(count):
        new = g.n + t
        targets = rng.choice(new, size=connectivity, replace=False)
        delta[new, targets] = 1.0
        delta[targets, new] = 1.0
    pert = Perturbation(delta, Permutation.identity(total))
    return apply_perturbation(g, pert), pert
