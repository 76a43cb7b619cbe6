"""Dataset loading (TU benchmark format), synthetic generators, and folds.

The TU layout stores one dataset under ``<dir>/<name>/`` as three text files:
``<name>_A.txt`` (comma-separated global node-id pairs, 1-based),
``<name>_graph_indicator.txt`` (graph id of each node, one per line), and
``<name>_graph_labels.txt`` (class id of each graph, one per line). Node and
edge attribute files are ignored. Parsed graphs are unweighted (weight 1.0).
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, IoError, ValidationError
from .graph import Graph, build_graph

logger = logging.getLogger(__name__)

_CORE_SUFFIXES = ("_A.txt", "_graph_indicator.txt", "_graph_labels.txt")


@dataclass(frozen=True)
class DatasetStats:
    """Summary statistics of a labeled graph collection."""

    graph_count: int
    class_proportions: dict[int, float]
    min_nodes: int
    avg_nodes: float
    max_nodes: int
    avg_edges: float

    @property
    def dominant_share(self) -> float:
        return max(self.class_proportions.values())


@dataclass(frozen=True)
class GraphDataset:
    """Labeled graphs with ids contiguous from 1 in file order."""

    name: str
    graphs: tuple[Graph, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if not self.graphs:
            raise ValidationError("a dataset must contain at least one graph")
        for pos, g in enumerate(self.graphs, start=1):
            if g.label is None:
                raise ValidationError(f"graph at position {pos} has no label")
            if g.id != pos:
                raise ValidationError(
                    f"graph ids must be contiguous from 1 in order; position {pos} has id {g.id}"
                )

    @property
    def class_set(self) -> tuple[int, ...]:
        return tuple(sorted({g.label for g in self.graphs}))

    @property
    def labels(self) -> np.ndarray:
        return np.array([g.label for g in self.graphs], dtype=np.intp)

    @property
    def sizes(self) -> list[int]:
        return [g.n for g in self.graphs]

    @property
    def stats(self) -> DatasetStats:
        sizes = np.array(self.sizes)
        labels = self.labels
        counts = {int(c): int((labels == c).sum()) for c in self.class_set}
        total = len(self.graphs)
        return DatasetStats(
            graph_count=total,
            class_proportions={c: k / total for c, k in counts.items()},
            min_nodes=int(sizes.min()),
            avg_nodes=float(sizes.mean()),
            max_nodes=int(sizes.max()),
            avg_edges=float(np.mean([g.edge_count for g in self.graphs])),
        )


def _read_int_column(path: Path, what: str) -> list[int]:
    values = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        token = line.strip()
        if not token:
            continue
        try:
            values.append(int(token))
        except ValueError:
            raise FormatError(f"{path.name}:{lineno}: non-integer {what} token {token!r}") from None
    return values


def _read_edge_pairs(path: Path) -> list[tuple[int, int]]:
    pairs = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split(",")
        if len(parts) != 2:
            raise FormatError(f"{path.name}:{lineno}: expected 'i, j', got {stripped!r}")
        try:
            pairs.append((int(parts[0].strip()), int(parts[1].strip())))
        except ValueError:
            raise FormatError(f"{path.name}:{lineno}: non-integer node id in {stripped!r}") from None
    return pairs


def load_tu_dataset(dir: str | Path, name: str) -> GraphDataset:
    """Parse a TU-format dataset from ``<dir>/<name>/``.

    Node ids are translated from 1-based global indices to 0-based per-graph
    indices; mirrored edge duplicates collapse to one undirected edge.
    """
    root = Path(dir) / name
    paths = {suffix: root / f"{name}{suffix}" for suffix in _CORE_SUFFIXES}
    for p in paths.values():
        if not p.is_file():
            raise IoError(f"missing dataset file: {p}")
    extras = sorted(
        p.name for p in root.glob(f"{name}_*.txt") if p not in set(paths.values())
    )
    if extras:
        logger.info("ignoring attribute files for %s: %s", name, ", ".join(extras))

    indicator = _read_int_column(paths["_graph_indicator.txt"], "graph indicator")
    labels = _read_int_column(paths["_graph_labels.txt"], "graph label")
    if not indicator:
        raise FormatError(f"{name}: empty graph indicator file")
    n_graphs = max(indicator)
    if sorted(set(indicator)) != list(range(1, n_graphs + 1)):
        raise FormatError(f"{name}: graph indicator ids are not contiguous from 1")
    if len(labels) != n_graphs:
        raise FormatError(
            f"{name}: {len(labels)} labels for {n_graphs} graphs (count mismatch between files)"
        )

    # Global 1-based node id -> (graph id, 0-based local index).
    n_nodes = len(indicator)
    node_graph = np.array(indicator, dtype=np.intp)
    local_index = np.zeros(n_nodes, dtype=np.intp)
    counters: dict[int, int] = {}
    for node, gid in enumerate(indicator):
        local_index[node] = counters.get(gid, 0)
        counters[gid] = local_index[node] + 1

    edges_by_graph: dict[int, list[tuple[int, int, float]]] = {g: [] for g in range(1, n_graphs + 1)}
    for u, v in _read_edge_pairs(paths["_A.txt"]):
        if not (1 <= u <= n_nodes and 1 <= v <= n_nodes):
            raise FormatError(f"{name}: edge ({u}, {v}) references an unknown node id")
        gu, gv = int(node_graph[u - 1]), int(node_graph[v - 1])
        if gu != gv:
            raise FormatError(f"{name}: edge ({u}, {v}) crosses graphs {gu} and {gv}")
        edges_by_graph[gu].append((int(local_index[u - 1]), int(local_index[v - 1]), 1.0))

    graphs = []
    for gid in range(1, n_graphs + 1):
        graphs.append(
            build_graph(
                counters[gid],
                edges_by_graph[gid],
                label=labels[gid - 1],
                id=gid,
            )
        )
    return GraphDataset(name=name, graphs=tuple(graphs))


def erdos_renyi(n: int, p: float, seed: int | np.random.Generator) -> Graph:
    """G(n, p) random graph: each pair independently an edge with probability p."""
    if n < 1:
        raise ValidationError("node count must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValidationError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.size) < p
    w = np.zeros((n, n))
    w[iu[mask], ju[mask]] = 1.0
    w[ju[mask], iu[mask]] = 1.0
    return Graph(w)


def stratified_folds(
    labels: np.ndarray | list[int], k: int, seed: int | np.random.Generator
) -> np.ndarray:
    """Assign each item a fold in 0..k-1, preserving class proportions.

    Every fold receives either floor(n_c/k) or ceil(n_c/k) items of class c;
    leftovers go to the currently least-loaded folds so overall fold sizes
    differ by at most the number of classes with leftovers (in practice 1).
    Classes with fewer than k members are balanced best-effort with a warning.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValidationError("fold count must be >= 2")
    if k > labels.size:
        raise ValidationError(f"cannot make {k} folds from {labels.size} items")
    rng = np.random.default_rng(seed)
    assignment = np.full(labels.size, -1, dtype=np.intp)
    load = np.zeros(k, dtype=np.intp)
    for cls in sorted(set(labels.tolist())):
        members = np.flatnonzero(labels == cls)
        if members.size < k:
            warnings.warn(
                f"class {cls} has {members.size} < {k} members; folds are balanced best-effort",
                stacklevel=2,
            )
        rng.shuffle(members)
        base, extra = divmod(members.size, k)
        pos = 0
        for fold in range(k):
            assignment[members[pos : pos + base]] = fold
            load[fold] += base
            pos += base
        # One leftover each to the least-loaded folds (ties -> lowest index).
        for fold in np.argsort(load, kind="stable")[:extra]:
            assignment[members[pos]] = fold
            load[fold] += 1
            pos += 1
    return assignment
