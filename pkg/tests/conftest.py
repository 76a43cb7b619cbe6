"""Shared fixtures: TU-format fixture writers and the benchmark data root."""

from __future__ import annotations

import os
from pathlib import Path

import pytest

DATA_ENV_VAR = "LAPSPEC_DATA_DIR"


def write_tu_fixture(
    root: Path,
    name: str,
    graphs: list[tuple[int, list[tuple[int, int]]]],
    labels: list[int],
    both_directions: bool = True,
) -> Path:
    """Write a minimal TU-format dataset under root/name.

    ``graphs`` holds (node_count, edges-with-0-based-local-indices) pairs;
    global ids are assigned consecutively in graph order.
    """
    folder = root / name
    folder.mkdir(parents=True, exist_ok=True)
    indicator_lines: list[str] = []
    edge_lines: list[str] = []
    offset = 0
    for gid, (n, edges) in enumerate(graphs, start=1):
        indicator_lines.extend([str(gid)] * n)
        for i, j in edges:
            edge_lines.append(f"{offset + i + 1}, {offset + j + 1}")
            if both_directions:
                edge_lines.append(f"{offset + j + 1}, {offset + i + 1}")
        offset += n
    (folder / f"{name}_A.txt").write_text("\n".join(edge_lines) + "\n")
    (folder / f"{name}_graph_indicator.txt").write_text("\n".join(indicator_lines) + "\n")
    (folder / f"{name}_graph_labels.txt").write_text("\n".join(map(str, labels)) + "\n")
    return root


@pytest.fixture
def tiny_dataset_dir(tmp_path: Path) -> Path:
    """Two-graph dataset: a triangle (label 1) and a single edge (label 2)."""
    return write_tu_fixture(
        tmp_path,
        "TINY",
        graphs=[(3, [(0, 1), (1, 2), (0, 2)]), (2, [(0, 1)])],
        labels=[1, 2],
    )


@pytest.fixture(scope="session")
def data_dir() -> Path:
    """Root holding real TU benchmark datasets (not bundled with the repo)."""
    return Path(os.environ.get(DATA_ENV_VAR, Path(__file__).resolve().parent.parent / "data"))


def require_tu_dataset(data_dir: Path, name: str) -> None:
    """Skip the calling test when a benchmark dataset is not on disk."""
    marker = data_dir / name / f"{name}_A.txt"
    if not marker.is_file():
        pytest.skip(
            f"dataset {name} not found at {marker}. Fetch it manually: download "
            f"{name}.zip from the TU graph-benchmark collection "
            f"(https://www.chrsmrrs.com/graphkerneldatasets/{name}.zip), unzip it so "
            f"that {data_dir}/{name}/{name}_A.txt exists, or point {DATA_ENV_VAR} "
            f"at a directory laid out that way."
        )
