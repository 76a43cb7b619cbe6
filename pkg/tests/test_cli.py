"""End-to-end CLI behaviour: outputs, formats, determinism, error paths."""

import json
import subprocess
import sys

import pytest

from lapspec.cli import main
from tests.conftest import write_tu_fixture

P5_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4)]
K5_EDGES = [(i, j) for i in range(5) for j in range(i + 1, 5)]


@pytest.fixture()
def separable_dataset_dir(tmp_path):
    """Six path graphs (label 1) and six complete graphs (label 2)."""
    write_tu_fixture(
        tmp_path,
        "SEP",
        [(5, P5_EDGES)] * 6 + [(5, K5_EDGES)] * 6,
        [1] * 6 + [2] * 6,
    )
    return tmp_path


CLASSIFY_ARGS = [
    "--c-grid", "1.0",
    "--gamma-grid", "0.1",
    "--folds", "2",
    "--inner-folds", "2",
]


def test_embed_csv_stdout(tiny_dataset_dir, capsys):
    rc = main(["embed", "--dataset-dir", str(tiny_dataset_dir), "--name", "TINY"])
    assert rc == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "graph_id,label,e_1,e_2,e_3"
    assert lines[1] == "1,1,3,3,0"
    assert lines[2] == "2,2,2,0,0"
    assert "TINY: embedded 2 graphs at dim 3" in captured.err


def test_embed_json_file(tiny_dataset_dir, tmp_path):
    out = tmp_path / "emb.json"
    rc = main(
        [
            "embed",
            "--dataset-dir", str(tiny_dataset_dir),
            "--name", "TINY",
            "--dim", "2",
            "--format", "json",
            "--out", str(out),
        ]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload == [
        {"graph_id": 1, "label": 1, "embedding": [3.0, 3.0]},
        {"graph_id": 2, "label": 2, "embedding": [2.0, 0.0]},
    ]


def test_embed_missing_dataset(tmp_path, capsys):
    rc = main(["embed", "--dataset-dir", str(tmp_path), "--name", "NOPE"])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("IoError: missing dataset file:")
    assert err.count("\n") == 1


def test_embed_rejects_dim_and_percentile(tiny_dataset_dir):
    with pytest.raises(SystemExit):
        main(
            [
                "embed",
                "--dataset-dir", str(tiny_dataset_dir),
                "--name", "TINY",
                "--dim", "2",
                "--percentile", "95",
            ]
        )


def test_missing_required_flags_exit_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["embed"])
    assert excinfo.value.code == 2


def test_bounds_json_and_thread_determinism(tmp_path, capsys):
    out1, out2 = tmp_path / "b1.json", tmp_path / "b2.json"
    base = ["bounds", "--trials", "5", "--max-n", "8", "--seed", "3"]
    assert main(base + ["--out", str(out1)]) == 0
    summary = capsys.readouterr().err
    assert (
        "5 instances (n<=8): 0 weyl violations, 0 cospectrality violations, "
        "0 orthogonal-equality failures" in summary
    )
    assert main(base + ["--out", str(out2), "--threads", "4"]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    reports = json.loads(out1.read_text())
    assert len(reports) == 5
    for report in reports:
        assert set(report) == {
            "spectral_distance",
            "perturbation_norm",
            "dgi_frobenius",
            "orthogonal_achieved",
            "prop2_rhs",
            "flags",
        }
        assert report["flags"] == {
            "weyl_bound": True,
            "cospectrality_bound": True,
            "orthogonal_equality": True,
            "sandwich": True,
        }
        assert report["spectral_distance"] <= report["perturbation_norm"] + 1e-8
        assert report["perturbation_norm"] <= report["prop2_rhs"] + 1e-8


def test_perturb_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(
        [
            "perturb-sweep",
            "--er-n", "12",
            "--er-p", "0.3",
            "--k-max", "4",
            "--k-step", "2",
            "--trials", "3",
            "--node-steps", "2",
            "--seed", "1",
            "--out", str(out),
        ]
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "series,k,mean,std"
    rows = [line.split(",") for line in lines[1:]]
    # 3 k-points per edge series + (1 + 2 steps) per connectivity
    assert len(rows) == 3 + 3 + 4 * 3
    by_series = {}
    for series, k, mean, std in rows:
        by_series.setdefault(series, []).append((int(k), mean, std))
    assert [k for k, _, _ in by_series["edge_add"]] == [0, 2, 4]
    assert by_series["edge_add"][0][1:] == ("0", "0")  # k=0 -> distance 0
    assert [k for k, _, _ in by_series["node_add_c2"]] == [0, 1, 2]
    # isolated-node additions never change the truncated spectrum
    for k, mean, std in by_series["node_add_c0"]:
        assert (mean, std) == ("0", "0")
    # distances grow with k when edges are added
    add_means = [float(m) for _, m, _ in by_series["edge_add"]]
    assert add_means[0] < add_means[1] < add_means[2]


def test_perturb_sweep_json_format(tmp_path):
    out = tmp_path / "sweep.json"
    rc = main(
        [
            "perturb-sweep",
            "--er-n", "10",
            "--er-p", "0.3",
            "--k-max", "2",
            "--k-step", "2",
            "--trials", "2",
            "--node-steps", "1",
            "--format", "json",
            "--out", str(out),
        ]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert {"series", "k", "mean", "std"} == set(payload[0])


def test_perturb_sweep_dataset_base_and_bad_graph_id(tiny_dataset_dir, tmp_path, capsys):
    rc = main(
        [
            "perturb-sweep",
            "--dataset-dir", str(tiny_dataset_dir),
            "--name", "TINY",
            "--graph-id", "9",
            "--out", str(tmp_path / "x.csv"),
        ]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith("ValidationError: --graph-id 9 outside 1..2")


def test_classify_json(separable_dataset_dir, tmp_path, capsys):
    out = tmp_path / "result.json"
    rc = main(
        [
            "classify",
            "--dataset-dir", str(separable_dataset_dir),
            "--name", "SEP",
            "--seed", "5",
            "--out", str(out),
            *CLASSIFY_ARGS,
        ]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert set(payload) == {
        "dataset", "dim", "folds", "mean", "std",
        "per_fold_hyperparams", "seed", "generated_at",
    }
    assert payload["dataset"] == "SEP"
    assert payload["dim"] == 5
    assert payload["seed"] == 5
    assert payload["mean"] == 1.0
    assert payload["std"] == 0.0
    assert payload["folds"] == [1.0, 1.0]
    assert payload["per_fold_hyperparams"] == [[1.0, 0.1], [1.0, 0.1]]
    assert "mean accuracy 1.0000" in capsys.readouterr().err


def test_classify_deterministic_modulo_timestamp(separable_dataset_dir, tmp_path):
    args = [
        "classify",
        "--dataset-dir", str(separable_dataset_dir),
        "--name", "SEP",
        *CLASSIFY_ARGS,
    ]
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    p1, p2 = json.loads(out1.read_text()), json.loads(out2.read_text())
    p1.pop("generated_at"), p2.pop("generated_at")
    assert p1 == p2


def test_classify_csv_format(separable_dataset_dir, tmp_path):
    out = tmp_path / "result.csv"
    rc = main(
        [
            "classify",
            "--dataset-dir", str(separable_dataset_dir),
            "--name", "SEP",
            "--format", "csv",
            "--out", str(out),
            *CLASSIFY_ARGS,
        ]
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "fold,accuracy,chosen_c,chosen_gamma"
    assert lines[1] == "0,1,1,0.1"
    assert lines[2] == "1,1,1,0.1"


def test_classify_bad_grid(separable_dataset_dir, capsys):
    rc = main(
        [
            "classify",
            "--dataset-dir", str(separable_dataset_dir),
            "--name", "SEP",
            "--c-grid", "a,b",
        ]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith(
        "ValidationError: --c-grid expects comma-separated numbers"
    )


def test_truncation_sweep(separable_dataset_dir, tmp_path):
    out = tmp_path / "trunc.csv"
    rc = main(
        [
            "truncation-sweep",
            "--dataset-dir", str(separable_dataset_dir),
            "--name", "SEP",
            "--dims", "2,3",
            "--trials", "2",
            "--node-steps", "2",
            "--max-dim-distance", "4",
            "--out", str(out),
            *CLASSIFY_ARGS,
        ]
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "series,d,mean,std"
    rows = [line.split(",") for line in lines[1:]]
    accuracy_rows = [r for r in rows if r[0] == "accuracy"]
    assert [int(r[1]) for r in accuracy_rows] == [2, 3]
    for conn in (0, 1, 2, 3):
        series = [r for r in rows if r[0] == f"distance_per_dim_c{conn}"]
        assert [int(r[1]) for r in series] == [1, 2, 3, 4]
    # connectivity-0 growth is invisible to the truncated spectrum
    assert all(r[2] == "0" for r in rows if r[0] == "distance_per_dim_c0")


def test_console_entry_point(tiny_dataset_dir):
    proc = subprocess.run(
        [
            sys.executable, "-m", "lapspec.cli",
            "embed", "--dataset-dir", str(tiny_dataset_dir), "--name", "TINY",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "graph_id,label,e_1,e_2,e_3"
