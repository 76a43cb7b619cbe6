"""Command-line front end.

Subcommands
-----------
embed             Write t-GLS embeddings of a dataset as CSV (or JSON).
perturb-sweep     Mean spectral distance vs. perturbation size for edge
                  addition, edge withdrawal, and node addition.
bounds            Monte-Carlo verification of the distance-bound chain.
classify          Nested cross-validation of the kernel SVC on a dataset.
truncation-sweep  Accuracy as a function of the embedding dimension, plus the
                  per-dimension distance contribution for a perturbed graph.

All commands are deterministic for a fixed ``--seed``; output files are
byte-identical across runs except for the ``generated_at`` timestamp in JSON
metadata. On failure the exit code is nonzero and a single line
``<ErrorClass>: <message>`` goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence, TextIO, TypeVar

import numpy as np

from .bounds import (
    random_bound_instance,
    verify_orthogonal_sandwich,
    verify_prop2_bound,
    verify_weyl_bound,
)
from .classify import MOLECULAR_C_GRID, MOLECULAR_GAMMA_GRID, nested_cv
from .datasets import GraphDataset, erdos_renyi, load_tu_dataset
from .embedding import (
    EmbeddingConfig,
    choose_dimension,
    embed_dataset,
    gls,
    gls_distance,
    tgls,
    write_embedding_csv,
)
from .errors import LapspecError, ValidationError
from .graph import Graph
from .perturb import add_random_nodes, apply_perturbation, random_edge_perturbation

T = TypeVar("T")
_CONNECTIVITIES = (0, 1, 2, 3)


@contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as handle:
            yield handle


def _fmt(value: float | int | str) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(out: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _parallel_map(fn: Callable[[int], T], count: int, threads: int) -> list[T]:
    if threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated numbers, got {text!r}") from None
    if not values:
        raise ValidationError(f"{flag} must list at least one value")
    return values


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated integers, got {text!r}") from None
    if not values:
        raise ValidationError(f"{flag} must list at least one value")
    return values


def _load_dataset(args: argparse.Namespace) -> GraphDataset:
    if not args.dataset_dir or not args.name:
        raise ValidationError("this command requires --dataset-dir and --name")
    return load_tu_dataset(args.dataset_dir, args.name)


def _embedding_config(args: argparse.Namespace) -> EmbeddingConfig:
    return EmbeddingConfig(dim=args.dim, percentile=args.percentile)


def _base_graph(args: argparse.Namespace, seed_tag: int) -> tuple[Graph, str]:
    """Sweep base graph: a dataset graph when requested, else Erdos-Renyi."""
    if args.dataset_dir and args.name:
        ds = _load_dataset(args)
        if args.graph_id is not None:
            if not 1 <= args.graph_id <= len(ds.graphs):
                raise ValidationError(
                    f"--graph-id {args.graph_id} outside 1..{len(ds.graphs)}"
                )
            g = ds.graphs[args.graph_id - 1]
        else:
            g = max(ds.graphs, key=lambda gr: gr.n)
        return g, f"{args.name}#{g.id}"
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, seed_tag]))
    return erdos_renyi(args.er_n, args.er_p, rng), f"ER({args.er_n},{args.er_p})"


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def cmd_embed(args: argparse.Namespace) -> int:
    ds = _load_dataset(args)
    dim = choose_dimension(ds.sizes, _embedding_config(args))
    embeddings = embed_dataset(ds.graphs, dim)
    ids = [g.id for g in ds.graphs]
    labels = [g.label for g in ds.graphs]
    with _open_out(args.out) as out:
        if args.format == "json":
            payload = [
                {"graph_id": gid, "label": label, "embedding": emb.values.tolist()}
                for gid, label, emb in zip(ids, labels, embeddings)
            ]
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            write_embedding_csv(out, ids, labels, embeddings)
    print(f"{ds.name}: embedded {len(embeddings)} graphs at dim {dim}", file=sys.stderr)
    return 0


def _edge_sweep_rows(
    base: Graph, series: str, k_values: Sequence[int], trials: int, seed: int, threads: int
) -> list[tuple[str, int, float, float]]:
    adding = series == "edge_add"
    base_emb = gls(base)

    def one_k(idx: int) -> tuple[str, int, float, float]:
        k = k_values[idx]
        dists = []
        for t in range(trials):
            rng = np.random.default_rng(
                np.random.SeedSequence([seed, 0 if adding else 1, k, t])
            )
            pert = random_edge_perturbation(base, k if adding else 0, 0 if adding else k, rng)
            dists.append(gls_distance(base_emb, gls(apply_perturbation(base, pert))))
        return series, k, float(np.mean(dists)), float(np.std(dists))

    return _parallel_map(one_k, len(k_values), threads)


def _node_sweep_rows(
    base: Graph, steps: int, trials: int, seed: int, threads: int
) -> list[tuple[str, int, float, float]]:
    d = base.n
    base_emb = tgls(base, d)

    def one_conn(ci: int) -> list[tuple[str, int, float, float]]:
        conn = _CONNECTIVITIES[ci]
        per_step = np.zeros((trials, steps))
        for t in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence([seed, 2, conn, t]))
            g = base
            for step in range(steps):
                g, _ = add_random_nodes(g, 1, conn, rng)
                per_step[t, step] = gls_distance(base_emb, tgls(g, d))
        rows = [(f"node_add_c{conn}", 0, 0.0, 0.0)]
        rows.extend(
            (f"node_add_c{conn}", s + 1, float(per_step[:, s].mean()), float(per_step[:, s].std()))
            for s in range(steps)
        )
        return rows

    blocks = _parallel_map(one_conn, len(_CONNECTIVITIES), threads)
    return [row for block in blocks for row in block]


def cmd_perturb_sweep(args: argparse.Namespace) -> int:
    base, base_desc = _base_graph(args, seed_tag=100)
    k_values = list(range(0, args.k_max + 1, args.k_step))
    rows: list[tuple[str, int, float, float]] = []
    for series in ("edge_add", "edge_remove"):
        rows.extend(
            _edge_sweep_rows(base, series, k_values, args.trials, args.seed, args.threads)
        )
    rows.extend(_node_sweep_rows(base, args.node_steps, args.trials, args.seed, args.threads))
    with _open_out(args.out) as out:
        if args.format == "json":
            payload = [
                {"series": s, "k": k, "mean": m, "std": sd} for s, k, m, sd in rows
            ]
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            _write_csv(out, ("series", "k", "mean", "std"), rows)
    print(
        f"perturb-sweep on {base_desc}: {len(rows)} rows, {args.trials} trials per point",
        file=sys.stderr,
    )
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    def one_instance(i: int) -> dict:
        g1, pert = random_bound_instance(
            args.max_n, np.random.SeedSequence([args.seed, i])
        )
        weyl = verify_weyl_bound(g1, pert)
        prop2 = verify_prop2_bound(g1, pert)
        sandwich = verify_orthogonal_sandwich(g1, pert)
        merged = sandwich.to_json_dict()
        merged["prop2_rhs"] = prop2.prop2_rhs
        merged["flags"] = {**weyl.flags, **prop2.flags, **sandwich.flags}
        return merged

    reports = _parallel_map(one_instance, args.trials, args.threads)
    with _open_out(args.out) as out:
        json.dump(reports, out, indent=2)
        out.write("\n")
    counts = {
        "weyl_bound": 0,
        "cospectrality_bound": 0,
        "orthogonal_equality": 0,
    }
    for r in reports:
        for key in counts:
            counts[key] += 0 if r["flags"][key] else 1
    print(
        f"{len(reports)} instances (n<={args.max_n}): "
        f"{counts['weyl_bound']} weyl violations, "
        f"{counts['cospectrality_bound']} cospectrality violations, "
        f"{counts['orthogonal_equality']} orthogonal-equality failures",
        file=sys.stderr,
    )
    return 0


def _run_classify(args: argparse.Namespace, ds: GraphDataset, cfg: EmbeddingConfig):
    return nested_cv(
        ds,
        cfg,
        c_grid=_parse_float_list(args.c_grid, "--c-grid"),
        gamma_grid=_parse_float_list(args.gamma_grid, "--gamma-grid"),
        k_outer=args.folds,
        k_inner=args.inner_folds,
        seed=args.seed,
    )


def cmd_classify(args: argparse.Namespace) -> int:
    ds = _load_dataset(args)
    result = _run_classify(args, ds, _embedding_config(args))
    with _open_out(args.out) as out:
        if args.format == "csv":
            rows = [
                (fold, acc, c, gamma)
                for fold, (acc, (c, gamma)) in enumerate(
                    zip(result.per_fold_accuracy, result.chosen_hyperparams)
                )
            ]
            _write_csv(out, ("fold", "accuracy", "chosen_c", "chosen_gamma"), rows)
        else:
            payload = result.to_json_dict(ds.name)
            payload["generated_at"] = _timestamp()
            json.dump(payload, out, indent=2)
            out.write("\n")
    print(
        f"{ds.name}: mean accuracy {result.mean:.4f} +/- {result.std:.4f} "
        f"(dim {result.dim}, {len(result.per_fold_accuracy)} folds)",
        file=sys.stderr,
    )
    return 0


def cmd_truncation_sweep(args: argparse.Namespace) -> int:
    ds = _load_dataset(args)
    if args.dims:
        dims = _parse_int_list(args.dims, "--dims")
    else:
        dims = sorted({choose_dimension(ds.sizes, EmbeddingConfig()), max(ds.sizes)})
    rows: list[tuple[str, int, float, float]] = []
    for d in dims:
        result = _run_classify(args, ds, EmbeddingConfig(dim=d))
        rows.append(("accuracy", d, result.mean, result.std))
        print(
            f"{ds.name} d={d}: mean accuracy {result.mean:.4f} +/- {result.std:.4f}",
            file=sys.stderr,
        )

    # Per-dimension distance contribution for a grown copy of the base graph.
    base, base_desc = _base_graph(args, seed_tag=200)
    d_values = list(range(1, args.max_dim_distance + 1))
    for conn in _CONNECTIVITIES:
        per_d = np.zeros((args.trials, len(d_values)))
        for t in range(args.trials):
            rng = np.random.default_rng(np.random.SeedSequence([args.seed, 3, conn, t]))
            grown, _ = add_random_nodes(base, args.node_steps, conn, rng)
            for di, d in enumerate(d_values):
                per_d[t, di] = gls_distance(tgls(base, d), tgls(grown, d)) / d
        rows.extend(
            (f"distance_per_dim_c{conn}", d, float(per_d[:, di].mean()), float(per_d[:, di].std()))
            for di, d in enumerate(d_values)
        )
    with _open_out(args.out) as out:
        if args.format == "json":
            payload = [
                {"series": s, "d": d, "mean": m, "std": sd} for s, d, m, sd in rows
            ]
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            _write_csv(out, ("series", "d", "mean", "std"), rows)
    print(f"truncation-sweep: {len(dims)} dims, distance series on {base_desc}", file=sys.stderr)
    return 0


def _add_dataset_flags(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--dataset-dir", type=Path, required=required,
                   help="directory containing <name>/<name>_*.txt TU-format files")
    p.add_argument("--name", required=required, help="dataset name")


def _add_dim_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--dim", type=int, help="explicit embedding dimension")
    group.add_argument("--percentile", type=float,
                       help="size percentile used to pick the dimension (default 95)")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c-grid", default=",".join(map(str, MOLECULAR_C_GRID)),
                   help="comma-separated C values")
    p.add_argument("--gamma-grid", default=",".join(map(str, MOLECULAR_GAMMA_GRID)),
                   help="comma-separated gamma values")
    p.add_argument("--folds", type=int, default=10, help="outer folds")
    p.add_argument("--inner-folds", type=int, default=5, help="inner folds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapspec",
        description="Laplacian-spectrum graph embeddings, distance bounds, and classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--threads", type=int, default=1, help="max worker threads")

    p = sub.add_parser("embed", help="write t-GLS embeddings of a dataset")
    _add_dataset_flags(p, required=True)
    _add_dim_flags(p)
    common(p, "csv")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("perturb-sweep", help="distance vs. perturbation size sweeps")
    _add_dataset_flags(p, required=False)
    p.add_argument("--graph-id", type=int, help="1-based dataset graph id as sweep base")
    p.add_argument("--er-n", type=int, default=80, help="synthetic base: node count")
    p.add_argument("--er-p", type=float, default=0.05, help="synthetic base: edge probability")
    p.add_argument("--trials", type=int, default=30, help="seeds per sweep point")
    p.add_argument("--k-max", type=int, default=100, help="largest edge-flip count")
    p.add_argument("--k-step", type=int, default=1, help="edge-flip step size")
    p.add_argument("--node-steps", type=int, default=20, help="nodes added in node sweeps")
    common(p, "csv")
    p.set_defaults(func=cmd_perturb_sweep)

    p = sub.add_parser("bounds", help="Monte-Carlo verification of the bound chain")
    p.add_argument("--trials", type=int, default=500, help="number of random instances")
    p.add_argument("--max-n", type=int, default=20, help="largest instance size")
    common(p, "json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("classify", help="nested cross-validation on a dataset")
    _add_dataset_flags(p, required=True)
    _add_dim_flags(p)
    _add_grid_flags(p)
    common(p, "json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("truncation-sweep", help="accuracy and distance vs. dimension")
    _add_dataset_flags(p, required=True)
    p.add_argument("--dims", help="comma-separated dimensions (default: p95 and max size)")
    p.add_argument("--graph-id", type=int, help="1-based graph id for the distance series")
    p.add_argument("--er-n", type=int, default=80, help="(unused with a dataset base)")
    p.add_argument("--er-p", type=float, default=0.05, help="(unused with a dataset base)")
    p.add_argument("--trials", type=int, default=10, help="seeds for the distance series")
    p.add_argument("--node-steps", type=int, default=20, help="nodes added for the distance series")
    p.add_argument("--max-dim-distance", type=int, default=15,
                   help="largest d in the per-dimension distance series")
    _add_grid_flags(p)
    common(p, "csv")
    p.set_defaults(func=cmd_truncation_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LapspecError as err:
        message = " ".join(str(err).split())
        print(f"{type(err).__name__}: {message}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"IoError: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
