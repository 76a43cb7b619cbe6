"""Edge/node perturbations, their Laplacians, and the decomposition identity."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from lapspec import (
    CapacityError,
    Permutation,
    Perturbation,
    ValidationError,
    add_random_nodes,
    apply_perturbation,
    build_graph,
    erdos_renyi,
    gls,
    gls_distance,
    laplacian,
    pad_isolated,
    permute_graph,
    perturbation_laplacian,
    random_edge_perturbation,
    tgls,
)

K2 = build_graph(2, [(0, 1, 1.0)])
P3 = build_graph(3, [(0, 1, 1.0), (1, 2, 1.0)])


def delta_with(n: int, entries: list[tuple[int, int, float]]) -> np.ndarray:
    d = np.zeros((n, n))
    for i, j, v in entries:
        d[i, j] = d[j, i] = v
    return d


def test_perturbation_validation():
    with pytest.raises(ValidationError):
        Perturbation(np.array([[0.0, 1.0], [0.5, 0.0]]), Permutation.identity(2))
    with pytest.raises(ValidationError):
        Perturbation(np.array([[1.0, 0.0], [0.0, 0.0]]), Permutation.identity(2))
    with pytest.raises(ValidationError):
        Perturbation(np.zeros((2, 2)), Permutation.identity(3))


def test_apply_zero_perturbation():
    pert = Perturbation(np.zeros((2, 2)), Permutation.identity(2))
    assert_array_equal(apply_perturbation(K2, pert).weights, K2.weights)


def test_apply_adds_edge_to_padded():
    pert = Perturbation(delta_with(3, [(1, 2, 1.0)]), Permutation.identity(3))
    assert_array_equal(apply_perturbation(K2, pert).weights, P3.weights)


def test_apply_removes_edge():
    pert = Perturbation(delta_with(3, [(0, 1, -1.0)]), Permutation.identity(3))
    result = apply_perturbation(P3, pert)
    assert list(result.edges()) == [(1, 2, 1.0)]


def test_apply_rejects_out_of_range_result():
    # adding to an existing unit edge would exceed weight 1
    pert = Perturbation(delta_with(2, [(0, 1, 1.0)]), Permutation.identity(2))
    with pytest.raises(ValidationError):
        apply_perturbation(K2, pert)
    # removing a non-existent edge would go below 0
    pert = Perturbation(delta_with(3, [(0, 2, -1.0)]), Permutation.identity(3))
    with pytest.raises(ValidationError):
        apply_perturbation(P3, pert)


def test_apply_rejects_too_small_size():
    with pytest.raises(ValidationError):
        apply_perturbation(P3, Perturbation(np.zeros((2, 2)), Permutation.identity(2)))


def test_apply_alignment_matches_matrix_product():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n1 = int(rng.integers(1, 7))
        pad = int(rng.integers(0, 3))
        n = n1 + pad
        g = erdos_renyi(n1, 0.5, rng)
        wbar = pad_isolated(g, pad).weights
        # random valid delta: flip a few entries of the padded adjacency
        delta = np.zeros((n, n))
        iu, ju = np.triu_indices(n, k=1)
        for k in rng.choice(iu.size, size=min(3, iu.size), replace=False):
            i, j = iu[k], ju[k]
            delta[i, j] = delta[j, i] = 1.0 - 2.0 * wbar[i, j]
        alignment = Permutation(rng.permutation(n))
        result = apply_perturbation(g, Perturbation(delta, alignment))
        m = alignment.matrix()
        assert_allclose(result.weights, m.T @ (wbar + delta) @ m, atol=1e-14)


def test_perturbation_laplacian_zero():
    pert = Perturbation(np.zeros((3, 3)), Permutation.identity(3))
    assert_array_equal(perturbation_laplacian(pert), np.zeros((3, 3)))


def test_perturbation_laplacian_single_flip():
    added = Perturbation(delta_with(2, [(0, 1, 1.0)]), Permutation.identity(2))
    assert_array_equal(perturbation_laplacian(added), [[1.0, -1.0], [-1.0, 1.0]])
    assert np.linalg.norm(perturbation_laplacian(added)) == 2.0
    removed = Perturbation(delta_with(2, [(0, 1, -1.0)]), Permutation.identity(2))
    assert_array_equal(perturbation_laplacian(removed), [[-1.0, 1.0], [1.0, -1.0]])
    assert np.linalg.norm(perturbation_laplacian(removed)) == 2.0


def test_perturbation_laplacian_rows_sum_to_zero():
    rng = np.random.default_rng(1)
    g = erdos_renyi(12, 0.4, rng)
    pert = random_edge_perturbation(g, 5, 5, rng)
    assert np.abs(perturbation_laplacian(pert).sum(axis=1)).max() <= 1e-12


def test_disjoint_flips_frobenius_norm():
    """k flips touching disjoint node pairs give ||L_P||_F = 2 sqrt(k)."""
    for k in (1, 2, 3, 4):
        entries = [(2 * i, 2 * i + 1, 1.0 if i % 2 == 0 else -1.0) for i in range(k)]
        pert = Perturbation(delta_with(2 * k, entries), Permutation.identity(2 * k))
        assert_allclose(np.linalg.norm(perturbation_laplacian(pert)), 2.0 * np.sqrt(k), rtol=1e-12)


def test_random_edge_perturbation_zero_counts():
    pert = random_edge_perturbation(P3, 0, 0, 0)
    assert_array_equal(pert.delta, np.zeros((3, 3)))


def test_random_edge_perturbation_fills_empty_graph():
    pert = random_edge_perturbation(build_graph(4, []), 6, 0, 0)
    k4 = np.ones((4, 4)) - np.eye(4)
    assert_array_equal(pert.delta, k4)


def test_random_edge_perturbation_counts_and_supports():
    rng = np.random.default_rng(2)
    g = erdos_renyi(20, 0.3, rng)
    pert = random_edge_perturbation(g, 7, 4, 123)
    upper = np.triu(pert.delta, 1)
    assert (upper == 1.0).sum() == 7
    assert (upper == -1.0).sum() == 4
    assert np.all(np.isin(pert.delta, (-1.0, 0.0, 1.0)))
    adds = upper == 1.0
    removes = upper == -1.0
    assert np.all(g.weights[adds] == 0.0)
    assert np.all(g.weights[removes] == 1.0)


def test_random_edge_perturbation_capacity():
    with pytest.raises(CapacityError):
        random_edge_perturbation(K2, 1, 0, 0)  # no non-adjacent pair left
    with pytest.raises(CapacityError):
        random_edge_perturbation(K2, 0, 2, 0)  # only one edge exists


def test_random_edge_perturbation_reproducible():
    g = erdos_renyi(15, 0.3, 5)
    a = random_edge_perturbation(g, 4, 3, 99)
    b = random_edge_perturbation(g, 4, 3, 99)
    assert_array_equal(a.delta, b.delta)


def test_edge_addition_moves_spectrum():
    g = erdos_renyi(80, 0.05, 0)
    pert = random_edge_perturbation(g, 10, 0, 1)
    assert gls_distance(gls(g), gls(apply_perturbation(g, pert))) > 0.0


def test_add_random_nodes_isolated():
    g = erdos_renyi(6, 0.5, 3)
    grown, pert = add_random_nodes(g, 5, 0, 0)
    assert_array_equal(grown.weights, pad_isolated(g, 5).weights)
    assert_array_equal(pert.delta, np.zeros((11, 11)))


def test_add_random_nodes_full_connectivity():
    g = erdos_renyi(5, 0.5, 4)
    grown, _ = add_random_nodes(g, 1, 5, 0)
    assert_array_equal(grown.weights[5, :5], np.ones(5))


def test_add_random_nodes_capacity():
    with pytest.raises(CapacityError):
        add_random_nodes(K2, 1, 3, 0)


def test_add_random_nodes_reproducible():
    g = erdos_renyi(10, 0.3, 6)
    a, pa = add_random_nodes(g, 4, 2, 42)
    b, pb = add_random_nodes(g, 4, 2, 42)
    assert_array_equal(a.weights, b.weights)
    assert_array_equal(pa.delta, pb.delta)


def test_add_random_nodes_edge_counts():
    g = erdos_renyi(10, 0.3, 7)
    grown, pert = add_random_nodes(g, 6, 3, 1)
    assert grown.n == 16
    assert grown.edge_count == g.edge_count + 6 * 3
    assert (np.triu(pert.delta, 1) == 1.0).sum() == 18


def test_decomposition_identity():
    """L2 equals alignment^T (Lbar1 + L_P) alignment on generated instances."""
    rng = np.random.default_rng(8)
    for _ in range(25):
        g = erdos_renyi(int(rng.integers(2, 12)), 0.4, rng)
        free_pairs = g.n * (g.n - 1) // 2 - g.edge_count
        pert = random_edge_perturbation(g, min(int(rng.integers(0, 3)), free_pairs), 0, rng)
        # degrade to a random alignment to exercise the permutation path
        pert = Perturbation(pert.delta, Permutation(rng.permutation(pert.n)))
        g2 = apply_perturbation(g, pert)
        m = pert.alignment.matrix()
        lhs = laplacian(g2)
        rhs = m.T @ (laplacian(g) + perturbation_laplacian(pert)) @ m
        assert_allclose(lhs, rhs, atol=1e-12)


def test_node_addition_connectivity_ordering():
    """More connections per added node move the truncated spectrum further."""
    base = erdos_renyi(28, 0.15, 11)
    d = base.n
    base_emb = tgls(base, d)
    means = {}
    for conn in (1, 3):
        dists = []
        for t in range(50):
            rng = np.random.default_rng(np.random.SeedSequence([5, conn, t]))
            grown, _ = add_random_nodes(base, 20, conn, rng)
            dists.append(gls_distance(base_emb, tgls(grown, d)))
        means[conn] = float(np.mean(dists))
    assert means[3] > means[1]


def test_permutation_only_perturbation_is_isospectral():
    rng = np.random.default_rng(9)
    g = erdos_renyi(8, 0.5, rng)
    pert = Perturbation(np.zeros((8, 8)), Permutation(rng.permutation(8)))
    g2 = apply_perturbation(g, pert)
    assert_array_equal(g2.weights, permute_graph(g, pert.alignment).weights)
    assert gls_distance(gls(g), gls(g2)) <= 1e-9
