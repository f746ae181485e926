import math
from fractions import Fraction

import numpy as np
import pytest

from kmachine.graphs import Graph, generate, random_uniform_hypergraph
from kmachine.oracles import (
    OracleError,
    all_pairs_distances,
    bfs_distances,
    brute_densest,
    densest_via_flow,
    exact_pagerank,
    is_connected,
    is_spanning_tree,
    kruskal_mst,
    minimum_spanning_forest,
    prim_mst,
    single_source_distances,
    triangle_exists,
    validate_mis,
)


def test_kruskal_examples():
    g = Graph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    w, edges = kruskal_mst(g)
    assert w == 3 and edges == {(0, 1), (1, 2)}
    g2 = Graph(3, [(0, 1, 5), (1, 2, 7)])
    assert kruskal_mst(g2)[0] == 12
    with pytest.raises(OracleError):
        kruskal_mst(Graph(3, [(0, 1, 1)]))


def test_kruskal_agrees_with_prim():
    checked = 0
    sizes = [8, 12, 16, 24, 32, 48, 64, 96, 128, 256]
    for seed in range(1000):
        n = sizes[seed % len(sizes)]
        g = generate("random_weighted", n, seed, p=0.4, wmax=50)
        if not is_connected(g):
            continue
        assert kruskal_mst(g) == prim_mst(g)
        checked += 1
    assert checked > 800


def test_forest_on_disconnected():
    g = Graph(5, [(0, 1, 2), (2, 3, 4), (3, 4, 1), (2, 4, 9)])
    w, edges = minimum_spanning_forest(g)
    assert w == 7 and edges == {(0, 1), (2, 3), (3, 4)}


def test_pagerank_oracle():
    cyc = generate("cycle", 8, 0)
    pr = exact_pagerank(cyc, 0.2)
    assert np.allclose(pr, 1 / 8, atol=1e-9)
    two = Graph(2, [(0, 1, 1)])
    assert np.allclose(exact_pagerank(two, 0.3), 0.5, atol=1e-9)
    star = generate("star", 5, 0)
    pr5 = exact_pagerank(star, 0.15)
    assert pr5[0] > pr5[1:].max()
    assert abs(pr5.sum() - 1.0) < 1e-8


def test_brute_densest_examples():
    assert brute_densest(generate("clique", 4, 0))[0] == Fraction(3, 2)
    assert brute_densest(Graph(2, [(0, 1, 1)]))[0] == Fraction(1, 2)
    with pytest.raises(OracleError):
        brute_densest(generate("cycle", 23, 0))


def test_brute_densest_agrees_with_flow():
    for seed in range(6):
        g = generate("gnp", 10, seed, p=0.4)
        opt, _ = brute_densest(g)
        if g.m:
            assert densest_via_flow(g) == opt


def test_validate_mis_examples():
    k4 = generate("clique", 4, 0)
    assert validate_mis(k4, {0})
    assert not validate_mis(k4, {0, 1})
    assert not validate_mis(Graph(3, []), {0})  # not maximal
    h = random_uniform_hypergraph(3, 1, 3, 0)
    assert validate_mis(h, {0, 1})
    assert not validate_mis(h, {0, 1, 2})


def test_all_pairs():
    path = Graph(3, [(0, 1, 1), (1, 2, 1)])
    d, h = all_pairs_distances(path)
    assert d[0, 2] == 2 and h[0, 2] == 2
    disc = Graph(3, [(0, 1, 4)])
    d2, _ = all_pairs_distances(disc)
    assert math.isinf(d2[0, 2])


def test_distances_cross_check_scipy():
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    g = generate("random_weighted", 64, 3, p=0.15, wmax=30)
    u, v, w = g.edge_arrays()
    mat = csr_matrix((np.concatenate([w, w]),
                      (np.concatenate([u, v]), np.concatenate([v, u]))),
                     shape=(g.n, g.n))
    want = dijkstra(mat, indices=0)
    got, _ = single_source_distances(g, 0)
    assert np.allclose(np.asarray(got, dtype=float), want)


def test_bfs_and_structure_helpers():
    g = generate("cycle", 6, 0)
    assert bfs_distances(g, 0) == [0, 1, 2, 3, 2, 1]
    assert is_connected(g)
    assert not is_spanning_tree(g)  # n edges, has a cycle
    assert is_spanning_tree(generate("path", 6, 0))
    assert triangle_exists(generate("clique", 3, 0))
    assert not triangle_exists(generate("star", 9, 0))
