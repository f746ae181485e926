import math

import numpy as np
import pytest

from kmachine import oracles
from kmachine.clique import run_clique
from kmachine.graphs import Graph, generate, label_bits, random_uniform_hypergraph
from kmachine.programs import (
    AlgoConfig,
    bellman_ford_program,
    bfs_program,
    conn_program,
    densest_subgraph_program,
    hmis_kmachine,
    logapprox_shortest_paths,
    luby_mis_program,
    mst_program,
    pagerank_program,
    spanner_program,
    spanner_union,
    st_verify_program,
    triangle_program,
)


def _run(g, prog, seed=0, **kw):
    return run_clique(g, prog, seed, **kw)


# -- breadth-first layers ----------------------------------------------------


def test_bfs_path():
    g = generate("path", 3, 0)
    out, _, _ = _run(g, bfs_program(AlgoConfig(source=0)))
    assert out == [(0, None), (1, 0), (2, 1)]


def test_bfs_unreachable():
    g = Graph(2, [])
    out, _, _ = _run(g, bfs_program(AlgoConfig(source=0)))
    assert out[0] == (0, None)
    assert math.isinf(out[1][0])


def test_bfs_matches_oracle():
    for seed in range(8):
        g = generate("gnp", 128, seed, p=0.1)
        out, _, met = _run(g, bfs_program(AlgoConfig(source=0)), seed=seed)
        want = oracles.bfs_distances(g, 0)
        got = [d for d, _ in out]
        assert all(
            (math.isinf(a) and math.isinf(b)) or a == b for a, b in zip(got, want)
        )
        assert met.broadcasts <= g.n + 1
        assert met.unicasts == 0


# -- fragment merging ---------------------------------------------------------


def test_mst_triangle():
    g = Graph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    out, _, _ = _run(g, mst_program())
    union = set()
    for edges, spanning in out:
        union.update(edges)
        assert spanning
    assert union == {(0, 1), (1, 2)}


def test_mst_star_unit_weights():
    g = generate("star", 5, 0)
    out, _, _ = _run(g, mst_program())
    union = set()
    for edges, _ in out:
        union.update(edges)
    assert union == {(0, 1), (0, 2), (0, 3), (0, 4)}


def test_mst_matches_kruskal():
    for seed in range(10):
        g = generate("random_weighted", 96, seed, p=0.3, wmax=1000)
        if not oracles.is_connected(g):
            continue
        out, _, met = _run(g, mst_program(), seed=seed)
        union = set()
        for edges, spanning in out:
            union.update(edges)
            assert spanning
        _, want = oracles.kruskal_mst(g)
        assert union == want
        assert met.broadcasts <= 2 * g.n * label_bits(g.n) + g.n


def test_mst_disconnected_flags():
    g = Graph(4, [(0, 1, 5), (2, 3, 7)])
    out, _, _ = _run(g, mst_program())
    assert all(not spanning for _, spanning in out)
    union = set()
    for edges, _ in out:
        union.update(edges)
    assert union == {(0, 1), (2, 3)}


def test_conn_examples():
    g = Graph(4, [(0, 1, 1), (2, 3, 1)])
    out, _, _ = _run(g, conn_program())
    assert out[0] == (2, False)
    g2 = generate("cycle", 7, 0)
    out2, _, _ = _run(g2, conn_program())
    assert out2[0] == (1, True)


def test_stverify_path_yes():
    g = generate("path", 4, 0)
    out, _, _ = _run(g, st_verify_program(range(g.m)))
    assert all(o[0] for o in out)


def test_stverify_cycle_plus_isolated_no():
    # n-1 edges but a cycle and an isolated vertex: count right, not spanning
    g = Graph(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    out, _, _ = _run(g, st_verify_program(range(3)))
    assert all(not o[0] for o in out)
    assert out[0][1] == 3  # candidate size was counted correctly


def test_stverify_rejects_wrong_count():
    g = generate("cycle", 5, 0)
    out, _, _ = _run(g, st_verify_program(range(5)))  # connected, n edges
    assert all(not o[0] for o in out)


# -- random walks -------------------------------------------------------------


def test_pagerank_symmetric_instances():
    g = generate("cycle", 8, 1)
    cfg = AlgoConfig(gamma=0.2, tokens_per_node=4096)
    out, _, met = _run(g, pagerank_program(cfg), seed=5, payload_cap_c=6)
    assert met.broadcasts == 0
    assert all(abs(x - 0.125) <= 0.02 for x in out)
    g2 = Graph(2, [(0, 1, 1)])
    out2, _, _ = _run(
        g2, pagerank_program(AlgoConfig(gamma=0.2, tokens_per_node=4096)),
        seed=3, payload_cap_c=14,
    )
    assert all(abs(x - 0.5) <= 0.02 for x in out2)


def test_pagerank_matches_power_iteration():
    g = generate("gnp", 64, 3, p=0.2)
    tokens = math.ceil(100 * math.log2(64))
    out, _, _ = _run(
        g, pagerank_program(AlgoConfig(gamma=0.15, tokens_per_node=tokens)), seed=3
    )
    want = oracles.exact_pagerank(g, 0.15)
    assert np.abs(np.asarray(out) - want).sum() <= 0.1
    total = tokens * g.n
    assert abs(sum(out) - 1.0) <= 3.0 / math.sqrt(total)


def test_pagerank_isolated_vertex():
    g = Graph(3, [(0, 1, 1)])
    out, _, _ = _run(g, pagerank_program(AlgoConfig(tokens_per_node=64)), seed=1)
    # vertex 2's tokens die immediately: estimate is gamma/n
    assert out[2] == pytest.approx(0.15 / 3, rel=0.2)


# -- independent sets ----------------------------------------------------------


def test_mis_edgeless():
    g = Graph(5, [])
    out, _, _ = _run(g, luby_mis_program(AlgoConfig()))
    assert all(m for m, _ in out)


def test_mis_clique():
    g = generate("clique", 6, 0)
    out, _, _ = _run(g, luby_mis_program(AlgoConfig()), seed=2)
    assert sum(m for m, _ in out) == 1


def test_mis_valid_on_random():
    for seed in range(10):
        g = generate("gnp", 64, seed, p=0.1)
        out, _, met = _run(g, luby_mis_program(AlgoConfig()), seed=seed)
        assert not any(f for _, f in out)
        members = [v for v, (m, _) in enumerate(out) if m]
        assert oracles.validate_mis(g, members)


def test_hmis_examples():
    h = random_uniform_hypergraph(6, 3, 2, 0)
    h_empty = type(h)(6, [])
    flags, _, _ = hmis_kmachine(h_empty, 2, seed=0)
    assert all(flags)
    h1 = type(h)(3, [(0, 1, 2)])
    flags1, _, _ = hmis_kmachine(h1, 2, seed=1)
    assert sum(flags1) == 2
    for seed in range(8):
        hh = random_uniform_hypergraph(64, 128, 3, seed)
        flags2, rep, _ = hmis_kmachine(hh, 4, seed=seed)
        members = [v for v, f in enumerate(flags2) if f]
        assert oracles.validate_mis(hh, members)
        assert rep.bound_ok


# -- shortest paths ------------------------------------------------------------


def test_bellman_ford_path():
    g = Graph(3, [(0, 1, 5), (1, 2, 7)])
    out, _, _ = _run(g, bellman_ford_program(AlgoConfig(source=0)))
    assert [d for d, _ in out] == [0, 5, 12]
    assert [p for _, p in out] == [None, 0, 1]


def test_bellman_ford_relaxation():
    g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])
    out, _, _ = _run(g, bellman_ford_program(AlgoConfig(source=0)))
    assert out[2][0] == 2


def test_bellman_ford_matches_dijkstra():
    for seed in range(8):
        g = generate("random_weighted", 96, seed, p=0.3, wmax=100)
        out, _, met = _run(g, bellman_ford_program(AlgoConfig(source=0)), seed=seed)
        want, _ = oracles.single_source_distances(g, 0)
        got = [d for d, _ in out]
        assert all(
            (math.isinf(a) and math.isinf(b)) or a == b for a, b in zip(got, want)
        )
        s = oracles.shortest_path_diameter(g)
        assert met.broadcasts <= g.n * max(1, s) + g.n


# -- spanners ------------------------------------------------------------------


def test_spanner_tree_is_kept_whole():
    g = generate("path", 16, 0)
    for delta in (1, 2, 4):
        out, _, _ = _run(g, spanner_program(AlgoConfig(delta=delta)), seed=delta)
        edges = spanner_union(out)
        assert set(edges) == {(u, v) for u, v, _ in g.edges}


def test_spanner_stretch_on_clique():
    g = generate("clique", 32, 0)
    out, _, _ = _run(g, spanner_program(AlgoConfig(delta=2)), seed=7)
    edges = spanner_union(out)
    sg = Graph(32, [(a, b, 1) for a, b in edges])
    d_sp, _ = oracles.all_pairs_distances(sg)
    assert d_sp.max() <= 3  # every input distance is 1, stretch cap 2*2-1


def test_spanner_subgraph_and_size():
    sizes = []
    for seed in range(50):
        g = generate("gnp", 128, seed, p=0.3)
        delta = 7  # ceil(log2 128)
        out, _, met = _run(g, spanner_program(AlgoConfig(delta=delta)), seed=seed)
        edges = spanner_union(out)
        gset = {(u, v) for u, v, _ in g.edges}
        assert set(edges) <= gset
        assert met.broadcasts <= g.n * delta * delta
        sizes.append(len(edges))
    mean = sum(sizes) / len(sizes)
    assert mean <= 4 * 7 * 128 ** (1 + 1 / 7)


def test_spanner_stretch_random():
    for seed in range(5):
        g = generate("gnp", 64, seed, p=0.15)
        delta = 3
        out, _, _ = _run(g, spanner_program(AlgoConfig(delta=delta)), seed=seed)
        sg = Graph(64, [(a, b, 1) for a, b in spanner_union(out)])
        d_in, _ = oracles.all_pairs_distances(g)
        d_sp, _ = oracles.all_pairs_distances(sg)
        finite = ~np.isinf(d_in)
        assert (d_sp[finite] <= (2 * delta - 1) * d_in[finite]).all()


def test_logapprox_paths():
    tree = generate("path", 24, 0)
    res = logapprox_shortest_paths(tree, 4, seed=1)
    d, _ = oracles.all_pairs_distances(tree)
    assert (np.asarray(res.estimates) == d).all()
    cyc = generate("cycle", 64, 0)
    res2 = logapprox_shortest_paths(cyc, 4, seed=2)
    est = np.asarray(res2.estimates)
    d2, _ = oracles.all_pairs_distances(cyc)
    assert (est >= d2 - 1e-9).all()
    clique = generate("clique", 64, 0)
    res3 = logapprox_shortest_paths(clique, 8, seed=3)
    est3 = np.asarray(res3.estimates)
    d3, _ = oracles.all_pairs_distances(clique)
    bound = 2 * math.ceil(math.log2(64)) - 1
    off = ~np.eye(64, dtype=bool)
    assert (est3[off] <= bound * d3[off]).all()
    assert res3.km_rounds > res3.report.km_rounds  # shipping was charged


# -- densest subgraph ----------------------------------------------------------


def test_densest_k4():
    g = generate("clique", 4, 0)
    out, _, _ = _run(g, densest_subgraph_program(AlgoConfig(eps=0.5)))
    density, member = out[0]
    opt, _ = oracles.brute_densest(g)
    assert density >= float(opt) / 3.0 - 1e-9
    assert density == 1.5  # peeling never cuts K4 below its own density


def test_densest_star():
    g = generate("star", 9, 0)
    out, _, _ = _run(g, densest_subgraph_program(AlgoConfig(eps=0.5)))
    opt, _ = oracles.brute_densest(g)
    assert out[0][0] >= float(opt) / 3.0 - 1e-9


def test_densest_random_guarantee():
    eps = 0.5
    for seed in range(20):
        g = generate("gnp", 6 + seed % 7, seed, p=0.5)
        out, _, met = _run(g, densest_subgraph_program(AlgoConfig(eps=eps)), seed=seed)
        opt, _ = oracles.brute_densest(g)
        assert out[0][0] >= float(opt) / (2 + 2 * eps) - 1e-9
        n = g.n
        assert met.broadcasts <= 2 * n * math.ceil(math.log(max(2, n), 1 + eps)) + n


def test_densest_edgeless():
    g = Graph(5, [])
    out, _, _ = _run(g, densest_subgraph_program(AlgoConfig()))
    assert all(o == (0.0, True) for o in out)


# -- triangles -----------------------------------------------------------------


def test_triangle_examples():
    assert _run(generate("clique", 3, 0), triangle_program())[0] == [True] * 3
    assert _run(generate("star", 6, 0), triangle_program())[0] == [False] * 6


def test_triangle_matches_oracle():
    for seed in range(10):
        g = generate("gnp", 64, seed, p=0.2)
        out, _, met = _run(g, triangle_program(), seed=seed)
        want = oracles.triangle_exists(g)
        assert all(o == want for o in out)
        assert met.comm_degree <= 2 * (g.n - 1)


# -- degenerate sizes ------------------------------------------------------------


def test_single_vertex_everything():
    g = Graph(1, [])
    assert _run(g, bfs_program(AlgoConfig()))[0] == [(0, None)]
    out, _, met = _run(g, mst_program())
    assert out == [((), True)] and met.rounds == 1
    assert _run(g, conn_program())[0] == [(1, True)]
    assert _run(g, st_verify_program(()))[0][0] == (True, 0, True)
    assert _run(g, triangle_program())[0] == [False]
    assert _run(g, densest_subgraph_program(AlgoConfig()))[0] == [(0.0, True)]
    pr = _run(g, pagerank_program(AlgoConfig(tokens_per_node=16)))[0]
    assert pr[0] == pytest.approx(0.15, rel=1e-9)  # gamma * 1/gamma * 16/16
    mis = _run(g, luby_mis_program(AlgoConfig()))[0]
    assert mis == [(True, False)]


def test_two_vertices_one_edge():
    # weight 7 fills the value bits that fit next to an endpoint id at n=2;
    # anything wider is rejected by the payload cap
    g = Graph(2, [(0, 1, 7)])
    assert _run(g, triangle_program())[0] == [False, False]
    out, _, _ = _run(g, mst_program())
    assert all(edges == ((0, 1),) and sp for edges, sp in out)
    sp_out, _, _ = _run(g, spanner_program(AlgoConfig(delta=1)))
    assert spanner_union(sp_out) == [(0, 1)]


def test_mst_payload_cap_rejects_extreme_weight_at_tiny_n():
    from kmachine.clique import ProgramViolation

    g = Graph(2, [(0, 1, 9)])  # legal weight, but endpoint+weight > 4 bits
    with pytest.raises(ProgramViolation):
        _run(g, mst_program())
    _run(g, mst_program(), payload_cap_c=5)  # a wider cap accepts it


def test_stverify_empty_candidate():
    g = generate("path", 3, 0)
    out, _, _ = _run(g, st_verify_program(()))
    assert all(not o[0] for o in out)


def test_spanner_delta_above_log_n():
    g = generate("gnp", 16, 1, p=0.4)
    out, _, _ = _run(g, spanner_program(AlgoConfig(delta=10)), seed=4)
    edges = spanner_union(out)
    sg = Graph(16, [(a, b, 1) for a, b in edges]) if edges else Graph(16, [])
    d_in, _ = oracles.all_pairs_distances(g)
    d_sp, _ = oracles.all_pairs_distances(sg)
    finite = ~np.isinf(d_in)
    assert (d_sp[finite] <= 19 * d_in[finite]).all()


def test_mis_phase_budget_failure_flag():
    g = generate("clique", 12, 0)
    out, _, _ = _run(g, luby_mis_program(AlgoConfig(mis_max_phases=1)), seed=1)
    # either phase 1 settled everyone or some vertex reports failure;
    # with one clique phase at least the losers must have given up
    assert any(f for _, f in out) or sum(m for m, _ in out) == 1


def test_zero_weight_edges():
    rng = np.random.default_rng(5)
    base = generate("gnp", 24, 77, p=0.25)
    g = Graph(24, [(u, v, int(rng.integers(0, 5))) for u, v, _ in base.edges])
    out, _, _ = _run(g, bellman_ford_program(AlgoConfig(source=0)), seed=1)
    want, _ = oracles.single_source_distances(g, 0)
    got = [d for d, _ in out]
    assert all(
        (math.isinf(a) and math.isinf(b)) or a == b for a, b in zip(got, want)
    )
    outm, _, _ = _run(g, mst_program(), seed=1)
    union = set()
    for e, _ in outm:
        union.update(e)
    assert union == oracles.minimum_spanning_forest(g)[1]


def test_hmis_arity_two_matches_graph_mis():
    for seed in range(5):
        h = random_uniform_hypergraph(40, 80, 2, 700 + seed)
        flags, _, _ = hmis_kmachine(h, 5, seed=seed)
        members = [v for v, f in enumerate(flags) if f]
        g = Graph(40, [(a, b, 1) for a, b in h.hyperedges])
        assert oracles.validate_mis(g, members)
