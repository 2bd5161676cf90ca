from __future__ import annotations

import json
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varnet import metrics
from varnet.metrics import DisconnectedError, full_report
from varnet.netbuild import DataNetwork
from varnet.synthgen import complete_graph, cycle_graph, path_graph, star_graph

from conftest import SMALL_GRAPHS, graph, k4_minus_edge, networks, triangle_pendant
from oracles import path_metrics, pearson_assortativity, triangle_clustering

TOL = 1e-12


def to_nx(net: DataNetwork) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(net.n_nodes))
    g.add_edges_from(net.edges())
    return g


def relabel(net: DataNetwork, rnd: random.Random) -> DataNetwork:
    perm = list(range(net.n_nodes))
    rnd.shuffle(perm)
    return DataNetwork.from_edges(net.nodes, [(perm[i], perm[j]) for i, j in net.edges()])


class TestScalar:
    def test_average_degree(self):
        assert metrics.average_degree(complete_graph(5)) == 4
        assert metrics.average_degree(path_graph(3)) == pytest.approx(4 / 3, abs=TOL)
        assert metrics.average_degree(graph(1, [])) == 0
        with pytest.raises(ValueError):
            metrics.average_degree(graph(0, []))

    def test_density(self):
        for n in range(2, 8):
            assert metrics.density(complete_graph(n)) == 1
        assert metrics.density(path_graph(3)) == pytest.approx(2 / 3, abs=TOL)
        with pytest.raises(ValueError):
            metrics.density(graph(1, []))

    def test_clustering(self):
        assert metrics.average_clustering(complete_graph(3)) == 1
        assert metrics.average_clustering(star_graph(3)) == 0
        net = k4_minus_edge()
        assert [metrics.local_clustering(net, i) for i in range(4)] == pytest.approx([2 / 3, 2 / 3, 1, 1], abs=TOL)
        assert metrics.average_clustering(net) == pytest.approx(5 / 6, abs=TOL)

    def test_assortativity(self):
        assert metrics.assortativity(star_graph(3)) == pytest.approx(-1, abs=TOL)
        assert metrics.assortativity(complete_graph(6)) is None
        assert metrics.assortativity(cycle_graph(7)) is None
        assert metrics.assortativity(triangle_pendant()) == pytest.approx(-5 / 7, abs=TOL)
        with pytest.raises(ValueError):
            metrics.assortativity(graph(3, []))

    def test_degree_correlation(self):
        assert metrics.degree_correlation(star_graph(3)) == {1: 3, 3: 1}
        assert metrics.degree_correlation(complete_graph(5)) == {4: 4}
        assert metrics.degree_correlation(path_graph(3)) == {1: 2, 2: 1}
        # isolates are left out
        assert metrics.degree_correlation(graph(3, [(0, 1)])) == {1: 1}
        with pytest.raises(ValueError):
            metrics.degree_correlation(graph(2, []))

    def test_path_length(self):
        assert metrics.average_path_length(complete_graph(6)) == 1
        assert metrics.average_path_length(path_graph(3)) == pytest.approx(4 / 3, abs=TOL)
        assert metrics.average_path_length(star_graph(3)) == pytest.approx(1.5, abs=TOL)
        with pytest.raises(DisconnectedError):
            metrics.average_path_length(graph(3, [(0, 1)]))

    def test_diameter(self):
        assert metrics.diameter(complete_graph(6)) == 1
        for n in range(1, 9):
            assert metrics.diameter(path_graph(n)) == n - 1
        with pytest.raises(DisconnectedError):
            metrics.diameter(graph(2, []))


EXPECTED = {
    # n, |E|, <k>, rho, <C>, r, <d>, d_max
    "complete5": (5, 10, 4, 1, 1, None, 1, 1),
    "star3": (4, 3, 3 / 2, 1 / 2, 0, -1, 3 / 2, 2),
    "path3": (3, 2, 4 / 3, 2 / 3, 0, -1, 4 / 3, 2),
    "triangle_pendant": (4, 4, 2, 2 / 3, 7 / 12, -5 / 7, 4 / 3, 2),
    "k4_minus_edge": (4, 5, 5 / 2, 5 / 6, 5 / 6, -2 / 3, 7 / 6, 2),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_full_report_hand_values(name):
    rep = full_report(SMALL_GRAPHS[name]())
    n, m, k, rho, c, r, d, dmax = EXPECTED[name]
    assert (rep.n_nodes, rep.n_edges, rep.diameter) == (n, m, dmax)
    assert rep.average_degree == pytest.approx(k, abs=TOL)
    assert rep.density == pytest.approx(rho, abs=TOL)
    assert rep.average_clustering == pytest.approx(c, abs=TOL)
    assert rep.average_path_length == pytest.approx(d, abs=TOL)
    if r is None:
        assert rep.assortativity is None
    else:
        assert rep.assortativity == pytest.approx(r, abs=TOL)


def test_report_json_fields():
    d = full_report(complete_graph(5)).to_dict()
    assert list(d) == [
        "n_nodes", "n_edges", "average_degree", "density",
        "average_clustering", "assortativity", "average_path_length", "diameter",
    ]
    assert json.loads(json.dumps(d))["assortativity"] is None


def test_full_report_needs_two_nodes():
    with pytest.raises(ValueError):
        full_report(graph(1, []))


class TestOracles:
    @given(networks(min_nodes=2, max_nodes=30))
    def test_assortativity_pearson(self, net):
        if net.n_edges == 0:
            return
        r = metrics.assortativity(net)
        deg = net.degrees()
        ends = {deg[i] for e in net.edges() for i in e}
        if len(ends) == 1:
            assert r is None
        else:
            assert r == pytest.approx(pearson_assortativity(net), abs=1e-12)
            assert -1 <= r <= 1

    @given(networks(max_nodes=30))
    def test_clustering_triangles(self, net):
        for i in range(net.n_nodes):
            assert metrics.local_clustering(net, i) == pytest.approx(triangle_clustering(net, i), abs=TOL)

    @given(networks(min_nodes=2, max_nodes=30, connected=True))
    def test_paths_floyd_warshall(self, net):
        apl, dmax = path_metrics(net)
        assert metrics.average_path_length(net) == apl
        assert metrics.diameter(net) == dmax

    @given(networks(max_nodes=20))
    def test_knn_networkx(self, net):
        if net.n_edges == 0:
            return
        expected = nx.average_degree_connectivity(to_nx(net))
        got = metrics.degree_correlation(net)
        assert set(got) == {k for k in expected if k > 0}
        for k, v in got.items():
            assert v == pytest.approx(expected[k], abs=1e-12)

    @given(networks(min_nodes=2, max_nodes=25, connected=True), st.randoms(use_true_random=False))
    def test_relabel_invariance(self, net, rnd):
        a, b = full_report(net), full_report(relabel(net, rnd))
        assert a.n_edges == b.n_edges and a.diameter == b.diameter
        for f in ("average_degree", "density", "average_clustering", "average_path_length"):
            assert getattr(a, f) == pytest.approx(getattr(b, f), abs=TOL)
        if a.assortativity is None:
            assert b.assortativity is None
        else:
            assert a.assortativity == pytest.approx(b.assortativity, abs=TOL)

    @given(networks(min_nodes=2, max_nodes=25, connected=True))
    def test_report_invariants(self, net):
        rep = full_report(net)
        assert 0 <= rep.density <= 1
        assert 0 <= rep.average_clustering <= 1
        assert rep.assortativity is None or -1 <= rep.assortativity <= 1
        assert rep.diameter >= rep.average_path_length >= 1
        assert rep.average_degree == 2 * rep.n_edges / rep.n_nodes


def test_parallel_sweep_matches_sequential():
    from varnet.synthgen import er_graph
    from varnet.netbuild import largest_component

    net = largest_component(er_graph(60, 0.08, 3))
    assert metrics.distance_summary(net, workers=3) == metrics.distance_summary(net)


@given(networks())
def test_frontier_sweep_matches_bfs(net):
    assert metrics._frontier_sweep(net, block=3) == metrics._bfs_sweep(net.adjacency, range(net.n_nodes))


@given(networks())
def test_dense_neighbor_links_match_loop(net):
    deg = net.degrees()
    loop = [round(metrics.local_clustering(net, i) * k * (k - 1)) if k >= 2 else 0 for i, k in enumerate(deg)]
    dense = metrics._neighbor_links_dense(net, block=3)
    assert [x if k >= 2 else 0 for x, k in zip(dense, deg)] == loop


def test_dense_and_loop_reports_agree(monkeypatch):
    from varnet.synthgen import er_graph
    from varnet.netbuild import largest_component

    net = largest_component(er_graph(80, 0.3, 5))
    assert metrics._use_dense(net)
    dense = full_report(net)
    monkeypatch.setattr(metrics, "DENSE_MAX_NODES", 0)
    assert full_report(net) == dense
