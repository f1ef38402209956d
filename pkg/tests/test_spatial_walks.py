import numpy as np
import pytest

from comwalk.graph import TemporalGraph
from comwalk.spatial_walks import acceptance_ratio, mh_step, mh_walk, transition_matrix

from conftest import is_bipartite, random_connected_graph
from oracles import mh_transition_matrix_from_degrees


class TestAcceptanceRatio:
    def test_ratio_above_one_is_capped(self):
        assert acceptance_ratio(4, 2) == 1.0

    def test_downhill_ratio(self):
        assert acceptance_ratio(2, 4) == 0.5

    def test_equal_degrees(self):
        assert acceptance_ratio(3, 3) == 1.0

    def test_isolated_node_rejected(self):
        with pytest.raises(ValueError):
            acceptance_ratio(0, 2)
        with pytest.raises(ValueError):
            acceptance_ratio(2, 0)


class _ScriptedRng:
    """Deterministic stand-in: integers() pops proposal indices, random()
    pops acceptance draws."""

    def __init__(self, proposal_indices, uniforms):
        self.proposal_indices = list(proposal_indices)
        self.uniforms = list(uniforms)

    def integers(self, lo, hi=None, size=None):
        return self.proposal_indices.pop(0)

    def random(self):
        return self.uniforms.pop(0)


class TestMhWalk:
    def test_two_node_graph_alternates(self):
        g = TemporalGraph(2, np.array([0]), np.array([1]), np.array([0.0]))
        walk = mh_walk(g, 0, 3, np.random.default_rng(0))
        assert walk.nodes == [1, 0, 1]

    def test_single_proposal_accept_scenario(self):
        # hub 0 with neighbor set {1, 2, 3, 4}: one uniform proposal picks
        # index 3 and the accept test passes, so the next node is 4
        src = np.array([0, 0, 0, 0, 1, 2])
        dst = np.array([1, 2, 3, 4, 2, 3])
        g = TemporalGraph(5, src, dst, np.arange(6, dtype=float))
        rng = _ScriptedRng(proposal_indices=[3], uniforms=[0.05])
        walk = mh_walk(g, 0, 1, rng)
        assert walk.nodes == [4]

    def test_rejection_appends_nothing(self):
        # leaf 1 proposing hub 0 (degree 4) accepts with ratio 1/4 only
        src = np.array([0, 0, 0, 0])
        dst = np.array([1, 2, 3, 4])
        g = TemporalGraph(5, src, dst, np.arange(4, dtype=float))
        rng = _ScriptedRng(proposal_indices=[0, 0], uniforms=[0.9, 0.1])
        walk = mh_walk(g, 1, 1, rng)
        assert walk.nodes == [0]  # first proposal rejected, second accepted

    def test_isolated_start_rejected(self):
        g = TemporalGraph(3, np.array([0]), np.array([1]), np.array([0.0]))
        with pytest.raises(ValueError, match="no static neighbors"):
            mh_walk(g, 2, 4, np.random.default_rng(0))

    def test_every_hop_is_a_static_edge(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(4, 15)), extra_edges=5)
            start = int(rng.integers(0, g.num_nodes))
            walk = mh_walk(g, start, 12, rng)
            prev = start
            for node in walk.nodes:
                assert node in g.static_neighbors(prev).tolist()
                prev = node

    def test_rejection_cap_truncates(self):
        # star: the only move from a leaf is to the hub, accepted with
        # probability 1/399, so the proposal cap usually bites
        n = 400
        g = TemporalGraph(n, np.zeros(n - 1, dtype=int), np.arange(1, n),
                          np.arange(n - 1, dtype=float))
        walk = mh_walk(g, 1, 10, np.random.default_rng(5))
        assert len(walk.nodes) < 10


class TestChainDistribution:
    def test_detailed_balance_entrywise(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(3, 13)), extra_edges=4)
            T = transition_matrix(g)
            oracle = mh_transition_matrix_from_degrees(
                [g.static_degree(v) for v in range(g.num_nodes)],
                [g.static_neighbors(v).tolist() for v in range(g.num_nodes)],
            )
            assert np.allclose(T, oracle, atol=0.0)
            pi = 1.0 / g.num_nodes
            flux = pi * T
            assert np.max(np.abs(flux - flux.T)) <= 1e-12

    def test_uniform_is_principal_left_eigenvector(self):
        rng = np.random.default_rng(13)
        g = random_connected_graph(rng, 10, extra_edges=8)
        T = transition_matrix(g)
        vals, vecs = np.linalg.eig(T.T)
        lead = np.argmax(vals.real)
        stationary = np.abs(vecs[:, lead].real)
        stationary /= stationary.sum()
        assert np.allclose(stationary, 1.0 / g.num_nodes, atol=1e-10)

    def test_long_chain_close_to_uniform(self):
        rng = np.random.default_rng(17)
        g = random_connected_graph(rng, 12, extra_edges=10)
        assert not is_bipartite(g)
        counts = np.zeros(g.num_nodes)
        state = 0
        for _ in range(60_000):
            state = mh_step(g, state, rng)
            counts[state] += 1
        tv = 0.5 * np.abs(counts / counts.sum() - 1.0 / g.num_nodes).sum()
        assert tv < 0.03
