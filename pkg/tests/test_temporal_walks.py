import numpy as np
import pytest

from comwalk.distributions import neighbor_degree_distribution, wasserstein_1d
from comwalk.errors import ConfigError, SamplingError
from comwalk.graph import TemporalEdge, TemporalGraph
from comwalk.temporal_walks import (
    TransportIndex,
    WalkConfig,
    context_window_budget,
    generate_temporal_corpus,
    temporal_walk,
    write_walks,
)

from conftest import random_temporal_graph

SMALL = dict(max_walk_length=10, context_window=3, walks_per_node=2, spatial_length=4)


def check_walk_validity(g, walk):
    assert walk.nodes[0] == walk.start_edge.dst
    assert walk.times[0] == walk.start_edge.t
    for i in range(1, len(walk.nodes)):
        assert walk.times[i] > walk.times[i - 1]
        assert g.has_edge_at(walk.nodes[i - 1], walk.nodes[i], walk.times[i])


class TestWalkConfig:
    def test_defaults(self):
        cfg = WalkConfig()
        assert (cfg.max_walk_length, cfg.context_window) == (80, 10)
        assert (cfg.walks_per_node, cfg.spatial_length) == (10, 8)

    def test_invariants(self):
        with pytest.raises(ConfigError, match="max_walk_length"):
            WalkConfig(max_walk_length=4, context_window=10)
        with pytest.raises(ConfigError, match="context_window"):
            WalkConfig(context_window=0)
        with pytest.raises(ConfigError, match="bias"):
            WalkConfig(bias="other")


class TestTemporalWalk:
    def test_dead_end_at_start(self):
        g = TemporalGraph(2, np.array([0]), np.array([1]), np.array([0.0]))
        walk = temporal_walk(g, g.edge(0), WalkConfig(**SMALL), np.random.default_rng(0))
        assert walk.nodes == [1]
        assert walk.times == [0.0]

    def test_unique_time_respecting_path(self, line_graph):
        # the only edge out of each node is strictly later, so the walk
        # from (s, a) must traverse a, b, c, d
        walk = temporal_walk(
            line_graph, line_graph.edge(0), WalkConfig(**SMALL), np.random.default_rng(0)
        )
        assert walk.nodes == [1, 2, 3, 4]
        assert walk.times == [0.0, 1.0, 2.0, 3.0]

    def test_start_edge_must_exist(self, line_graph):
        with pytest.raises(ValueError, match="not an edge"):
            temporal_walk(
                line_graph, TemporalEdge(0, 1, 99.0), WalkConfig(**SMALL),
                np.random.default_rng(0),
            )

    def test_picks_transport_minimizing_candidate(self):
        """Walker at a node with three time-valid candidates moves to the
        one whose degree distribution is transport-closest."""
        # build: walker node 7 at time 2 can reach 3, 4, 5 (edges later
        # than 2); their neighborhoods differ in degree structure
        src = np.array([1, 7, 7, 7, 3, 3, 4, 4, 5, 5, 1, 2, 6])
        dst = np.array([7, 3, 4, 5, 1, 2, 6, 0, 0, 6, 2, 6, 0])
        t = np.array([2.0, 3.0, 3.0, 3.0, 4.0, 5.0, 4.0, 5.0, 4.0, 5.0, 6.0, 6.0, 6.0])
        g = TemporalGraph(8, src, dst, t)
        current_t = 2.0
        candidates = [(int(w), float(tw)) for w, tw in g.temporal_neighbors(7, current_t)]
        assert sorted({w for w, _ in candidates}) == [3, 4, 5]
        p = neighbor_degree_distribution(g, 7, current_t)
        dists = {
            w: wasserstein_1d(p, neighbor_degree_distribution(g, w, current_t))
            for w, _ in candidates
        }
        best = min(dists, key=dists.get)
        others = [d for w, d in dists.items() if w != best]
        assert all(dists[best] < d for d in others), dists
        # start edge (1, 7, 2.0) puts the walker on 7 at the current time
        walk = temporal_walk(
            g, TemporalEdge(1, 7, current_t), WalkConfig(**SMALL), np.random.default_rng(0)
        )
        assert walk.nodes[1] == best

    def test_walks_valid_on_random_graphs(self):
        rng = np.random.default_rng(23)
        cfg = WalkConfig(**SMALL)
        for _ in range(10):
            g = random_temporal_graph(rng, 20, 80)
            index = TransportIndex(g)
            for _ in range(10):
                start = g.edge(int(rng.integers(0, g.num_edges)))
                walk = temporal_walk(g, start, cfg, rng, index)
                check_walk_validity(g, walk)
                assert len(walk.nodes) <= cfg.max_walk_length

    def test_uniform_bias_walks_also_valid(self):
        rng = np.random.default_rng(29)
        cfg = WalkConfig(bias="uniform", **SMALL)
        g = random_temporal_graph(rng, 20, 80)
        for _ in range(20):
            start = g.edge(int(rng.integers(0, g.num_edges)))
            check_walk_validity(g, temporal_walk(g, start, cfg, rng))


class TestTransportIndex:
    def test_matches_public_distance_everywhere(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            g = random_temporal_graph(rng, 15, 60)
            index = TransportIndex(g)
            for _ in range(40):
                u, w = rng.integers(0, g.num_nodes, 2)
                t = float(rng.random() * 100)
                fast = index.distance(
                    int(u), index.suffix_offset(int(u), t),
                    int(w), index.suffix_offset(int(w), t),
                )
                slow = wasserstein_1d(
                    neighbor_degree_distribution(g, int(u), t),
                    neighbor_degree_distribution(g, int(w), t),
                )
                assert fast == pytest.approx(slow, abs=1e-9)


class TestCorpusGeneration:
    def test_budget_formula(self):
        cfg = WalkConfig(max_walk_length=5, context_window=2, walks_per_node=1,
                         spatial_length=1)
        assert context_window_budget(cfg, num_nodes=10) == 40

    def test_budget_met_and_walks_valid(self):
        g = random_temporal_graph(np.random.default_rng(37), 12, 70)
        cfg = WalkConfig(max_walk_length=6, context_window=2, walks_per_node=1,
                         spatial_length=2, seed=5)
        walks = generate_temporal_corpus(g, cfg)
        covered = sum(
            len(w.nodes) - cfg.context_window + 1
            for w in walks
            if len(w.nodes) >= cfg.context_window
        )
        assert covered >= context_window_budget(cfg, g.num_nodes)
        for walk in walks:
            check_walk_validity(g, walk)

    def test_fixed_seed_reproducible(self):
        g = random_temporal_graph(np.random.default_rng(41), 12, 70)
        cfg = WalkConfig(max_walk_length=6, context_window=2, walks_per_node=1,
                         spatial_length=2, seed=9)
        a = generate_temporal_corpus(g, cfg)
        b = generate_temporal_corpus(g, cfg)
        assert [w.nodes for w in a] == [w.nodes for w in b]
        assert [w.times for w in a] == [w.times for w in b]

    def test_unreachable_budget_raises(self):
        # every walk has 2 nodes < window, so no windows ever accumulate
        g = TemporalGraph(2, np.array([0]), np.array([1]), np.array([0.0]))
        cfg = WalkConfig(max_walk_length=10, context_window=5, walks_per_node=1,
                         spatial_length=1, seed=0)
        with pytest.raises(SamplingError, match="unreachable"):
            generate_temporal_corpus(g, cfg)

    def test_walk_dump_format(self, tmp_path, line_graph):
        cfg = WalkConfig(max_walk_length=5, context_window=2, walks_per_node=1,
                         spatial_length=1, seed=0)
        walks = generate_temporal_corpus(line_graph, cfg)
        path = tmp_path / "walks.txt"
        write_walks(walks, path)
        lines = path.read_text().splitlines()
        assert len(lines) == len(walks)
        assert lines[0].split() == [str(n) for n in walks[0].nodes]
