import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparselog.errors import DimensionMismatchError, InvalidPartitionError
from sparselog.graphcore import (
    Graph,
    SparsityPattern,
    boolean_product,
    check_c_local,
    check_h_local,
    check_z_local,
    distance_matrix,
    edge_color,
    fit_decay_rate,
    graph_distance,
    is_proper_coloring,
    max_degree,
    pattern_power,
    reach_pattern,
)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple(p for p, k in zip(pairs, keep) if k))


def walks_of_length(g, k):
    """Brute-force enumeration of vertex pairs joined by a walk of exactly k steps."""
    adj = g.neighbors()
    mask = np.zeros((g.n, g.n), dtype=bool)
    for s in range(g.n):
        frontier = {s}
        for _ in range(k):
            frontier = {w for v in frontier for w in adj[v]}
        for w in frontier:
            mask[s, w] = True
    return mask


def circular_offsets(mask):
    n = mask.shape[0]
    return {(j - i) % n for i, j in zip(*np.nonzero(mask))}


class TestBasics:
    def test_max_degree(self):
        assert max_degree(Graph.ring(20)) == 2
        assert max_degree(Graph(5, ())) == 0
        assert max_degree(Graph.star(4)) == 4

    def test_distance_examples(self):
        ring = Graph.ring(20)
        assert graph_distance(ring, 0, 10) == 10
        assert graph_distance(ring, 7, 7) == 0
        assert graph_distance(Graph(2, ()), 0, 1) is None

    def test_distance_rejects_bad_vertex(self):
        with pytest.raises(IndexError):
            graph_distance(Graph.ring(4), 0, 4)

    def test_graph_validation(self):
        with pytest.raises(ValueError):
            Graph(3, ((0, 0),))
        with pytest.raises(ValueError):
            Graph(3, ((0, 3),))
        assert Graph(3, ((1, 0), (0, 1))).edges == ((0, 1),)

    def test_text_round_trip(self):
        g = Graph.ring(6)
        assert Graph.parse(g.to_text()) == g
        with pytest.raises(ValueError):
            Graph.parse("3 2\n0 1\n")

    def test_pattern_export(self):
        p = SparsityPattern.of_graph(Graph.path(3))
        assert p.to_text() == "0 1\n1 0\n1 2\n2 1\n"


class TestPatterns:
    def test_identity_powers(self):
        ident = SparsityPattern.identity(5)
        for k in range(4):
            assert pattern_power(ident, k) == ident

    def test_ring_square(self):
        ring = Graph.ring(20)
        p2 = pattern_power(SparsityPattern.of_graph(ring), 2)
        assert np.array_equal(p2.mask, walks_of_length(ring, 2))
        assert circular_offsets(p2.mask) == {0, 2, 18}

    def test_ring_reach(self):
        ring = Graph.ring(20)
        r3 = reach_pattern(SparsityPattern.of_graph(ring), 3)
        brute = np.zeros((20, 20), dtype=bool)
        for k in range(4):
            brute |= walks_of_length(ring, k)
        assert np.array_equal(r3.mask, brute)
        assert circular_offsets(r3.mask) == {0, 1, 2, 3, 17, 18, 19}

    @settings(max_examples=60, deadline=None)
    @given(graphs(), st.integers(0, 4), st.integers(0, 4))
    def test_power_is_multiplicative(self, g, j, k):
        p = SparsityPattern.of_graph(g)
        assert np.array_equal(pattern_power(p, j + k).mask, walks_of_length(g, j + k))
        assert pattern_power(p, j + k) == boolean_product(pattern_power(p, j), pattern_power(p, k))

    def test_pattern_of_symmetric_matrix_is_symmetric(self, rng):
        a = rng.standard_normal((6, 6)) * (rng.random((6, 6)) < 0.4)
        p = SparsityPattern.from_matrix(a + a.T)
        assert np.array_equal(p.mask, p.mask.T)


class TestDistances:
    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_symmetry_and_triangle_inequality(self, g):
        d = distance_matrix(g)
        assert np.array_equal(d, d.T)
        assert np.all(np.diag(d) == 0)
        for a, b, c in itertools.product(range(g.n), repeat=3):
            if d[a, b] >= 0 and d[b, c] >= 0:
                assert 0 <= d[a, c] <= d[a, b] + d[b, c]


class TestEdgeColoring:
    def test_even_cycle_is_class_one(self):
        c = edge_color(Graph.ring(4))
        assert c.m == 2
        for cls in c.classes:
            assert sorted(v for e in cls for v in e) == [0, 1, 2, 3]

    def test_triangle_needs_three(self):
        c = edge_color(Graph.ring(3))
        assert c.m == 3
        assert all(len(cls) == 1 for cls in c.classes)

    def test_ring20(self):
        g = Graph.ring(20)
        c = edge_color(g)
        assert [len(cls) for cls in c.classes] == [10, 10]
        assert is_proper_coloring(g, c)

    def test_deterministic(self):
        g = Graph.complete(7)
        assert edge_color(g) == edge_color(g)

    def test_complete_graphs(self):
        for n in range(2, 10):
            g = Graph.complete(n)
            c = edge_color(g)
            assert is_proper_coloring(g, c)
            assert c.m <= max_degree(g) + 1

    @settings(max_examples=200, deadline=None)
    @given(graphs())
    def test_partition_into_matchings(self, g):
        c = edge_color(g)
        assert is_proper_coloring(g, c)
        assert c.m <= max_degree(g) + 1
        seen = [e for cls in c.classes for e in cls]
        assert sorted(seen) == list(g.edges)
        for cls in c.classes:
            for e, f in itertools.combinations(cls, 2):
                assert not set(e) & set(f)


class TestLocality:
    def test_identity_is_z_local(self):
        ok, report = check_z_local(np.eye(5), Graph(5, ()), 0.0)
        assert ok and report.predicate == "Z"

    def test_adjacency_is_z_local(self):
        g = Graph.ring(8)
        assert check_z_local(g.adjacency(), g, 0.0)[0]

    def test_walk_is_z_local_on_doubled_ring(self, walk20):
        assert check_z_local(walk20.U, walk20.graph, 0.0)[0]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            check_z_local(np.eye(3), Graph.ring(4))

    def test_monotone_in_tol(self, rng):
        g = Graph.ring(6)
        m = g.adjacency() + 1e-3 * rng.standard_normal((6, 6))
        worst = check_z_local(m, g, 0.0)[1].worst_violation
        assert not check_z_local(m, g, 0.5 * worst)[0]
        for tol in (worst, 2 * worst, 1.0):
            assert check_z_local(m, g, tol)[0]

    def test_decay_profile_and_kappa(self):
        g = Graph.path(8)
        d = distance_matrix(g)
        m = np.exp(-0.7 * d)
        report = check_z_local(m, g, 1.0)[1]
        assert set(report.profile) == set(range(8))
        assert report.kappa == pytest.approx(0.7, abs=1e-12)

    def test_kappa_withheld_on_poor_fit(self):
        kappa, resid = fit_decay_rate({1: 1.0, 2: 1e-8, 3: 1.0, 4: 1e-8})
        assert resid > 0.5
        g = Graph.path(5)
        m = np.where(distance_matrix(g) % 2 == 1, 1.0, 1e-8)
        assert check_z_local(m, g, 1.0)[1].kappa is None

    def test_unreachable_pairs_reported_separately(self):
        g = Graph(3, ((0, 1),))
        m = np.ones((3, 3))
        report = check_z_local(m, g, 0.0)[1]
        assert set(report.profile) == {0, 1}
        assert report.unreachable_max == 1.0

    def test_c_local_identity(self):
        assert check_c_local(np.eye(4), Graph(4, ()), [[0], [1], [2], [3]])

    def test_c_local_rejects_bad_partition(self):
        with pytest.raises(InvalidPartitionError):
            check_c_local(np.eye(3), Graph.ring(3), [[0], [1]])
        with pytest.raises(InvalidPartitionError):
            check_c_local(np.eye(3), Graph.ring(3), [[0, 1], [1, 2]])

    def test_c_local_needs_adjacent_pairs(self):
        g = Graph.path(3)
        m = np.eye(3)
        assert check_c_local(m, g, [[0, 1], [2]])
        assert not check_c_local(m, g, [[0, 2], [1]])

    def test_c_local_block_structure(self):
        g = Graph.path(4)
        m = np.eye(4)
        m[1, 2] = m[2, 1] = 0.5
        assert check_c_local(m, g, [[0], [1, 2], [3]])
        assert not check_c_local(m, g, [[0, 1], [2, 3]])

    def test_c_local_with_vertex_map(self, walk20):
        # both coin states of one site form a single on-vertex block
        part = [[v, v + 20] for v in range(20)]
        block = np.kron(np.eye(2), np.eye(20)) + np.kron([[0, 1], [1, 0]], np.eye(20))
        assert check_c_local(block, Graph.ring(20), part, vertex_of=walk20.vertex_of)

    def test_h_local(self):
        g = Graph.ring(5)
        assert check_h_local(0.5 * g.adjacency(), g)[0]
        assert not check_h_local(3 * g.adjacency(), g)[0]
