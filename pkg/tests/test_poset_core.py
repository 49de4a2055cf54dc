"""Tests for finite T0-spaces, subsets and the graph vocabulary."""

import itertools

import networkx as nx
import pytest

from common.errors import CycleDetected, MalformedInput
from modules.poset.builtins import accordion, chain, cycle_space, parse_builtin, x1, x2, x3
from modules.poset.enumerate import describe, enumerate_spaces, spaces_up_to_iso
from modules.poset.poset_core import (
    MonotoneMap, PointSet, canonical_key, connected_components, degrees, disjoint_union,
    enumerate_lc_connected, find_isomorphism, hasse_edges, hulls_and_boundaries, induced_subspace,
    is_isomorphic, is_monotone_map, is_transitively_reduced, lc_hull, maximal_exchange_set,
    opposite_space, space_from_graph, space_from_json, space_from_relations, space_to_json,
    subset_status,
)


def names(s, sets):
    return [str(p) for p in sets]


def brute_force_locally_closed(s, mask: int) -> bool:
    """Y = U \\ V with V inside U, both open."""
    opens = [m for m in range(s.full + 1) if s.is_open(m)]
    return any(v & ~u == 0 and u & ~v == mask for u in opens for v in opens)


# ═══════════════════════════════════════════════════════════════════
# Construction
# ═══════════════════════════════════════════════════════════════════

class TestConstruction:

    def test_x1_from_relations(self):
        s = space_from_relations(4, [(3, 0), (3, 1), (3, 2)])
        assert s == x1()
        assert all(s.leq_point(3, p) for p in range(3))
        assert not s.leq_point(0, 1)

    def test_one_point(self):
        s = space_from_relations(1, [])
        assert s.n_points == 1
        assert s.leq.tolist() == [[True]]

    def test_transitive_closure_is_idempotent(self):
        a = space_from_relations(3, [(0, 1), (1, 2), (0, 2)])
        b = space_from_relations(3, [(0, 1), (1, 2)])
        assert (a.leq == b.leq).all()

    def test_cycle_is_rejected(self):
        with pytest.raises(CycleDetected):
            space_from_relations(2, [(0, 1), (1, 0)])

    def test_out_of_range_relation(self):
        with pytest.raises(MalformedInput):
            space_from_relations(2, [(0, 5)])

    def test_graph_chain(self):
        g = nx.DiGraph([(3, 2), (2, 1)])
        s = space_from_graph(g)
        # node order is insertion order: 3, 2, 1
        assert s.labels == ("3", "2", "1")
        assert s.leq_point(s.index_of("1"), s.index_of("3"))

    def test_graph_pseudocircle(self):
        g = nx.DiGraph()
        g.add_nodes_from(["1^0", "2^0", "1^1", "2^1"])
        g.add_edges_from([("2^0", "1^0"), ("2^0", "1^1"), ("2^1", "1^0"), ("2^1", "1^1")])
        s = space_from_graph(g)
        assert len(s.hasse_edge_list) == 4
        assert is_isomorphic(s, cycle_space(2))

    def test_transitive_chord_gives_same_space(self):
        g = hasse_edges(chain(3))
        chord = g.copy()
        chord.add_edge(2, 0)
        assert space_from_graph(chord).below == space_from_graph(g).below
        assert is_transitively_reduced(g)
        assert not is_transitively_reduced(chord)

    def test_graph_cycle_is_rejected(self):
        with pytest.raises(CycleDetected):
            space_from_graph(nx.DiGraph([(0, 1), (1, 0)]))

    def test_json(self):
        s = space_from_json({"points": ["a", "b", "c"], "relations": [["a", "b"], ["b", "c"]]})
        assert s.leq_point(0, 2)
        assert space_from_json(space_to_json(s)) == s

    @pytest.mark.parametrize("data", [
        {"relations": []},
        {"points": ["a", "a"], "relations": []},
        {"points": ["a"], "relations": [["a", "z"]]},
        {"points": ["a", "b"], "relations": [["a"]]},
    ])
    def test_malformed_json(self, data):
        with pytest.raises(MalformedInput):
            space_from_json(data)


# ═══════════════════════════════════════════════════════════════════
# Hasse diagrams, duality, unions
# ═══════════════════════════════════════════════════════════════════

class TestGraphs:

    def test_chain_hasse(self):
        g = hasse_edges(chain(4))
        assert set(g.edges) == {(3, 2), (2, 1), (1, 0)}

    def test_x3_hasse(self):
        s = x3()
        edges = {(s.labels[a], s.labels[b]) for a, b in s.hasse_edge_list}
        assert edges == {("1", "3"), ("2", "3"), ("3", "4")}

    def test_x2_is_opposite_of_x1(self):
        s = x2()
        edges = {(s.labels[a], s.labels[b]) for a, b in s.hasse_edge_list}
        assert edges == {("4", "1"), ("4", "2"), ("4", "3")}
        assert opposite_space(x1()) == s

    @pytest.mark.parametrize("s", list(spaces_up_to_iso(4)))
    def test_round_trip_and_involution(self, s):
        assert space_from_graph(hasse_edges(s)).below == s.below
        assert opposite_space(opposite_space(s)) == s
        assert is_transitively_reduced(hasse_edges(s))

    def test_chain_self_dual(self):
        assert is_isomorphic(opposite_space(chain(5)), chain(5))

    def test_isomorphism_is_a_monotone_bijection(self):
        src, tgt = opposite_space(chain(5)), chain(5)
        mapping = find_isomorphism(src, tgt)
        f = MonotoneMap(src, tgt, tuple(mapping[v] for v in range(5)))
        assert sorted(f.assignment) == list(range(5))
        assert is_monotone_map(f)
        assert find_isomorphism(x1(), x2()) is None

    def test_disjoint_union(self):
        s = disjoint_union([chain(2), chain(2)])
        assert s.n_points == 4
        assert len(s.hasse_edge_list) == 2
        assert len(s.components(s.full)) == 2
        assert is_isomorphic(disjoint_union([x3()]), x3())


# ═══════════════════════════════════════════════════════════════════
# Subsets
# ═══════════════════════════════════════════════════════════════════

class TestSubsets:

    def test_x3_statuses(self):
        s = x3()
        st = subset_status(s, s.parse_subset("123"))
        assert (st.open, st.closed, st.locally_closed, st.connected) == (True, False, True, True)
        st = subset_status(s, s.parse_subset("34"))
        assert (st.open, st.closed, st.locally_closed, st.connected) == (False, True, True, True)
        st = subset_status(s, PointSet(s, 0))
        assert st.open and st.closed and st.locally_closed and not st.in_lc_star

    @pytest.mark.parametrize("s", [t for n in range(1, 5) for t in spaces_up_to_iso(n)])
    def test_locally_closed_matches_brute_force(self, s):
        for mask in range(s.full + 1):
            assert s.is_locally_closed(mask) == brute_force_locally_closed(s, mask)

    def test_lc_hull(self):
        s = chain(4)
        assert str(lc_hull(s, s.parse_subset("14"))) == "1234"
        t = x3()
        assert str(lc_hull(t, t.parse_subset("14"))) == "134"
        y = t.parse_subset("34")
        assert lc_hull(t, y) == y

    def test_hulls_and_boundaries(self):
        s = x3()
        h = hulls_and_boundaries(s, s.parse_subset("3"))
        assert str(h.closure) == "34"
        assert str(h.open_hull) == "123"
        assert str(h.closed_boundary) == "4"
        assert str(h.open_boundary) == "12"
        clopen = hulls_and_boundaries(s, PointSet(s, s.full))
        assert clopen.closed_boundary.bits == 0 and clopen.open_boundary.bits == 0

    def test_accordion_boundaries(self):
        # 1 < 2 < 3 > 4 < 5 > 6
        s = accordion([3, 2, 2, 2])
        h = hulls_and_boundaries(s, s.parse_subset("34"))
        assert str(h.closure) == "1234"
        assert str(h.open_hull) == "345"

    def test_components(self):
        s = chain(4)
        assert names(s, connected_components(s, s.parse_subset("13"))) == ["1", "3"]
        y = s.parse_subset("23")
        assert connected_components(s, y) == [y]

    def test_connectedness_follows_hasse_edges(self):
        s = chain(4)
        st = subset_status(s, s.parse_subset("13"))
        assert not st.connected and not st.locally_closed
        assert subset_status(s, s.parse_subset("123")).connected

    def test_enumerate_lc_connected_x3(self):
        found = {str(p) for p in enumerate_lc_connected(x3())}
        assert found == {"4", "34", "134", "234", "3", "1234", "13", "23", "123", "1", "2"}

    @pytest.mark.parametrize("n", [1, 2, 4, 6])
    def test_chain_interval_count(self, n):
        assert len(enumerate_lc_connected(chain(n))) == n * (n + 1) // 2

    @pytest.mark.parametrize("s", [t for n in range(1, 5) for t in spaces_up_to_iso(n)])
    def test_lc_star_matches_status(self, s):
        expected = [m for m in range(1, s.full + 1) if subset_status(s, PointSet(s, m)).in_lc_star]
        assert sorted(s.lc_connected_masks) == sorted(expected)

    def test_maximal_exchange_set(self):
        s = x3()
        r = maximal_exchange_set(s, s.parse_subset("1234"), s.parse_subset("34"))
        assert str(r) == "34"
        r = maximal_exchange_set(s, s.parse_subset("4"), s.parse_subset("34"))
        assert r.bits == 0

    def test_parse_subset_forms(self):
        s = x3()
        assert s.parse_subset("{1,3,4}") == s.parse_subset("134")
        c = cycle_space(2)
        assert c.parse_subset("1^1").labels == ("1^1",)
        assert c.parse_subset("{1^0,2^0}").labels == ("1^0", "2^0")
        with pytest.raises(MalformedInput):
            s.parse_subset("9")

    def test_induced_subspace(self):
        s = x3()
        sub, inclusion = induced_subspace(s, s.parse_subset("134"))
        assert sub.labels == ("1", "3", "4")
        assert inclusion == (0, 2, 3)
        assert is_isomorphic(sub, chain(3))


# ═══════════════════════════════════════════════════════════════════
# Maps and degrees
# ═══════════════════════════════════════════════════════════════════

class TestMapsAndDegrees:

    def test_identity_and_collapses_are_monotone(self):
        s = x3()
        assert is_monotone_map(MonotoneMap(s, s, (0, 1, 2, 3)))
        assert is_monotone_map(MonotoneMap(s, s, (2, 2, 2, 2)))
        assert is_monotone_map(MonotoneMap(s, s, (0, 1, 2, 2)))

    def test_swap_on_chain_is_not_monotone(self):
        s = chain(2)
        assert not is_monotone_map(MonotoneMap(s, s, (1, 0)))

    def test_degrees(self):
        s = x1()
        d = degrees(s, s.index_of("4"))
        assert d.unoriented == 3
        c = cycle_space(4)
        for v in range(c.n_points):
            d = degrees(c, v)
            assert d.unoriented == 2 and abs(d.oriented) == 2
        lone = space_from_relations(1, [])
        assert degrees(lone, 0).unoriented == 0 and degrees(lone, 0).oriented == 0

    @pytest.mark.parametrize("s", [t for n in range(1, 6) for t in spaces_up_to_iso(n)])
    def test_oriented_degrees_sum_to_zero(self, s):
        assert sum(degrees(s, v).oriented for v in range(s.n_points)) == 0


# ═══════════════════════════════════════════════════════════════════
# Built-ins and enumeration
# ═══════════════════════════════════════════════════════════════════

class TestBuiltinsAndEnumeration:

    @pytest.mark.parametrize("text,points", [
        ("X1", 4), ("x3", 4), ("S", 4), ("Cn:3", 6), ("On:5", 5), ("W:3,2", 4), ("W:1,3,2,1", 4),
    ])
    def test_parse_builtin(self, text, points):
        assert parse_builtin(text).n_points == points

    @pytest.mark.parametrize("text", ["X9", "Cn:1", "W:3", "W:2,1,2,1", "On:x", "W:"])
    def test_parse_builtin_rejects(self, text):
        with pytest.raises(MalformedInput):
            parse_builtin(text)

    def test_accordion_walk_numbering(self):
        s = accordion([3, 2])
        edges = {(s.labels[a], s.labels[b]) for a, b in s.hasse_edge_list}
        assert edges == {("2", "1"), ("3", "2"), ("3", "4")}

    def test_counts_up_to_isomorphism(self):
        assert [len(spaces_up_to_iso(n)) for n in range(1, 6)] == [1, 2, 5, 16, 63]
        connected = [sum(1 for s in spaces_up_to_iso(n) if s.is_connected(s.full)) for n in range(1, 6)]
        assert connected == [1, 1, 3, 10, 44]

    def test_enumeration_has_no_duplicates(self):
        keys = [canonical_key(s) for s in spaces_up_to_iso(4)]
        assert len(keys) == len(set(keys))

    def test_enumerate_spaces_stream(self):
        sizes = [s.n_points for s in enumerate_spaces(3)]
        assert sizes == sorted(sizes)
        assert len(sizes) == 8
        assert len(list(enumerate_spaces(3, connected_only=True))) == 5

    def test_describe(self):
        assert describe(chain(2)) == "1<2"
        assert describe(space_from_relations(2, [])) == "(discrete)"

    def test_canonical_key_is_invariant(self):
        s = x3()
        for perm in itertools.permutations(range(4)):
            relabelled = space_from_relations(4, [(perm[2], perm[0]), (perm[2], perm[1]), (perm[3], perm[2])])
            assert canonical_key(relabelled) == canonical_key(s)
