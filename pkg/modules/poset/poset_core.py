"""
Finite T0-spaces as partial orders.

A Space stores the specialisation order x <= y (closure{x} in closure{y}).
Open sets are up-sets, closed sets are down-sets and locally closed sets are
the convex ones. Subsets are bitmasks internally; PointSet wraps a mask
together with its space at the API boundary.

Hasse edges point downwards: (y, x) is an edge iff x is covered by y.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from common.errors import CycleDetected, MalformedInput

logger = logging.getLogger(__name__)


# =============================================================================
# Bitmask helpers
# =============================================================================

def bits_of(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        mask |= 1 << p
    return mask


def members_of(mask: int) -> Tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_point(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def subset_sort_key(mask: int) -> Tuple[int, Tuple[int, ...]]:
    """Canonical order on subsets: by size, then by sorted member tuple."""
    return popcount(mask), members_of(mask)


# =============================================================================
# Space
# =============================================================================

class Space:
    """
    Immutable finite T0-space.

    Args:
        labels: display name per point
        below: below[x] is the bitmask of all y with y <= x (x included)
    """

    def __init__(self, labels: Sequence[str], below: Sequence[int]):
        self.labels: Tuple[str, ...] = tuple(str(l) for l in labels)
        self.n_points: int = len(self.labels)
        self.below: Tuple[int, ...] = tuple(below)
        above = [0] * self.n_points
        for x in range(self.n_points):
            for y in members_of(self.below[x]):
                above[y] |= 1 << x
        self.above: Tuple[int, ...] = tuple(above)
        self.full: int = (1 << self.n_points) - 1

    def __repr__(self) -> str:
        return f"Space({self.n_points} points, {len(self.hasse_edge_list)} Hasse edges)"

    def __eq__(self, other) -> bool:
        return isinstance(other, Space) and self.labels == other.labels and self.below == other.below

    def __hash__(self) -> int:
        return hash((self.labels, self.below))

    # -------------------------------------------------------------------------
    # Order data
    # -------------------------------------------------------------------------

    def leq_point(self, x: int, y: int) -> bool:
        return bool(self.below[y] >> x & 1)

    @cached_property
    def leq(self) -> np.ndarray:
        """Boolean matrix with leq[x, y] = (x <= y)."""
        out = np.zeros((self.n_points, self.n_points), dtype=bool)
        for y in range(self.n_points):
            for x in members_of(self.below[y]):
                out[x, y] = True
        return out

    @cached_property
    def lower_covers(self) -> Tuple[int, ...]:
        covers = []
        for y in range(self.n_points):
            strict = self.below[y] & ~(1 << y)
            mask = 0
            for x in members_of(strict):
                # x is covered by y when nothing strictly between
                between = self.above[x] & strict & ~(1 << x)
                if not between:
                    mask |= 1 << x
            covers.append(mask)
        return tuple(covers)

    @cached_property
    def upper_covers(self) -> Tuple[int, ...]:
        covers = [0] * self.n_points
        for y in range(self.n_points):
            for x in members_of(self.lower_covers[y]):
                covers[x] |= 1 << y
        return tuple(covers)

    @cached_property
    def hasse_edge_list(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((y, x) for y in range(self.n_points) for x in members_of(self.lower_covers[y]))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise MalformedInput(f"unknown point label {label!r}")

    # -------------------------------------------------------------------------
    # Subset calculus on masks
    # -------------------------------------------------------------------------

    def up(self, mask: int) -> int:
        out = 0
        for x in members_of(mask):
            out |= self.above[x]
        return out

    def down(self, mask: int) -> int:
        out = 0
        for x in members_of(mask):
            out |= self.below[x]
        return out

    def is_open(self, mask: int) -> bool:
        return self.up(mask) == mask

    def is_closed(self, mask: int) -> bool:
        return self.down(mask) == mask

    def hull(self, mask: int) -> int:
        return self.up(mask) & self.down(mask)

    def is_locally_closed(self, mask: int) -> bool:
        return self.hull(mask) == mask

    def is_open_in(self, u: int, y: int) -> bool:
        """U relatively open in Y (U a subset of Y)."""
        return u & ~y == 0 and self.up(u) & y == u

    def is_closed_in(self, c: int, y: int) -> bool:
        return c & ~y == 0 and self.down(c) & y == c

    def components(self, mask: int) -> List[int]:
        """Components of the Hasse graph restricted to the mask, ordered by least point."""
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                x = lowest_point(frontier)
                frontier &= frontier - 1
                new = (self.lower_covers[x] | self.upper_covers[x]) & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def is_connected(self, mask: int) -> bool:
        return mask != 0 and len(self.components(mask)) == 1

    @cached_property
    def locally_closed_masks(self) -> Tuple[int, ...]:
        """Every non-empty locally closed subset, canonically ordered."""
        if self.n_points > 20:
            raise MalformedInput("subset enumeration is limited to 20 points")
        found = [m for m in range(1, self.full + 1) if self.is_locally_closed(m)]
        return tuple(sorted(found, key=subset_sort_key))

    @cached_property
    def lc_connected_masks(self) -> Tuple[int, ...]:
        return tuple(m for m in self.locally_closed_masks if self.is_connected(m))

    def relatively_open_masks(self, y: int) -> List[int]:
        """All relatively open subsets of Y, empty set and Y included."""
        pts = members_of(y)
        out = []
        for r in range(len(pts) + 1):
            for combo in itertools.combinations(pts, r):
                u = bits_of(combo)
                if self.up(u) & y == u:
                    out.append(u)
        return out

    def name(self, mask: int) -> str:
        """Compact name: concatenated labels when all are single characters."""
        pts = members_of(mask)
        if not pts:
            return "{}"
        labels = [self.labels[p] for p in pts]
        if all(len(l) == 1 for l in labels):
            return "".join(labels)
        return "{" + ",".join(labels) + "}"

    def pointset(self, mask: int) -> "PointSet":
        return PointSet(self, mask)

    def subset(self, labels: Iterable[str]) -> "PointSet":
        return PointSet(self, bits_of(self.index_of(l) for l in labels))

    def parse_subset(self, text: str) -> "PointSet":
        """Parse "134", "{1,3,4}" or "1,3,4" into a PointSet."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        if "," in text:
            parts = [p.strip() for p in text.split(",") if p.strip()]
        elif all(len(l) == 1 for l in self.labels):
            parts = list(text)
        else:
            parts = [text]
        return self.subset(parts)


@dataclass(frozen=True)
class PointSet:
    """Subset of a space's points."""
    space: Space
    bits: int

    def __iter__(self) -> Iterator[int]:
        return iter(members_of(self.bits))

    def __len__(self) -> int:
        return popcount(self.bits)

    def __contains__(self, point: int) -> bool:
        return bool(self.bits >> point & 1)

    def __str__(self) -> str:
        return self.space.name(self.bits)

    def __repr__(self) -> str:
        return f"PointSet({self})"

    @property
    def members(self) -> Tuple[int, ...]:
        return members_of(self.bits)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.space.labels[p] for p in self.members)

    def sort_key(self):
        return subset_sort_key(self.bits)


@dataclass(frozen=True)
class SubsetStatus:
    open: bool
    closed: bool
    locally_closed: bool
    connected: bool
    nonempty: bool

    @property
    def in_lc_star(self) -> bool:
        return self.locally_closed and self.connected and self.nonempty


@dataclass(frozen=True)
class HullsAndBoundaries:
    closure: PointSet
    open_hull: PointSet
    closed_boundary: PointSet
    open_boundary: PointSet


@dataclass(frozen=True)
class Degrees:
    unoriented: int
    oriented: int


@dataclass(frozen=True)
class MonotoneMap:
    """Candidate map of spaces; use is_monotone_map to check continuity."""
    source: Space
    target: Space
    assignment: Tuple[int, ...]

    def __call__(self, point: int) -> int:
        return self.assignment[point]

    def image(self, mask: int) -> int:
        return bits_of(self.assignment[p] for p in members_of(mask))

    def preimage(self, mask: int) -> int:
        return bits_of(p for p, q in enumerate(self.assignment) if mask >> q & 1)

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        """other after self."""
        return MonotoneMap(self.source, other.target, tuple(other.assignment[q] for q in self.assignment))


# =============================================================================
# Constructors
# =============================================================================

def space_from_relations(n: int, pairs: Iterable[Tuple[int, int]],
                         labels: Optional[Sequence[str]] = None) -> Space:
    """
    Build the space whose order is generated by `pairs`.

    Args:
        n: number of points
        pairs: (lesser, greater) index pairs, 0-based
        labels: point names, default "1".."n"

    Raises:
        CycleDetected: the reflexive-transitive closure is not antisymmetric
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    for lesser, greater in pairs:
        if not (0 <= lesser < n and 0 <= greater < n):
            raise MalformedInput(f"relation ({lesser}, {greater}) out of range for {n} points")
        if lesser != greater:
            graph.add_edge(greater, lesser)
    if labels is None:
        labels = [str(i + 1) for i in range(n)]
    if len(labels) != n:
        raise MalformedInput("label count does not match point count")
    return _space_from_digraph(graph, list(range(n)), labels)


def space_from_graph(g: nx.DiGraph) -> Space:
    """
    Space of a directed graph: x <= y iff there is a directed path from y to x.

    Node order is the graph's insertion order; a 'label' node attribute is used
    when present.
    """
    nodes = list(g.nodes)
    labels = [str(g.nodes[v].get("label", v)) for v in nodes]
    relabel = {v: i for i, v in enumerate(nodes)}
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(nodes)))
    graph.add_edges_from((relabel[a], relabel[b]) for a, b in g.edges if a != b)
    if any(a == b for a, b in g.edges):
        raise CycleDetected("graph has a loop")
    return _space_from_digraph(graph, list(range(len(nodes))), labels)


def _space_from_digraph(graph: nx.DiGraph, nodes: List[int], labels: Sequence[str]) -> Space:
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleDetected(f"relations are not antisymmetric, cycle through {[labels[a] for a, _ in cycle]}")
    below = []
    for v in nodes:
        below.append(bits_of(nx.descendants(graph, v)) | (1 << v))
    return Space(labels, below)


def space_from_json(data: Dict) -> Space:
    """Build a space from {"points": [...], "relations": [[lesser, greater], ...]}."""
    try:
        points = [str(p) for p in data["points"]]
        relations = data.get("relations", [])
    except (KeyError, TypeError, AttributeError) as e:
        raise MalformedInput(f"space JSON needs 'points' and 'relations': {e}")
    if len(set(points)) != len(points):
        raise MalformedInput("duplicate point labels")
    index = {p: i for i, p in enumerate(points)}
    pairs = []
    for rel in relations:
        try:
            lesser, greater = (str(r) for r in rel)
            pairs.append((index[lesser], index[greater]))
        except (KeyError, ValueError, TypeError):
            raise MalformedInput(f"bad relation entry {rel!r}")
    return space_from_relations(len(points), pairs, points)


def space_to_json(s: Space) -> Dict:
    """Serialise with Hasse edges as generating relations."""
    return {
        "points": list(s.labels),
        "relations": [[s.labels[x], s.labels[y]] for y, x in s.hasse_edge_list],
    }


# =============================================================================
# Graph-theoretic vocabulary
# =============================================================================

def hasse_edges(s: Space) -> nx.DiGraph:
    """Hasse diagram: edge (y, x) iff x is covered by y."""
    g = nx.DiGraph()
    for v in range(s.n_points):
        g.add_node(v, label=s.labels[v])
    g.add_edges_from(s.hasse_edge_list)
    return g


def is_transitively_reduced(g: nx.DiGraph) -> bool:
    if not nx.is_directed_acyclic_graph(g):
        return False
    return set(nx.transitive_reduction(g).edges) == set(g.edges)


def opposite_space(s: Space) -> Space:
    return Space(s.labels, s.above)


def disjoint_union(spaces: Sequence[Space]) -> Space:
    """Block-diagonal union; labels are prefixed with the summand index on clashes."""
    all_labels = [l for s in spaces for l in s.labels]
    prefix = len(set(all_labels)) != len(all_labels)
    labels, below = [], []
    offset = 0
    for k, s in enumerate(spaces):
        for x in range(s.n_points):
            labels.append(f"{k}:{s.labels[x]}" if prefix else s.labels[x])
            below.append(s.below[x] << offset)
        offset += s.n_points
    return Space(labels, below)


def induced_subspace(s: Space, y: PointSet) -> Tuple[Space, Tuple[int, ...]]:
    """Subspace on Y; returns the space and the inclusion (new index -> old index)."""
    pts = y.members
    index = {p: i for i, p in enumerate(pts)}
    below = [bits_of(index[q] for q in members_of(s.below[p] & y.bits)) for p in pts]
    return Space([s.labels[p] for p in pts], below), pts


def subset_status(s: Space, y: PointSet) -> SubsetStatus:
    m = y.bits
    return SubsetStatus(
        open=s.is_open(m),
        closed=s.is_closed(m),
        locally_closed=s.is_locally_closed(m),
        connected=s.is_connected(m),
        nonempty=m != 0,
    )


def lc_hull(s: Space, y: PointSet) -> PointSet:
    return PointSet(s, s.hull(y.bits))


def hulls_and_boundaries(s: Space, y: PointSet) -> HullsAndBoundaries:
    closure = s.down(y.bits)
    open_hull = s.up(y.bits)
    return HullsAndBoundaries(
        closure=PointSet(s, closure),
        open_hull=PointSet(s, open_hull),
        closed_boundary=PointSet(s, closure & ~y.bits),
        open_boundary=PointSet(s, open_hull & ~y.bits),
    )


def connected_components(s: Space, y: PointSet) -> List[PointSet]:
    return [PointSet(s, c) for c in s.components(y.bits)]


def enumerate_lc_connected(s: Space) -> List[PointSet]:
    """LC*(X): connected, non-empty, locally closed subsets in canonical order."""
    return [PointSet(s, m) for m in s.lc_connected_masks]


def maximal_exchange_set(s: Space, y: PointSet, z: PointSet) -> PointSet:
    """Largest subset of Y & Z that is closed in Y and open in Z."""
    d = y.bits & z.bits
    while True:
        bad = 0
        for x in members_of(d):
            if s.below[x] & y.bits & ~d or s.above[x] & z.bits & ~d:
                bad |= 1 << x
        if not bad:
            return PointSet(s, d)
        d &= ~bad


def is_monotone_map(f: MonotoneMap) -> bool:
    src, tgt = f.source, f.target
    if len(f.assignment) != src.n_points:
        return False
    if any(not 0 <= q < tgt.n_points for q in f.assignment):
        return False
    for y in range(src.n_points):
        for x in members_of(src.below[y]):
            if not tgt.leq_point(f.assignment[x], f.assignment[y]):
                return False
    return True


def degrees(s: Space, v: int) -> Degrees:
    out_deg = popcount(s.lower_covers[v])
    in_deg = popcount(s.upper_covers[v])
    return Degrees(unoriented=out_deg + in_deg, oriented=out_deg - in_deg)


def is_isomorphic(s: Space, t: Space) -> bool:
    if s.n_points != t.n_points or len(s.hasse_edge_list) != len(t.hasse_edge_list):
        return False
    return nx.is_isomorphic(hasse_edges(s), hasse_edges(t))


def find_isomorphism(s: Space, t: Space) -> Optional[Dict[int, int]]:
    """Point map s -> t preserving Hasse edges, or None."""
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(hasse_edges(s), hasse_edges(t))
    for mapping in matcher.isomorphisms_iter():
        return dict(mapping)
    return None


def canonical_key(s: Space) -> Tuple[int, ...]:
    """Permutation-minimal encoding of the order; intended for <= 7 points."""
    n = s.n_points
    best = None
    for perm in itertools.permutations(range(n)):
        # perm[new] = old
        inv = [0] * n
        for new, old in enumerate(perm):
            inv[old] = new
        key = tuple(bits_of(inv[x] for x in members_of(s.below[perm[new]])) for new in range(n))
        if best is None or key < best:
            best = key
    return best or ()
