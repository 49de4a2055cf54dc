"""
Canonical generators and relations of NT*(X).

Generators are the extension, restriction and boundary transformations
between connected non-empty locally closed sets. Relations are stated for
arbitrary locally closed sets and expanded over connected components: a
canonical map between locally closed sets becomes a matrix of maps between
their components, with identities where components coincide and zero
boundary entries where the union of two components is disconnected.

Paths are tuples of generator indices in the order they are applied.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from common.errors import FktError
from modules.poset.poset_core import (
    MonotoneMap, PointSet, Space, bits_of, members_of, subset_sort_key,
)

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]
Terms = Tuple[Tuple[int, Path], ...]

KIND_ORDER = {"i": 0, "r": 1, "d": 2}


# =============================================================================
# Arrows
# =============================================================================

@dataclass(frozen=True)
class Arrow:
    """
    Canonical transformation.

    i: source U open in target Y; r: target C closed in source Y;
    d: boundary map from C to U for a boundary pair (U, C), odd.
    """
    kind: str
    source: PointSet
    target: PointSet

    @property
    def degree(self) -> int:
        return 1 if self.kind == "d" else 0

    @property
    def name(self) -> str:
        return f"{self.kind}:{self.source}->{self.target}"

    def sort_key(self):
        return KIND_ORDER[self.kind], self.source.sort_key(), self.target.sort_key()

    def __str__(self) -> str:
        return self.name


def canonical_generators(s: Space) -> List[Arrow]:
    """All proper i, r and d arrows between objects of LC*(X), canonically ordered."""
    objects = s.lc_connected_masks
    arrows = []
    for y in objects:
        for u in objects:
            if u == y or u & ~y:
                continue
            if s.is_open_in(u, y):
                arrows.append(Arrow("i", PointSet(s, u), PointSet(s, y)))
            if s.is_closed_in(u, y):
                arrows.append(Arrow("r", PointSet(s, y), PointSet(s, u)))
    connected = set(objects)
    for u in objects:
        for c in objects:
            if u & c or (u | c) not in connected:
                continue
            if s.is_open_in(u, u | c):
                arrows.append(Arrow("d", PointSet(s, c), PointSet(s, u)))
    arrows.sort(key=Arrow.sort_key)
    return arrows


# =============================================================================
# Relations
# =============================================================================

@dataclass(frozen=True)
class Relation:
    """sum(coeff * path) = 0 in Hom(source, target)."""
    source: int
    target: int
    terms: Terms
    family: str = field(default="", compare=False)

    def to_text(self, arrows: List[Arrow]) -> str:
        parts = []
        for coeff, path in self.terms:
            word = " . ".join(arrows[g].name for g in reversed(path)) if path else "id"
            parts.append(f"{coeff:+d} {word}")
        return " ".join(parts) + " = 0"


def _normalise_terms(terms: Iterable[Tuple[int, Path]]) -> Terms:
    acc: Dict[Path, int] = {}
    for coeff, path in terms:
        acc[path] = acc.get(path, 0) + coeff
    out = tuple(sorted(((c, p) for p, c in acc.items() if c), key=lambda t: (len(t[1]), t[1])))
    if out and out[0][0] < 0:
        out = tuple((-c, p) for c, p in out)
    return out


# Block matrices of paths: (target component, source component) -> terms
Block = Dict[Tuple[int, int], List[Tuple[int, Path]]]


class RelationBuilder:
    """Expands canonical maps between locally closed sets into component blocks."""

    def __init__(self, s: Space, arrows: List[Arrow]):
        self.s = s
        self.arrows = arrows
        self.index: Dict[Tuple[str, int, int], int] = {
            (a.kind, a.source.bits, a.target.bits): k for k, a in enumerate(arrows)
        }
        self.relations: Dict[Tuple[int, int, Terms], Relation] = {}

    def _gen(self, kind: str, source: int, target: int) -> int:
        try:
            return self.index[(kind, source, target)]
        except KeyError:
            raise FktError(f"missing generator {kind}:{self.s.name(source)}->{self.s.name(target)}")

    def _container(self, part: int, whole: int) -> int:
        for comp in self.s.components(whole):
            if part & comp == part:
                return comp
        raise FktError(f"{self.s.name(part)} is not inside one component of {self.s.name(whole)}")

    def extension(self, u: int, y: int) -> Block:
        block: Block = {}
        for ua in self.s.components(u):
            yb = self._container(ua, y)
            block[(yb, ua)] = [(1, ())] if ua == yb else [(1, (self._gen("i", ua, yb),))]
        return block

    def restriction(self, y: int, c: int) -> Block:
        block: Block = {}
        for cc in self.s.components(c):
            yb = self._container(cc, y)
            block[(cc, yb)] = [(1, ())] if cc == yb else [(1, (self._gen("r", yb, cc),))]
        return block

    def boundary(self, c: int, u: int) -> Block:
        block: Block = {}
        for cc in self.s.components(c):
            for uu in self.s.components(u):
                if self.s.is_connected(uu | cc):
                    block[(uu, cc)] = [(1, (self._gen("d", cc, uu),))]
        return block

    @staticmethod
    def compose(second: Block, first: Block) -> Block:
        """second after first."""
        out: Block = {}
        for (mid, src), terms_a in first.items():
            for (tgt, mid2), terms_b in second.items():
                if mid != mid2:
                    continue
                entry = out.setdefault((tgt, src), [])
                for ca, pa in terms_a:
                    for cb, pb in terms_b:
                        entry.append((ca * cb, pa + pb))
        return out

    def equate(self, lhs: Block, rhs: Block, family: str):
        """Record lhs - rhs = 0 entrywise."""
        for key in set(lhs) | set(rhs):
            terms = list(lhs.get(key, [])) + [(-c, p) for c, p in rhs.get(key, [])]
            normal = _normalise_terms(terms)
            if not normal:
                continue
            tgt, src = key
            rel_key = (src, tgt, normal)
            if rel_key not in self.relations:
                self.relations[rel_key] = Relation(src, tgt, normal, family)

    def vanish(self, block: Block, family: str):
        self.equate(block, {}, family)


def _subsets(mask: int) -> Iterable[int]:
    pts = members_of(mask)
    for r in range(len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            yield bits_of(combo)


def canonical_relations(s: Space, arrows: Optional[List[Arrow]] = None) -> List[Relation]:
    """
    Instances of the canonical relations, deduplicated and canonically ordered.

    Families: nested extensions (E1), nested restrictions (E2), intersection
    exchange (E3), boundary naturality under i/r (O1-O4), extension morphisms
    including the vanishing sums (O5) and vanishing boundary composites (O6).
    """
    if arrows is None:
        arrows = canonical_generators(s)
    b = RelationBuilder(s, arrows)
    objects = s.lc_connected_masks
    connected = set(objects)

    for y in objects:
        inner = [u for u in objects if u != y and u & ~y == 0]
        opens = [u for u in inner if s.is_open_in(u, y)]
        closeds = [c for c in inner if s.is_closed_in(c, y)]

        for u in opens:
            for v in opens:
                if v != u and v & ~u == 0 and s.is_open_in(v, u):
                    b.equate(b.compose(b.extension(u, y), b.extension(v, u)), b.extension(v, y), "E1")
        for c in closeds:
            for d in closeds:
                if d != c and d & ~c == 0 and s.is_closed_in(d, c):
                    b.equate(b.compose(b.restriction(c, d), b.restriction(y, c)), b.restriction(y, d), "E2")
        for u in opens:
            for c in closeds:
                w = u & c
                lhs = b.compose(b.restriction(y, c), b.extension(u, y))
                rhs = b.compose(b.extension(w, c), b.restriction(u, w)) if w else {}
                b.equate(lhs, rhs, "E3")

    for u in objects:
        for c in objects:
            y = u | c
            if u & c or y not in connected or not s.is_open_in(u, y):
                continue
            delta = b.boundary(c, u)
            # O1: delta_C^U . i_C'^C = delta_C'^U
            for c2 in objects:
                if c2 != c and c2 & ~c == 0 and s.is_open_in(c2, c):
                    b.equate(b.compose(delta, b.extension(c2, c)), b.boundary(c2, u), "O1")
            # O2: r_U^U' . delta_C^U = delta_C^U'
            for u2 in objects:
                if u2 != u and u2 & ~u == 0 and s.is_closed_in(u2, u):
                    b.equate(b.compose(b.restriction(u, u2), delta), b.boundary(c, u2), "O2")
            # O3: i_U'^U . delta_C^U' = delta_C^U for U' u C open in Y
            for u2 in _subsets(u):
                if u2 and u2 != u and s.is_open_in(u2 | c, y):
                    b.equate(b.compose(b.extension(u2, u), b.boundary(c, u2)), delta, "O3")
            # O4: delta_C'^U . r_C^C' = delta_C^U for U u C' closed in Y
            for c2 in _subsets(c):
                if c2 and c2 != c and s.is_closed_in(u | c2, y):
                    b.equate(b.compose(b.boundary(c2, u), b.restriction(c, c2)), delta, "O4")

    # O5: i_U^U' . delta_C^U = delta_C'^U' . r_C^C' for U in U' open in Y
    for y in objects:
        opens = s.relatively_open_masks(y)
        for u in opens:
            for u2 in opens:
                if u == u2 or u & ~u2:
                    continue
                c, c2 = y & ~u, y & ~u2
                lhs = b.compose(b.extension(u, u2), b.boundary(c, u)) if u else {}
                rhs = b.compose(b.boundary(c2, u2), b.restriction(c, c2)) if c2 else {}
                b.equate(lhs, rhs, "O5")

    # O6: delta_W^(Z-W) . delta_(Y-W)^W = 0 for W = Y n Z open in Y, closed in Z
    for y in objects:
        for z in objects:
            w = y & z
            if not w or w == y or w == z:
                continue
            if not (s.is_open_in(w, y) and s.is_closed_in(w, z) and s.is_locally_closed(y | z)):
                continue
            b.vanish(b.compose(b.boundary(w, z & ~w), b.boundary(y & ~w, w)), "O6")

    relations = sorted(
        b.relations.values(),
        key=lambda r: (subset_sort_key(r.source), subset_sort_key(r.target), r.terms),
    )
    logger.debug(f"{len(relations)} relation instances on {len(arrows)} generators")
    return relations


# =============================================================================
# Boundary pairs and pullbacks
# =============================================================================

@dataclass
class BoundaryPairReport:
    is_pair: bool
    complete: bool
    reduced: bool
    extensions: List[Tuple[PointSet, PointSet]]
    sub_pairs: List[Tuple[PointSet, PointSet]]

    @property
    def consistent(self) -> bool:
        """Characterisations agree with the brute-force searches."""
        if not self.is_pair:
            return True
        return self.complete == (not self.extensions) and self.reduced == (not self.sub_pairs)


def _is_nt_pair(s: Space, u: int, c: int) -> bool:
    if not u or not c or u & c:
        return False
    y = u | c
    return (s.is_locally_closed(y) and s.is_open_in(u, y)
            and s.is_connected(u) and s.is_connected(c) and s.is_connected(y))


def boundary_pair_analysis(s: Space, u: PointSet, c: PointSet) -> BoundaryPairReport:
    """Completeness and reducedness, by characterisation and by search."""
    um, cm = u.bits, c.bits
    if not _is_nt_pair(s, um, cm):
        return BoundaryPairReport(False, False, False, [], [])
    y = um | cm
    complete = s.is_open(um) and s.is_closed(cm)
    reduced = s.down(um) & cm == cm and s.up(cm) & um == um

    extensions, sub_pairs = [], []
    for u2 in s.lc_connected_masks:
        for c2 in s.lc_connected_masks:
            if (u2, c2) == (um, cm) or not _is_nt_pair(s, u2, c2):
                continue
            if um & ~u2 == 0 and cm & ~c2 == 0 and s.is_closed_in(um, u2) and s.is_open_in(cm, c2):
                extensions.append((PointSet(s, u2), PointSet(s, c2)))
            if (u2 & ~um == 0 and c2 & ~cm == 0
                    and s.is_open_in(u2 | cm, y) and s.is_closed_in(um | c2, y)):
                sub_pairs.append((PointSet(s, u2), PointSet(s, c2)))
    return BoundaryPairReport(True, complete, reduced, extensions, sub_pairs)


def pullback_objects(f: MonotoneMap) -> Dict[PointSet, PointSet]:
    """Z -> f^-1(Z) on every locally closed subset of the target, empty set included."""
    out = {PointSet(f.target, 0): PointSet(f.source, 0)}
    for z in f.target.locally_closed_masks:
        pre = f.preimage(z)
        if not f.source.is_locally_closed(pre):
            raise FktError(f"preimage of {f.target.name(z)} is not locally closed; map not continuous")
        out[PointSet(f.target, z)] = PointSet(f.source, pre)
    return out
