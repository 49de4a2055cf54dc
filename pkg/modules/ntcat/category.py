"""
NT*(X) as a presented Z-linear, Z/2-graded category.

Hom groups come from the per-source path enumeration. Every hom set gets a
fixed basis per parity: products i_W^Z . r_Y^W over the components W of the
maximal exchange set in even degree, a named boundary composite in odd
degree when one generates, otherwise the Smith basis with its first nonzero
coordinate made positive.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from common.errors import ObjectMismatch, UnsupportedSpace
from common.intmat import lattice_contains, smith_normal_form, unimodular_inverse
from modules.kgroups.order_complex import GradedAbelianGroup, HomTable
from modules.ntcat.presented import Expr, GeneratorTable, HomPresentation, PathEnumerator
from modules.ntcat.relations import Arrow, Relation, canonical_generators, canonical_relations
from modules.poset.builtins import cycle_space, model_space
from modules.poset.poset_core import (
    PointSet, Space, induced_subspace, is_isomorphic, maximal_exchange_set,
)
from modules.uct.classifier import classify_uct, is_type_a

logger = logging.getLogger(__name__)


# =============================================================================
# Morphisms
# =============================================================================

@dataclass(frozen=True)
class Morphism:
    """Element of Hom(source, target) in the fixed even and odd bases."""
    source: PointSet
    target: PointSet
    even: Tuple[int, ...]
    odd: Tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.even) and not any(self.odd)

    @property
    def degree(self) -> Optional[int]:
        """0 or 1 for homogeneous non-zero morphisms, None otherwise."""
        has_even, has_odd = any(self.even), any(self.odd)
        if has_even and not has_odd:
            return 0
        if has_odd and not has_even:
            return 1
        return None

    def _check(self, other: "Morphism"):
        if (self.source, self.target) != (other.source, other.target):
            raise ObjectMismatch(f"cannot add {self.source}->{self.target} and {other.source}->{other.target}")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check(other)
        return Morphism(self.source, self.target,
                        tuple(a + b for a, b in zip(self.even, other.even)),
                        tuple(a + b for a, b in zip(self.odd, other.odd)))

    def __neg__(self) -> "Morphism":
        return self.scale(-1)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, k: int) -> "Morphism":
        return Morphism(self.source, self.target, tuple(k * a for a in self.even), tuple(k * a for a in self.odd))

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.even + self.odd


@dataclass
class HomBasis:
    """Chosen basis of one hom set; vectors live in the source's path enumeration."""
    presentations: Tuple[HomPresentation, HomPresentation]
    vectors: Tuple[List[Expr], List[Expr]]
    to_preferred: Tuple[List[List[int]], List[List[int]]]
    names: Tuple[List[str], List[str]]

    def group(self) -> GradedAbelianGroup:
        even, odd = self.presentations
        return GradedAbelianGroup(even.free_rank, odd.free_rank, even.torsion, odd.torsion)


@dataclass(frozen=True)
class Indecomposable:
    """Generator of Hom(Y, Z) / rad^2(Y, Z); arrow is set when it equals a canonical one."""
    source: PointSet
    target: PointSet
    morphism: Morphism
    arrow: Optional[Arrow] = None
    order: int = 0

    @property
    def name(self) -> str:
        if self.arrow is not None:
            return self.arrow.name
        return f"m:{self.source}->{self.target}"


# =============================================================================
# Category
# =============================================================================

class PresentedCategory:
    """
    Objects LC*(X), generating arrows, relations and computed hom groups.

    Build with build_presented_category.
    """

    def __init__(self, space: Space, generators: List[Arrow], relations: List[Relation],
                 position: Dict[int, int]):
        self.space = space
        self.objects: List[PointSet] = [PointSet(space, m) for m in space.lc_connected_masks]
        self.index: Dict[int, int] = {o.bits: k for k, o in enumerate(self.objects)}
        self.generators = generators
        self.relations = relations
        self.position = position
        self.arrow_index: Dict[Tuple[str, int, int], int] = {
            (a.kind, a.source.bits, a.target.bits): k for k, a in enumerate(generators)
        }
        self.table = self._generator_table()
        self.enumerators: List[PathEnumerator] = []
        self.bases: Dict[Tuple[int, int], HomBasis] = {}
        self._path_cache: Dict[Tuple[int, int], Tuple[List[List[Tuple[int, Tuple[int, ...]]]], ...]] = {}

    def _generator_table(self) -> GeneratorTable:
        n = len(self.objects)
        out = [[] for _ in range(n)]
        for k, a in enumerate(self.generators):
            out[self.index[a.source.bits]].append(k)
        rels = [[] for _ in range(n)]
        for rel in self.relations:
            rels[self.index[rel.source]].append((self.index[rel.target], rel.terms))
        return GeneratorTable(
            n_objects=n,
            source=tuple(self.index[a.source.bits] for a in self.generators),
            target=tuple(self.index[a.target.bits] for a in self.generators),
            degree=tuple(a.degree for a in self.generators),
            out_generators=tuple(tuple(x) for x in out),
            relations_at=tuple(tuple(x) for x in rels),
        )

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    def _enumerate(self):
        for k in range(len(self.objects)):
            self.enumerators.append(PathEnumerator(self.table, k).run())

    def path(self, *steps: Tuple[str, int, int]) -> Optional[Tuple[int, ...]]:
        """Generator path for (kind, source, target) steps; identity steps are skipped."""
        out = []
        for kind, src, tgt in steps:
            if src == tgt:
                continue
            g = self.arrow_index.get((kind, src, tgt))
            if g is None:
                return None
            out.append(g)
        return tuple(out)

    def _component_key(self, mask: int):
        pts = [p for p in range(self.space.n_points) if mask >> p & 1]
        return min(self.position.get(p, p) for p in pts)

    def _even_candidates(self, y: int, z: int) -> List[Tuple[str, Tuple[int, ...]]]:
        s = self.space
        exchange = maximal_exchange_set(s, PointSet(s, y), PointSet(s, z)).bits
        out = []
        for w in s.components(exchange):
            p = self.path(("r", y, w), ("i", w, z))
            if p is None:
                return []
            out.append((f"i:{s.name(w)}->{s.name(z)} . r:{s.name(y)}->{s.name(w)}", p))
        return out

    def _odd_candidates(self, y: int, z: int) -> List[Tuple[str, Tuple[int, ...]]]:
        s = self.space
        out = []
        rest_y = y & ~z
        if rest_y and s.is_connected(rest_y) and s.is_closed_in(rest_y, y):
            p = self.path(("r", y, rest_y), ("d", rest_y, z))
            if p is not None:
                out.append((f"d:{s.name(rest_y)}->{s.name(z)} . r:{s.name(y)}->{s.name(rest_y)}", p))
        for k in sorted(s.components(rest_y), key=self._component_key):
            p = self.path(("r", y, k), ("d", k, z))
            if p is not None:
                out.append((f"d:{s.name(k)}->{s.name(z)} . r:{s.name(y)}->{s.name(k)}", p))
        for k in sorted(s.components(z & ~y), key=self._component_key):
            p = self.path(("d", y, k), ("i", k, z))
            if p is not None:
                out.append((f"i:{s.name(k)}->{s.name(z)} . d:{s.name(y)}->{s.name(k)}", p))
        return out

    def _choose_basis(self, src: int, tgt: int, parity: int, pres: HomPresentation):
        enum = self.enumerators[src]
        f = pres.free_rank
        y, z = self.objects[src].bits, self.objects[tgt].bits
        if f == 0:
            return [], [], []

        candidates = self._even_candidates(y, z) if parity == 0 else self._odd_candidates(y, z)
        if parity == 0 and len(candidates) == f:
            vectors = [enum.apply_path(p, {0: 1}) for _, p in candidates]
            matrix = [pres.coords(v) for v in vectors]
            inverse = unimodular_inverse(matrix)
            if inverse is not None:
                return vectors, inverse, [name for name, _ in candidates]
        if parity == 1 and f == 1:
            for name, p in candidates:
                v = enum.apply_path(p, {0: 1})
                c = pres.coords(v)
                if c and abs(c[0]) == 1:
                    return [v], [[c[0]]], [name]

        vectors, rows = [], []
        for j in range(f):
            v = pres.basis_vector(j)
            first = next((v[sym] for sym in pres.symbols if v.get(sym)), 1)
            sign = 1 if first > 0 else -1
            vectors.append({sym: sign * c for sym, c in v.items()})
            rows.append([sign if i == j else 0 for i in range(f)])
        names = [f"b{j}:{self.objects[src]}->{self.objects[tgt]}" for j in range(f)]
        return vectors, unimodular_inverse(rows), names

    def _build_bases(self):
        for src, enum in enumerate(self.enumerators):
            for tgt in range(len(self.objects)):
                pres = (enum.presentation(tgt, 0), enum.presentation(tgt, 1))
                chosen = [self._choose_basis(src, tgt, p, pres[p]) for p in (0, 1)]
                self.bases[(src, tgt)] = HomBasis(
                    presentations=pres,
                    vectors=(chosen[0][0], chosen[1][0]),
                    to_preferred=(chosen[0][1], chosen[1][1]),
                    names=(chosen[0][2], chosen[1][2]),
                )
                if pres[0].torsion or pres[1].torsion:
                    logger.warning(f"⚠️ Hom({self.objects[src]},{self.objects[tgt]}) has torsion; "
                                   f"morphisms track the free part only")

    # -------------------------------------------------------------------------
    # Hom groups and morphisms
    # -------------------------------------------------------------------------

    def obj(self, y) -> int:
        if isinstance(y, PointSet):
            y = y.bits
        if isinstance(y, str):
            y = self.space.parse_subset(y).bits
        try:
            return self.index[y]
        except KeyError:
            raise ObjectMismatch(f"{self.space.name(y)} is not an object of the category")

    def hom_group(self, y, z) -> GradedAbelianGroup:
        return self.bases[(self.obj(y), self.obj(z))].group()

    def hom_table(self) -> HomTable:
        table = HomTable(self.space, list(self.objects))
        for y in self.objects:
            for z in self.objects:
                table.groups[(y.bits, z.bits)] = self.hom_group(y, z)
        return table

    def _from_expr(self, src: int, tgt: int, expr: Expr) -> Morphism:
        basis = self.bases[(src, tgt)]
        parity = self.enumerators[src].parity
        coords = []
        for p in (0, 1):
            part = {s: c for s, c in expr.items() if parity[s] == p}
            raw = basis.presentations[p].coords(part)
            m = basis.to_preferred[p]
            coords.append(tuple(sum(raw[i] * m[i][j] for i in range(len(raw))) for j in range(len(raw))))
        return Morphism(self.objects[src], self.objects[tgt], coords[0], coords[1])

    def _to_expr(self, m: Morphism) -> Expr:
        basis = self.bases[(self.obj(m.source), self.obj(m.target))]
        out: Expr = {}
        for p, coeffs in ((0, m.even), (1, m.odd)):
            for c, vec in zip(coeffs, basis.vectors[p]):
                if c:
                    for s, v in vec.items():
                        out[s] = out.get(s, 0) + c * v
        return {s: c for s, c in out.items() if c}

    def zero(self, y, z) -> Morphism:
        basis = self.bases[(self.obj(y), self.obj(z))]
        return Morphism(self.objects[self.obj(y)], self.objects[self.obj(z)],
                        (0,) * basis.presentations[0].free_rank, (0,) * basis.presentations[1].free_rank)

    def identity(self, y) -> Morphism:
        k = self.obj(y)
        return self._from_expr(k, k, {0: 1})

    def morphism_from_path(self, y, path: Sequence[int]) -> Morphism:
        src = self.obj(y)
        tgt = self.table.target[path[-1]] if path else src
        return self._from_expr(src, tgt, self.enumerators[src].apply_path(path, {0: 1}))

    def generator(self, k: int) -> Morphism:
        a = self.generators[k]
        return self.morphism_from_path(a.source, (k,))

    def arrow_morphism(self, kind: str, source, target) -> Morphism:
        src, tgt = self.objects[self.obj(source)].bits, self.objects[self.obj(target)].bits
        if src == tgt:
            return self.identity(source)
        g = self.arrow_index.get((kind, src, tgt))
        if g is None:
            raise ObjectMismatch(f"no arrow {kind}:{self.space.name(src)}->{self.space.name(tgt)}")
        return self.generator(g)

    def basis_morphisms(self, y, z) -> List[Morphism]:
        zero = self.zero(y, z)
        out = []
        for j in range(len(zero.even)):
            out.append(Morphism(zero.source, zero.target, tuple(int(i == j) for i in range(len(zero.even))), zero.odd))
        for j in range(len(zero.odd)):
            out.append(Morphism(zero.source, zero.target, zero.even, tuple(int(i == j) for i in range(len(zero.odd)))))
        return out

    def _basis_paths(self, src: int, tgt: int):
        key = (src, tgt)
        if key not in self._path_cache:
            enum = self.enumerators[src]
            basis = self.bases[key]
            self._path_cache[key] = tuple(
                [[(c, enum.word[s]) for s, c in vec.items()] for vec in basis.vectors[p]] for p in (0, 1)
            )
        return self._path_cache[key]

    def expand(self, m: Morphism) -> List[Tuple[int, Tuple[int, ...]]]:
        """m as an integer combination of paths of generators."""
        paths = self._basis_paths(self.obj(m.source), self.obj(m.target))
        out = []
        for p, coeffs in ((0, m.even), (1, m.odd)):
            for c, expansion in zip(coeffs, paths[p]):
                if c:
                    out.extend((c * d, word) for d, word in expansion)
        return out

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """g after f."""
        if f.target != g.source:
            raise ObjectMismatch(f"cannot compose {g.source}->{g.target} after {f.source}->{f.target}")
        x, z = self.obj(f.source), self.obj(g.target)
        enum = self.enumerators[x]
        v = self._to_expr(f)
        out: Expr = {}
        if v:
            for d, word in self.expand(g):
                for s, e in enum.apply_path(word, v).items():
                    out[s] = out.get(s, 0) + d * e
        return self._from_expr(x, z, {s: c for s, c in out.items() if c})

    def relation_value(self, rel: Relation) -> Morphism:
        total = self.zero(rel.source, rel.target)
        for coeff, path in rel.terms:
            total = total + self.morphism_from_path(rel.source, path).scale(coeff)
        return total

    def relations_text(self) -> List[str]:
        return [rel.to_text(self.generators) for rel in self.relations]


# =============================================================================
# Builder and derived structure
# =============================================================================

def _is_supported(s: Space) -> bool:
    models = [model_space(name) for name in ("X1", "X2", "X3", "X4", "S")] + [cycle_space(2)]
    for comp in s.components(s.full):
        sub, _ = induced_subspace(s, PointSet(s, comp))
        if is_type_a(sub) is not None:
            continue
        if not any(is_isomorphic(sub, m) for m in models):
            return False
    return True


def build_presented_category(s: Space) -> PresentedCategory:
    """
    Build NT*(X) for accordions (componentwise) and for X1..X4, S, C2.

    Raises:
        UnsupportedSpace: canonical relations are not known to present NT*(X)
    """
    if not _is_supported(s):
        raise UnsupportedSpace("NT*(X) is presented only for accordions and the spaces X1-X4, S, C2")
    position: Dict[int, int] = {}
    verdict = classify_uct(s)
    if verdict.holds:
        for _, form in verdict.components:
            position.update(form.position)

    generators = canonical_generators(s)
    relations = canonical_relations(s, generators)
    c = PresentedCategory(s, generators, relations, position)
    c._enumerate()
    c._build_bases()
    logger.info(f"✅ NT* presented: {len(c.objects)} objects, {len(generators)} generators, "
                f"{len(relations)} relations")
    return c


def rad2_rows(c: PresentedCategory, y: int, z: int, parity: int) -> List[List[int]]:
    """Coordinates of all composites Y -> W -> Z through a third object."""
    rows = []
    for w in range(len(c.objects)):
        if w in (y, z):
            continue
        firsts = c.basis_morphisms(c.objects[y], c.objects[w])
        if not firsts:
            continue
        seconds = c.basis_morphisms(c.objects[w], c.objects[z])
        for f in firsts:
            for g in seconds:
                if (f.degree + g.degree) % 2 != parity:
                    continue
                h = c.compose(g, f)
                coords = list(h.even if parity == 0 else h.odd)
                if any(coords):
                    rows.append(coords)
    return rows


def indecomposable_arrows(c: PresentedCategory) -> List[Indecomposable]:
    """Generators of Hom(Y, Z) / rad^2 over all pairs of distinct objects."""
    out = []
    arrows_between: Dict[Tuple[int, int], List[int]] = {}
    for k, a in enumerate(c.generators):
        arrows_between.setdefault((c.obj(a.source), c.obj(a.target)), []).append(k)

    for y in range(len(c.objects)):
        for z in range(len(c.objects)):
            if y == z:
                continue
            zero = c.zero(c.objects[y], c.objects[z])
            for parity in (0, 1):
                f = len(zero.even) if parity == 0 else len(zero.odd)
                if not f:
                    continue
                rows = rad2_rows(c, y, z, parity)
                if rows:
                    diag, _, _, q_inv = smith_normal_form(rows, f)
                else:
                    diag, q_inv = [], [[int(i == j) for j in range(f)] for i in range(f)]
                r = len([d for d in diag if d])
                gens = [(q_inv[j], 0) for j in range(r, f)]
                gens += [(q_inv[j], diag[j]) for j in range(r) if diag[j] > 1]
                for vec, order in gens:
                    m = Morphism(zero.source, zero.target,
                                 tuple(vec) if parity == 0 else zero.even,
                                 tuple(vec) if parity == 1 else zero.odd)
                    out.append(_name_indecomposable(c, m, arrows_between.get((y, z), []), rows, order))
    out.sort(key=lambda ind: (ind.source.sort_key(), ind.target.sort_key(), ind.name))
    return out


def _name_indecomposable(c: PresentedCategory, m: Morphism, candidates: List[int],
                         rad2: List[List[int]], order: int) -> Indecomposable:
    """Prefer a canonical arrow congruent to +-m modulo rad^2."""
    n = len(m.coeffs)
    for k in candidates:
        g = c.generator(k)
        for sign in (1, -1):
            diff = [a - sign * b for a, b in zip(m.coeffs, g.coeffs)]
            if not any(diff) or (rad2 and lattice_contains(_pad(rad2, m, n), diff, n)):
                return Indecomposable(m.source, m.target, g, c.generators[k], order)
    first = next((x for x in m.coeffs if x), 1)
    return Indecomposable(m.source, m.target, m if first > 0 else -m, None, order)


def _pad(rows: List[List[int]], m: Morphism, n: int) -> List[List[int]]:
    """rad^2 rows are per parity; embed them into even+odd coordinates."""
    ne = len(m.even)
    if m.degree == 1:
        return [[0] * ne + list(r) for r in rows]
    return [list(r) + [0] * (n - ne) for r in rows]

