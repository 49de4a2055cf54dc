"""
The ungraded isomorphism NT*(W) -> NT*(O_n) for an accordion W with n points.

Both long chains start at the arrow out of {1^1}; matching them position by
position gives the object and generator bijections. Boundary arrows d_C^U of
W whose C comes after U in walk order are replaced by their negatives, after
which every hom group Z or Z[1] gets a sign eps(Y, Z) from a generating path
and the map is checked for functoriality on all composable triples.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from common.errors import FktError
from modules.ntcat.category import Morphism, PresentedCategory, build_presented_category
from modules.ntcat.relations import Arrow
from modules.ntcat.type_a import accordion_form, long_chain
from modules.poset.builtins import chain
from modules.poset.poset_core import PointSet, Space

logger = logging.getLogger(__name__)


@dataclass
class CategoryIso:
    source: PresentedCategory
    target: PresentedCategory
    object_map: Dict[int, int]
    generator_map: Dict[Arrow, Tuple[int, Arrow]]
    signs: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def map_object(self, y: PointSet) -> PointSet:
        return PointSet(self.target.space, self.object_map[y.bits])

    def apply(self, m: Morphism) -> Morphism:
        """Image of a morphism; every hom group involved has rank at most one."""
        y, z = self.map_object(m.source), self.map_object(m.target)
        value = _scalar(m)
        out = self.target.zero(y, z)
        if not value:
            return out
        basis = self.target.basis_morphisms(y, z)
        return basis[0].scale(value * self.signs[(m.source.bits, m.target.bits)])

    def as_dict(self) -> Dict:
        src, tgt = self.source.space, self.target.space
        return {
            "objects": {src.name(a): tgt.name(b) for a, b in sorted(self.object_map.items())},
            "generators": [
                {"source": a.name, "target": b.name, "sign": sign}
                for a, (sign, b) in sorted(self.generator_map.items(), key=lambda t: t[0].sort_key())
            ],
        }


def _scalar(m: Morphism) -> int:
    coeffs = m.coeffs
    if len(coeffs) > 1:
        raise FktError(f"Hom({m.source},{m.target}) has rank {len(coeffs)}, expected at most 1")
    return coeffs[0] if coeffs else 0


def boundary_sign(w: Space, position: Dict[int, int], a: Arrow) -> int:
    """-1 for d_C^U with C after U in walk order, else 1."""
    if a.kind != "d":
        return 1
    c = min(position[p] for p in a.source.members)
    u = min(position[p] for p in a.target.members)
    return -1 if c > u else 1


def _generating_paths(c: PresentedCategory, arrows: List[Arrow], start: PointSet) -> Dict[int, List[Arrow]]:
    """Shortest arrow path from start to each object whose value is a unit generator."""
    found: Dict[int, List[Arrow]] = {start.bits: []}
    queue = deque([(start, [], c.identity(start))])
    seen = {start.bits}
    while queue:
        obj, path, value = queue.popleft()
        for a in arrows:
            if a.source != obj:
                continue
            nxt = c.compose(c.arrow_morphism(a.kind, a.source, a.target), value)
            if nxt.is_zero():
                continue
            if a.target.bits in seen:
                continue
            seen.add(a.target.bits)
            if abs(_scalar(nxt)) == 1:
                found[a.target.bits] = path + [a]
            queue.append((a.target, path + [a], nxt))
    return found


def _path_value(c: PresentedCategory, start: PointSet, path: List[Arrow]) -> int:
    value = c.identity(start)
    for a in path:
        value = c.compose(c.arrow_morphism(a.kind, a.source, a.target), value)
    return _scalar(value)


def _is_six_term_triple(s: Space, masks) -> bool:
    masks = list(masks)
    for y in masks:
        others = [m for m in masks if m != y]
        if len(others) != 2:
            return False
        a, b = others
        if a & b or a | b != y:
            continue
        if s.is_open_in(a, y) or s.is_open_in(b, y):
            return True
    return False


def phi_iso(w: Space, cw: Optional[PresentedCategory] = None,
            co: Optional[PresentedCategory] = None) -> CategoryIso:
    """
    Build and verify the isomorphism onto the category of the n-point chain.

    Raises:
        NotTypeA: w is not an accordion
        FktError: the aligned chains do not define a functorial bijection
    """
    form_w = accordion_form(w)
    o = chain(w.n_points)
    form_o = accordion_form(o)
    cw = cw or build_presented_category(w)
    co = co or build_presented_category(o)

    chain_w, chain_o = long_chain(cw), long_chain(co)
    if len(chain_w) != len(chain_o):
        raise FktError(f"long chains differ in length: {len(chain_w)} vs {len(chain_o)}")

    pos_w, pos_o = form_w.position, form_o.position
    object_map: Dict[int, int] = {}
    generator_map: Dict[Arrow, Tuple[int, Arrow]] = {}
    for a, b in zip(chain_w, chain_o):
        for x, y in ((a.source, b.source), (a.target, b.target)):
            if object_map.setdefault(x.bits, y.bits) != y.bits:
                raise FktError(f"object {x} is sent to both {o.name(object_map[x.bits])} and {y}")
        sign = boundary_sign(w, pos_w, a) * boundary_sign(o, pos_o, b)
        generator_map[a] = (sign, b)
    if sorted(object_map.values()) != sorted(o.lc_connected_masks) or len(object_map) != len(cw.objects):
        raise FktError("object map is not a bijection onto LC*(O_n)")

    iso = CategoryIso(cw, co, object_map, generator_map)
    _fix_signs(iso)
    _verify(iso)
    logger.info(f"✅ NT*(W) ≅ NT*(O_{w.n_points}) as ungraded categories")
    return iso


def _fix_signs(iso: CategoryIso):
    cw, co = iso.source, iso.target
    arrows_w = list(iso.generator_map)
    for y in cw.objects:
        for z_bits, path in _generating_paths(cw, arrows_w, y).items():
            z = PointSet(cw.space, z_bits)
            value_w = _path_value(cw, y, path)
            mapped = [iso.generator_map[a][1] for a in path]
            sign = 1
            for a in path:
                sign *= iso.generator_map[a][0]
            value_o = sign * _path_value(co, iso.map_object(y), mapped)
            if abs(value_o) != 1:
                raise FktError(f"image of the generating path {y} -> {z} is not a generator")
            iso.signs[(y.bits, z_bits)] = value_o * value_w
        for z in cw.objects:
            rank_w = len(cw.basis_morphisms(y, z))
            rank_o = len(co.basis_morphisms(iso.map_object(y), iso.map_object(z)))
            if rank_w != rank_o:
                raise FktError(f"Hom({y},{z}) and its image have ranks {rank_w} and {rank_o}")
            if rank_w and (y.bits, z.bits) not in iso.signs:
                raise FktError(f"Hom({y},{z}) is not generated by a path of indecomposables")


def _verify(iso: CategoryIso):
    cw, co = iso.source, iso.target
    for y in cw.objects:
        if iso.apply(cw.identity(y)) != co.identity(iso.map_object(y)):
            raise FktError(f"identity of {y} is not preserved")

    for a, (sign, b) in iso.generator_map.items():
        image = iso.apply(cw.arrow_morphism(a.kind, a.source, a.target))
        if image != co.arrow_morphism(b.kind, b.source, b.target).scale(sign):
            raise FktError(f"generator {a.name} is not sent to {sign:+d} {b.name}")

    nonzero = {(y.bits, z.bits) for y in cw.objects for z in cw.objects if cw.basis_morphisms(y, z)}
    for x in cw.objects:
        for y in cw.objects:
            if (x.bits, y.bits) not in nonzero:
                continue
            f = cw.basis_morphisms(x, y)[0]
            for z in cw.objects:
                if (y.bits, z.bits) not in nonzero:
                    continue
                g = cw.basis_morphisms(y, z)[0]
                if iso.apply(cw.compose(g, f)) != co.compose(iso.apply(g), iso.apply(f)):
                    raise FktError(f"composition {x} -> {y} -> {z} is not preserved")

    w, o = cw.space, co.space
    for y in cw.objects:
        for u in w.relatively_open_masks(y.bits):
            rest = y.bits & ~u
            if not u or not rest or not w.is_connected(u) or not w.is_connected(rest):
                continue
            triple = {iso.object_map[u], iso.object_map[y.bits], iso.object_map[rest]}
            if not _is_six_term_triple(o, triple):
                raise FktError(f"six-term triple ({w.name(u)}, {y}) is not sent to one")
