"""
Structure theory of NT*(W) for accordion spaces W.

Hom groups by the intersection criteria, indecomposable arrows by the hull
criteria, singular subsets, successors and the long chain through all
indecomposables.
"""

import logging
from typing import Dict, List, Optional, Tuple

from common.errors import FktError, NotConnected, NotIndecomposable, NotLocallyClosed, NotTypeA
from common.intmat import kernel_basis, lattices_equal, transpose
from modules.kgroups.order_complex import GradedAbelianGroup, Z0, Z1, ZERO
from modules.ntcat.category import Morphism, PresentedCategory
from modules.ntcat.relations import Arrow, canonical_generators
from modules.poset.poset_core import PointSet, Space, bits_of, members_of, subset_sort_key
from modules.uct.classifier import AccordionForm, is_type_a

logger = logging.getLogger(__name__)


def accordion_form(s: Space) -> AccordionForm:
    """
    Raises:
        NotTypeA: s is disconnected or not an accordion
    """
    try:
        form = is_type_a(s)
    except NotConnected:
        raise NotTypeA("type (A) structure theory needs a connected space")
    if form is None:
        raise NotTypeA(f"space with {s.n_points} points is not an accordion")
    return form


def _check_object(s: Space, y: PointSet):
    if not y.bits or not s.is_connected(y.bits):
        raise NotLocallyClosed(f"{y} is not a non-empty connected subset")
    if not s.is_locally_closed(y.bits):
        raise NotLocallyClosed(f"{y} is not locally closed")


# =============================================================================
# Hom groups
# =============================================================================

def hom_group_type_a(s: Space, y: PointSet, z: PointSet) -> GradedAbelianGroup:
    """
    NT*(Y, Z) read off from how Y and Z meet; no linear algebra involved.

    Connectedness of Y u Z is taken in the Hasse graph. When Y and Z are
    disjoint the intersection criteria hold in both directions, and only the
    direction with Z open in Y u Z carries a boundary arrow.
    """
    accordion_form(s)
    _check_object(s, y)
    _check_object(s, z)
    y, z = y.bits, z.bits
    w = y & z

    if w and s.is_closed_in(w, y) and s.is_open_in(w, z):
        return Z0

    union = y | z
    if (s.is_connected(union) and w != y and w != z
            and s.is_open_in(w, y) and s.is_closed_in(w, z)
            and (w or s.is_open_in(z, union))):
        return Z1
    if z != y and z & ~y == 0 and s.is_open_in(z, y) and len(s.components(y & ~z)) == 2:
        return Z1
    if y != z and y & ~z == 0 and s.is_closed_in(y, z) and len(s.components(z & ~y)) == 2:
        return Z1
    return ZERO


# =============================================================================
# Indecomposables and singular subsets
# =============================================================================

def _open_join(s: Space, u: int, y: int) -> int:
    """U together with the points above y that lie strictly above no point of U."""
    out = u
    for x in members_of(s.above[y]):
        if not any(x != p and s.leq_point(p, x) for p in members_of(u)):
            out |= 1 << x
    return out


def _closed_join(s: Space, c: int, y: int) -> int:
    out = c
    for x in members_of(s.below[y]):
        if not any(x != p and s.leq_point(x, p) for p in members_of(c)):
            out |= 1 << x
    return out


def _is_indecomposable(s: Space, a: Arrow) -> bool:
    if a.kind == "i":
        u, y = a.source.bits, a.target.bits
        boundary = s.down(u) & ~u
        tops = [p for p in members_of(boundary) if not s.above[p] & boundary & ~(1 << p)]
        return any(_open_join(s, u, p) == y for p in tops)
    if a.kind == "r":
        y, c = a.source.bits, a.target.bits
        boundary = s.up(c) & ~c
        bottoms = [p for p in members_of(boundary) if not s.below[p] & boundary & ~(1 << p)]
        return any(_closed_join(s, c, p) == y for p in bottoms)
    c, u = a.source.bits, a.target.bits
    return (s.is_open(u) and s.is_closed(c)
            and c & ~s.down(u) == 0 and u & ~s.up(c) == 0)


def indecomposables_type_a(s: Space) -> List[Arrow]:
    """The n^2 - 1 indecomposable canonical arrows, by the hull criteria."""
    accordion_form(s)
    out = [a for a in canonical_generators(s) if _is_indecomposable(s, a)]
    n = s.n_points
    if n > 1 and len(out) != n * n - 1:
        raise FktError(f"found {len(out)} indecomposables, expected {n * n - 1}")
    return out


def singular_subsets(s: Space) -> List[PointSet]:
    """
    Objects with a single indecomposable arrow in and a single one out.

    These are {1^1}, {1^m}, the inner points {a^i} with 1 < a < n_i, and the
    m maximal chains. The one-point space is degenerate: all of these
    coincide there.
    """
    form = accordion_form(s)
    masks = {1 << form.point(1, 1), 1 << form.point(1, form.m)}
    for i in range(1, form.m + 1):
        n_i = form.n[i - 1]
        for a in range(2, n_i):
            masks.add(1 << form.point(a, i))
        masks.add(bits_of(form.point(a, i) for a in range(1, n_i + 1)))
    return [PointSet(s, m) for m in sorted(masks, key=subset_sort_key)]


# =============================================================================
# Successors and the long chain
# =============================================================================

def six_term_successor(s: Space, a: Arrow) -> Optional[Arrow]:
    """
    The next map in the six-term sequence of a.

    i_U^Y -> r_Y^{Y-U}, r_Y^C -> d_C^{Y-C}, d_C^U -> i_U^{U+C}; None when the
    next object is not connected.
    """
    if a.kind == "i":
        u, y = a.source.bits, a.target.bits
        rest = y & ~u
        return Arrow("r", a.target, PointSet(s, rest)) if s.is_connected(rest) else None
    if a.kind == "r":
        y, c = a.source.bits, a.target.bits
        rest = y & ~c
        return Arrow("d", a.target, PointSet(s, rest)) if s.is_connected(rest) else None
    c, u = a.source.bits, a.target.bits
    return Arrow("i", a.target, PointSet(s, u | c))


def _arrow_morphism(c: PresentedCategory, a: Arrow) -> Morphism:
    return c.arrow_morphism(a.kind, a.source, a.target)


def _same_up_to_sign(f: Morphism, g: Morphism) -> bool:
    return f.coeffs == g.coeffs or f.coeffs == (-g).coeffs


def _factors_otherwise(c: PresentedCategory, h: Morphism, nu: Arrow, eta: Arrow,
                       indecomposables: List[Arrow]) -> bool:
    """True when h = +-eta'.nu' for indecomposables nu', eta' other than (nu, eta)."""
    for nu2 in indecomposables:
        if nu2.source != nu.source or nu2 == nu:
            continue
        for eta2 in indecomposables:
            if eta2.source != nu2.target or eta2.target != eta.target:
                continue
            g = c.compose(_arrow_morphism(c, eta2), _arrow_morphism(c, nu2))
            if not g.is_zero() and _same_up_to_sign(g, h):
                return True
    return False


def successor(c: PresentedCategory, nu: Arrow, indecomposables: List[Arrow] = None,
              singular: List[PointSet] = None) -> Arrow:
    """
    The indecomposable arrow that follows nu along the long chain.

    Raises:
        NotIndecomposable: nu is not one of the indecomposable arrows
    """
    s = c.space
    if indecomposables is None:
        indecomposables = indecomposables_type_a(s)
    if singular is None:
        singular = singular_subsets(s)
    if nu not in indecomposables:
        raise NotIndecomposable(f"{nu.name} is not indecomposable")

    outs = [a for a in indecomposables if a.source == nu.target]
    if nu.target in singular:
        if len(outs) != 1:
            raise FktError(f"singular object {nu.target} has {len(outs)} indecomposable arrows out")
        return outs[0]

    if nu.source in singular:
        subsequent = six_term_successor(s, nu)
        rest = [a for a in outs if a != subsequent]
        if len(rest) != 1:
            raise FktError(f"no unique successor for {nu.name} off its six-term sequence")
        return rest[0]

    nu_m = _arrow_morphism(c, nu)
    free = []
    for eta in outs:
        h = c.compose(_arrow_morphism(c, eta), nu_m)
        if h.is_zero() or not _factors_otherwise(c, h, nu, eta, indecomposables):
            free.append((eta, h))
    if len(free) > 1:
        free = [(eta, h) for eta, h in free if not h.is_zero()]
    if len(free) != 1:
        raise FktError(f"no unique successor for {nu.name}: {len(free)} candidates")
    return free[0][0]


def long_chain(c: PresentedCategory) -> List[Arrow]:
    """Successor orbit of the arrow out of {1^1}; visits every indecomposable once."""
    s = c.space
    form = accordion_form(s)
    indecomposables = indecomposables_type_a(s)
    singular = singular_subsets(s)
    start_object = PointSet(s, 1 << form.point(1, 1))
    first = [a for a in indecomposables if a.source == start_object]
    if len(first) != 1:
        raise FktError(f"{start_object} has {len(first)} indecomposable arrows out")

    chain = [first[0]]
    while True:
        nxt = successor(c, chain[-1], indecomposables, singular)
        if nxt == chain[0]:
            break
        if nxt in chain:
            raise FktError(f"successor orbit closes early at {nxt.name}")
        chain.append(nxt)
    if len(chain) != len(indecomposables):
        raise FktError(f"long chain has {len(chain)} arrows, expected {len(indecomposables)}")
    logger.info(f"✅ long chain through {len(chain)} indecomposables")
    return chain


def is_universal_pair(c: PresentedCategory, mu: Arrow, eta: Arrow) -> bool:
    """
    For every object T: phi . mu = 0 for phi in Hom(Z, T) iff phi factors through eta.

    mu: Y -> Z and eta: Z -> V.
    """
    if mu.target != eta.source:
        return False
    mu_m = _arrow_morphism(c, mu)
    eta_m = _arrow_morphism(c, eta)
    for t in c.objects:
        basis = c.basis_morphisms(mu.target, t)
        if not basis:
            continue
        dim = len(basis)
        images = [list(c.compose(b, mu_m).coeffs) for b in basis]
        if images and images[0]:
            kernel = kernel_basis(transpose(images, len(images[0])), dim)
        else:
            kernel = [[int(i == j) for j in range(dim)] for i in range(dim)]
        through = [list(c.compose(b, eta_m).coeffs) for b in c.basis_morphisms(eta.target, t)]
        if not lattices_equal(kernel, through, dim):
            return False
    return True


def type_a_hom_table(s: Space) -> Dict[Tuple[int, int], GradedAbelianGroup]:
    objects = [PointSet(s, m) for m in s.lc_connected_masks]
    return {(y.bits, z.bits): hom_group_type_a(s, y, z) for y in objects for z in objects}
