"""
Finitely generated NT*-modules over a presented category.

An entry is Z^g modulo homogeneous relation rows, with a parity per
coordinate. Generating arrows act by integer matrices in column convention:
the image of a vector v is A v.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from common.errors import NotTypeA, ObjectMismatch
from common.intmat import (
    Matrix, block_diagonal, hermite_rows, identity, kernel_basis, lattices_equal, lattice_subset,
    mat_mul, mat_vec, preimage_lattice, quotient_invariants, smith_normal_form, solve_integer, transpose, zeros,
)
from modules.kgroups.order_complex import GradedAbelianGroup
from modules.ntcat.category import Morphism, PresentedCategory
from modules.ntcat.relations import Block, RelationBuilder
from modules.poset.poset_core import MonotoneMap, PointSet, induced_subspace
from modules.uct.classifier import is_type_a

logger = logging.getLogger(__name__)


# =============================================================================
# Entries
# =============================================================================

@dataclass(frozen=True)
class Entry:
    """Z^len(parity) / span(relations); relation rows are homogeneous."""
    parity: Tuple[int, ...] = ()
    relations: Tuple[Tuple[int, ...], ...] = ()

    @property
    def size(self) -> int:
        return len(self.parity)

    def group(self) -> GradedAbelianGroup:
        parts = []
        for p in (0, 1):
            cols = [j for j, q in enumerate(self.parity) if q == p]
            rows = [[r[j] for j in cols] for r in self.relations if any(r[j] for j in cols)]
            parts.append(quotient_invariants(len(cols), rows))
        (even, even_t), (odd, odd_t) = parts
        return GradedAbelianGroup(even, odd, tuple(even_t), tuple(odd_t))

    def is_free(self) -> bool:
        return self.group().is_free()

    def shifted(self) -> "Entry":
        return Entry(tuple(1 - p for p in self.parity), self.relations)

    def with_relations(self, rows: Sequence[Sequence[int]]) -> "Entry":
        extra = tuple(tuple(r) for r in rows if any(r))
        return Entry(self.parity, self.relations + extra)


ZERO_ENTRY = Entry()


def direct_sum_entries(entries: Sequence[Entry]) -> Entry:
    parity = tuple(p for e in entries for p in e.parity)
    relations = []
    offset = 0
    for e in entries:
        for r in e.relations:
            relations.append(tuple([0] * offset + list(r) + [0] * (len(parity) - offset - e.size)))
        offset += e.size
    return Entry(parity, tuple(relations))


def _columns(matrix: Matrix, ncols: int) -> List[List[int]]:
    return transpose(matrix, ncols) if matrix else [[] for _ in range(ncols)]


def _congruent_zero(matrix: Matrix, ncols: int, entry: Entry) -> bool:
    """Every column of matrix lies in the relation lattice of entry."""
    cols = [c for c in _columns(matrix, ncols) if any(c)]
    if not cols:
        return True
    return lattice_subset(cols, list(entry.relations), entry.size)


# =============================================================================
# Modules and maps
# =============================================================================

class NTModule:
    """
    Covariant functor NT*(X) -> graded abelian groups.

    entries are keyed by object mask; actions by generator index.
    """

    def __init__(self, category: PresentedCategory, entries: Dict[int, Entry], actions: Dict[int, Matrix],
                 name: str = "M"):
        self.category = category
        self.entries = entries
        self.actions = actions
        self.name = name

    def entry(self, y) -> Entry:
        return self.entries[self.category.objects[self.category.obj(y)].bits]

    def size(self, y) -> int:
        return self.entry(y).size

    def group(self, y) -> GradedAbelianGroup:
        return self.entry(y).group()

    def path_matrix(self, source: int, path: Sequence[int]) -> Matrix:
        n = self.entries[source].size
        out = identity(n)
        for g in path:
            out = mat_mul(self.actions[g], out, n, self.entries[source].size)
            n = len(self.actions[g])
        return out

    def is_zero(self) -> bool:
        return all(e.group().is_zero() for e in self.entries.values())

    def failing_relation(self):
        """First canonical relation that does not act as zero, or None."""
        c = self.category
        for rel in c.relations:
            n_src = self.entries[rel.source].size
            n_tgt = self.entries[rel.target].size
            total = zeros(n_tgt, n_src)
            for coeff, path in rel.terms:
                m = self.path_matrix(rel.source, path)
                total = [[a + coeff * b for a, b in zip(ra, rb)] for ra, rb in zip(total, m)]
            if not _congruent_zero(total, n_src, self.entries[rel.target]):
                return rel
        return None

    def is_functorial(self) -> bool:
        return self.failing_relation() is None

    def entry_table(self) -> Dict[str, str]:
        return {str(o): self.entries[o.bits].group().notation() for o in self.category.objects}


@dataclass
class ModuleMap:
    """Degree-preserving natural transformation; components keyed by object mask."""
    source: NTModule
    target: NTModule
    components: Dict[int, Matrix]

    def component(self, y) -> Matrix:
        c = self.source.category
        return self.components[c.objects[c.obj(y)].bits]

    def is_natural(self) -> bool:
        c = self.source.category
        for k, a in enumerate(c.generators):
            z, z2 = a.source.bits, a.target.bits
            n_z = self.source.entries[z].size
            lhs = mat_mul(self.target.actions[k], self.components[z], self.target.entries[z].size, n_z)
            rhs = mat_mul(self.components[z2], self.source.actions[k], self.source.entries[z2].size, n_z)
            diff = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
            if not _congruent_zero(diff, self.source.entries[z].size, self.target.entries[z2]):
                return False
        return True

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """other after self."""
        if self.target is not other.source:
            raise ObjectMismatch(f"cannot compose {other.source.name}->{other.target.name} "
                                 f"after {self.source.name}->{self.target.name}")
        comps = {y: mat_mul(other.components[y], m, self.target.entries[y].size, self.source.entries[y].size)
                 for y, m in self.components.items()}
        return ModuleMap(self.source, other.target, comps)

    def flat(self) -> List[int]:
        return [x for y in sorted(self.components) for row in self.components[y] for x in row]


@dataclass
class Resolution:
    """
    0 -> P_m -> ... -> P_0 -> M -> 0.

    maps[i] goes from modules[i] to modules[i + 1]; augmentation goes from
    P_0 to the resolved module. Kernels and images are taken modulo the
    relations of each entry.
    """
    modules: List[NTModule]
    maps: List[ModuleMap]
    resolved: NTModule
    augmentation: ModuleMap

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def failure(self) -> Optional[Tuple[PointSet, int]]:
        """First (object, stage) where the sequence is not exact; stage len(modules) is the resolved module."""
        stages = self.modules + [self.resolved]
        arrows = self.maps + [self.augmentation]
        for o in self.resolved.category.objects:
            y = o.bits
            for i, stage in enumerate(stages):
                incoming = arrows[i - 1].components[y] if i else []
                n_in = stages[i - 1].entries[y].size if i else 0
                outgoing = arrows[i].components[y] if i < len(arrows) else []
                after = stages[i + 1].entries[y] if i < len(arrows) else ZERO_ENTRY
                if not _exact_at(incoming, n_in, outgoing, stage.entries[y], after):
                    return o, i
        return None

    def is_exact(self) -> bool:
        failure = self.failure()
        if failure is not None:
            o, i = failure
            logger.debug(f"resolution of {self.resolved.name} not exact at stage {i} over {o}")
        return failure is None


# =============================================================================
# Constructions
# =============================================================================

def hom_basis_layout(c: PresentedCategory, y, z, shift: int) -> List[Morphism]:
    basis = c.basis_morphisms(y, z)
    if shift % 2:
        basis = [b for b in basis if b.degree == 1] + [b for b in basis if b.degree == 0]
    return basis


def morphism_coords(m: Morphism, shift: int) -> List[int]:
    return list(m.odd + m.even) if shift % 2 else list(m.even + m.odd)


def free_module(c: PresentedCategory, y, shift: int = 0) -> NTModule:
    """P_Y = Hom(Y, -), shifted by `shift`; arrows act by post-composition."""
    y = c.objects[c.obj(y)]
    entries = {}
    for z in c.objects:
        basis = hom_basis_layout(c, y, z, shift)
        entries[z.bits] = Entry(tuple((b.degree + shift) % 2 for b in basis))
    actions = {}
    for k, a in enumerate(c.generators):
        g = c.generator(k)
        columns = [morphism_coords(c.compose(g, b), shift) for b in hom_basis_layout(c, y, a.source, shift)]
        actions[k] = _from_columns(columns, entries[a.target.bits].size)
    suffix = "[1]" if shift % 2 else ""
    return NTModule(c, entries, actions, name=f"P_{y}{suffix}")


def _from_columns(columns: List[List[int]], nrows: int) -> Matrix:
    return [[col[i] for col in columns] for i in range(nrows)]


def direct_sum(modules: Sequence[NTModule], name: str = None) -> Tuple[NTModule, List[ModuleMap], List[ModuleMap]]:
    """The sum with its inclusions and projections."""
    c = modules[0].category
    entries = {y: direct_sum_entries([m.entries[y] for m in modules]) for y in modules[0].entries}
    actions = {}
    for k, a in enumerate(c.generators):
        shapes = [(m.entries[a.target.bits].size, m.entries[a.source.bits].size) for m in modules]
        actions[k] = block_diagonal([m.actions[k] for m in modules], shapes)
    total = NTModule(c, entries, actions, name or " + ".join(m.name for m in modules))

    inclusions, projections = [], []
    offsets = {y: 0 for y in entries}
    for m in modules:
        inc, proj = {}, {}
        for y, e in entries.items():
            n = m.entries[y].size
            off = offsets[y]
            inc[y] = [[int(i == j + off) for j in range(n)] for i in range(e.size)]
            proj[y] = [[int(j == i + off) for j in range(e.size)] for i in range(n)]
            offsets[y] += n
        inclusions.append(ModuleMap(m, total, inc))
        projections.append(ModuleMap(total, m, proj))
    return total, inclusions, projections


def shift_module(m: NTModule) -> NTModule:
    return NTModule(m.category, {y: e.shifted() for y, e in m.entries.items()}, m.actions, f"{m.name}[1]")


def cokernel(f: ModuleMap, name: str = None) -> Tuple[NTModule, ModuleMap]:
    t = f.target
    entries = {}
    for y, e in t.entries.items():
        entries[y] = e.with_relations(_columns(f.components[y], f.source.entries[y].size))
    q = NTModule(t.category, entries, t.actions, name or f"coker({t.name})")
    return q, quotient_map(t, q)


def quotient_map(m: NTModule, q: NTModule) -> ModuleMap:
    """m -> q for q presented on the generators of m with more relations."""
    return ModuleMap(m, q, {y: identity(e.size) for y, e in m.entries.items()})


def scalar_quotient(m: NTModule, k: int) -> NTModule:
    """M / kM."""
    entries = {}
    for y, e in m.entries.items():
        entries[y] = e.with_relations([[k * int(i == j) for j in range(e.size)] for i in range(e.size)])
    return NTModule(m.category, entries, m.actions, f"{m.name}/{k}")


def scalar_map(m: NTModule, k: int) -> ModuleMap:
    return ModuleMap(m, m, {y: [[k * int(i == j) for j in range(e.size)] for i in range(e.size)]
                            for y, e in m.entries.items()})


# =============================================================================
# Entries on arbitrary locally closed sets
# =============================================================================

@dataclass(frozen=True)
class ExtendedEntry:
    """M(Z) for locally closed Z as the sum over its connected components."""
    entry: Entry
    offsets: Dict[int, int] = field(default_factory=dict)


def extend_to_nonconnected(m: NTModule, z: PointSet) -> ExtendedEntry:
    comps = m.category.space.components(z.bits)
    offsets = {}
    total = 0
    for comp in comps:
        offsets[comp] = total
        total += m.entries[comp].size
    return ExtendedEntry(direct_sum_entries([m.entries[comp] for comp in comps]), offsets)


def block_matrix(m: NTModule, block: Block, source: ExtendedEntry, target: ExtendedEntry) -> Matrix:
    out = zeros(target.entry.size, source.entry.size)
    for (tgt, src), terms in block.items():
        n_src = m.entries[src].size
        for coeff, path in terms:
            sub = m.path_matrix(src, path)
            for i, row in enumerate(sub):
                for j in range(n_src):
                    out[target.offsets[tgt] + i][source.offsets[src] + j] += coeff * row[j]
    return out


def _exact_at(incoming: Matrix, n_in: int, outgoing: Matrix, middle: Entry, after: Entry) -> bool:
    """ker(outgoing) = im(incoming) inside middle."""
    n = middle.size
    if not n:
        return True
    relations = [list(r) for r in middle.relations]
    if outgoing:
        ker = preimage_lattice(outgoing, list(after.relations), n)
    else:
        ker = identity(n)
    image = [c for c in _columns(incoming, n_in) if any(c)] if incoming else []
    return lattices_equal(ker + relations, image + relations, n)


@dataclass(frozen=True)
class ExactnessFailure:
    open_part: PointSet
    whole: PointSet
    position: str


def exactness_failure(m: NTModule) -> Optional[ExactnessFailure]:
    """First (U, Y, position) where the six-term sequence of m is not exact."""
    c = m.category
    s = c.space
    builder = RelationBuilder(s, c.generators)
    for y in s.locally_closed_masks:
        if not y:
            continue
        for u in s.relatively_open_masks(y):
            if u in (0, y):
                continue
            rest = y & ~u
            eu = extend_to_nonconnected(m, PointSet(s, u))
            ey = extend_to_nonconnected(m, PointSet(s, y))
            ec = extend_to_nonconnected(m, PointSet(s, rest))
            i_map = block_matrix(m, builder.extension(u, y), eu, ey)
            r_map = block_matrix(m, builder.restriction(y, rest), ey, ec)
            d_map = block_matrix(m, builder.boundary(rest, u), ec, eu)
            checks = (
                ("M(Y)", i_map, eu.entry.size, r_map, ey.entry, ec.entry),
                ("M(Y-U)", r_map, ey.entry.size, d_map, ec.entry, eu.entry),
                ("M(U)", d_map, ec.entry.size, i_map, eu.entry, ey.entry),
            )
            for position, incoming, n_in, outgoing, middle, after in checks:
                if not _exact_at(incoming, n_in, outgoing, middle, after):
                    return ExactnessFailure(PointSet(s, u), PointSet(s, y), position)
    return None


def is_exact(m: NTModule) -> bool:
    failure = exactness_failure(m)
    if failure is not None:
        logger.debug(f"{m.name} not exact at {failure.position} for U={failure.open_part}, Y={failure.whole}")
    return failure is None


# =============================================================================
# Semisimple and nilpotent parts, projectivity
# =============================================================================

@dataclass
class SsNil:
    nil_part: Dict[int, List[List[int]]]
    ss_quotient: Dict[int, Entry]

    def ss_groups(self) -> Dict[int, GradedAbelianGroup]:
        return {y: e.group() for y, e in self.ss_quotient.items()}


def ss_and_nil(m: NTModule) -> SsNil:
    """NT_nil . M as the images of all generating arrows, and the quotient M_ss."""
    c = m.category
    nil: Dict[int, List[List[int]]] = {y: [] for y in m.entries}
    for k, a in enumerate(c.generators):
        n_src = m.entries[a.source.bits].size
        nil[a.target.bits].extend(col for col in _columns(m.actions[k], n_src) if any(col))
    ss = {y: m.entries[y].with_relations(rows) for y, rows in nil.items()}
    return SsNil(nil, ss)


def is_projective_type_a(m: NTModule) -> bool:
    """Entry-free and exact; over accordion categories this is the same as projective."""
    s = m.category.space
    for comp in s.components(s.full):
        sub, _ = induced_subspace(s, PointSet(s, comp))
        if is_type_a(sub) is None:
            raise NotTypeA("projectivity test needs an accordion category")
    return all(e.is_free() for e in m.entries.values()) and is_exact(m)


def morphism_action(m: NTModule, f: Morphism) -> Matrix:
    """M(f): M(source) -> M(target)."""
    src, tgt = f.source.bits, f.target.bits
    out = zeros(m.entries[tgt].size, m.entries[src].size)
    for coeff, word in m.category.expand(f):
        sub = m.path_matrix(src, word)
        out = [[a + coeff * b for a, b in zip(ra, rb)] for ra, rb in zip(out, sub)]
    return out


@dataclass
class FreeCertificate:
    """An isomorphism from a sum of shifted free modules onto M; cover is None for M = 0."""
    summands: List[Tuple[PointSet, int]]
    cover: Optional[NTModule]
    iso: Optional[ModuleMap]


def _top_lifts(m: NTModule, nil: Dict[int, List[List[int]]], y: int, parity: int) -> Optional[List[List[int]]]:
    """Lifts to M(y) of a basis of M_ss(y) in one degree; None when that part has torsion."""
    e = m.entries[y]
    cols = [j for j, q in enumerate(e.parity) if q == parity]
    if not cols:
        return []
    rows = [[r[j] for j in cols] for r in list(e.relations) + nil[y] if any(r[j] for j in cols)]
    if rows:
        diag, _, _, q_inv = smith_normal_form(rows, len(cols))
        if any(d > 1 for d in diag):
            return None
        free = q_inv[len([d for d in diag if d]):]
    else:
        free = identity(len(cols))
    lifts = []
    for q in free:
        v = [0] * e.size
        for j, x in zip(cols, q):
            v[j] = x
        lifts.append(v)
    return lifts


def free_certificate(m: NTModule) -> Optional[FreeCertificate]:
    """
    Write m as a sum of shifted free modules, or return None.

    Each lift v in M(Y) of a basis element of M_ss(Y) gives P_Y[p] -> M,
    f -> M(f) v. The sum of these maps is kept only if it is natural and
    bijective on every entry modulo the relations of m.
    """
    c = m.category
    nil = ss_and_nil(m).nil_part
    summands: List[Tuple[PointSet, int]] = []
    lifts: List[List[int]] = []
    for o in c.objects:
        for p in (0, 1):
            vectors = _top_lifts(m, nil, o.bits, p)
            if vectors is None:
                logger.debug(f"{m.name}: torsion in the top at {o}")
                return None
            summands.extend((o, p) for _ in vectors)
            lifts.extend(vectors)
    if not summands:
        return FreeCertificate([], None, None) if m.is_zero() else None

    cover, _, _ = direct_sum([free_module(c, o, p) for o, p in summands], name=f"cover({m.name})")
    comps = {}
    for w in c.objects:
        columns = []
        for (o, p), v in zip(summands, lifts):
            for b in hom_basis_layout(c, o, w, p):
                columns.append(mat_vec(morphism_action(m, b), v))
        comps[w.bits] = _from_columns(columns, m.entries[w.bits].size)
    iso = ModuleMap(cover, m, comps)
    if not iso.is_natural():
        return None

    for w in c.objects:
        e = m.entries[w.bits]
        n_cover = cover.entries[w.bits].size
        image = [col for col in _columns(comps[w.bits], n_cover) if any(col)]
        if e.size and not lattices_equal(image + [list(r) for r in e.relations], identity(e.size), e.size):
            logger.debug(f"{m.name}: not generated by its top at {w}")
            return None
        if n_cover and preimage_lattice(comps[w.bits], list(e.relations), n_cover):
            logger.debug(f"{m.name}: the cover has a kernel at {w}")
            return None
    logger.info(f"✅ {m.name} is free on {len(summands)} generators")
    return FreeCertificate(summands, cover, iso)


# =============================================================================
# Hom spaces
# =============================================================================

@dataclass
class ModuleHomSpace:
    basis: List[ModuleMap]
    torsion: List[int]

    @property
    def free_rank(self) -> int:
        return len(self.basis)

    def coordinates(self, f: ModuleMap) -> Optional[List[int]]:
        """Coordinates of f in the basis, for targets without relations."""
        if not self.basis:
            return [] if not any(f.flat()) else None
        matrix = transpose([b.flat() for b in self.basis], len(self.basis[0].flat()))
        return solve_integer(matrix, f.flat(), len(self.basis))


def module_hom_space(a: NTModule, b: NTModule) -> ModuleHomSpace:
    """
    Degree-preserving module maps a -> b up to maps into the relations of b.

    Unknowns are the allowed entries of every component plus one slack vector
    per congruence "column lies in the relations of b".
    """
    if a.category is not b.category:
        raise ObjectMismatch("modules live over different categories")
    c = a.category
    objects = [o.bits for o in c.objects]

    variables: Dict[Tuple[int, int, int], int] = {}
    for y in objects:
        ea, eb = a.entries[y], b.entries[y]
        for i in range(eb.size):
            for j in range(ea.size):
                if ea.parity[j] == eb.parity[i]:
                    variables[(y, i, j)] = len(variables)
    n_x = len(variables)
    equations: List[Dict[int, int]] = []
    n_slack = 0

    def congruence(rows: List[Dict[int, int]], target: Entry):
        """rows[i] is a linear form in the variables giving coordinate i; require it in span(target)."""
        nonlocal n_slack
        rels = list(target.relations)
        base = n_x + n_slack
        n_slack += len(rels)
        for i, form in enumerate(rows):
            eq = dict(form)
            for l, r in enumerate(rels):
                if r[i]:
                    eq[base + l] = eq.get(base + l, 0) - r[i]
            if eq:
                equations.append(eq)

    for y in objects:
        ea, eb = a.entries[y], b.entries[y]
        for r in ea.relations:
            rows = []
            for i in range(eb.size):
                form: Dict[int, int] = {}
                for j, x in enumerate(r):
                    v = variables.get((y, i, j))
                    if x and v is not None:
                        form[v] = form.get(v, 0) + x
                rows.append(form)
            congruence(rows, eb)

    for k, arrow in enumerate(c.generators):
        z, z2 = arrow.source.bits, arrow.target.bits
        A, B = a.actions[k], b.actions[k]
        for j in range(a.entries[z].size):
            rows = []
            for i in range(b.entries[z2].size):
                form: Dict[int, int] = {}
                # (B F_z)[i][j]
                for l in range(b.entries[z].size):
                    v = variables.get((z, l, j))
                    if B[i][l] and v is not None:
                        form[v] = form.get(v, 0) + B[i][l]
                # - (F_z2 A)[i][j]
                for l in range(a.entries[z2].size):
                    v = variables.get((z2, i, l))
                    if A[l][j] and v is not None:
                        form[v] = form.get(v, 0) - A[l][j]
                rows.append({v: x for v, x in form.items() if x})
            congruence(rows, b.entries[z2])

    n_total = n_x + n_slack
    if equations:
        matrix = [[eq.get(v, 0) for v in range(n_total)] for eq in equations]
        kernel = kernel_basis(matrix, n_total)
    else:
        kernel = identity(n_total)
    solutions = [vec[:n_x] for vec in kernel if any(vec[:n_x])]
    basis, _ = hermite_rows(solutions, n_x) if solutions else ([], [])

    null = []
    for y in objects:
        ea, eb = a.entries[y], b.entries[y]
        for r in eb.relations:
            for j in range(ea.size):
                vec = [0] * n_x
                ok = True
                for i, x in enumerate(r):
                    if not x:
                        continue
                    v = variables.get((y, i, j))
                    if v is None:
                        ok = False
                        break
                    vec[v] = x
                if ok and any(vec):
                    null.append(vec)

    gens, torsion = _quotient_basis(basis, null, n_x)
    maps = [_unflatten(a, b, variables, g) for g in gens]
    return ModuleHomSpace(maps, torsion)


def _quotient_basis(basis: List[List[int]], null: List[List[int]], n: int) -> Tuple[List[List[int]], List[int]]:
    """Free generators and torsion of span(basis) / span(null)."""
    k = len(basis)
    if not k:
        return [], []
    if not null:
        return [list(v) for v in basis], []
    columns = transpose(basis, n)
    coords = [solve_integer(columns, v, k) for v in null]
    coords = [v for v in coords if v is not None and any(v)]
    if not coords:
        return [list(v) for v in basis], []
    diag, _, _, q_inv = smith_normal_form(coords, k)
    r = len([d for d in diag if d])
    gens = []
    for row in q_inv[r:]:
        gens.append([sum(row[t] * basis[t][x] for t in range(k)) for x in range(n)])
    return gens, [d for d in diag if d > 1]


def _unflatten(a: NTModule, b: NTModule, variables: Dict[Tuple[int, int, int], int], vec: List[int]) -> ModuleMap:
    comps = {y: zeros(b.entries[y].size, a.entries[y].size) for y in a.entries}
    for (y, i, j), v in variables.items():
        comps[y][i][j] = vec[v]
    return ModuleMap(a, b, comps)


# =============================================================================
# Category properties and pushforward
# =============================================================================

@dataclass
class PropertyReport:
    prop1: bool
    prop2: bool
    nilpotency_index: Optional[int] = None


def verify_properties(c: PresentedCategory) -> PropertyReport:
    """
    prop1: NT = NT_nil + Z.id with NT_nil a nilpotent ideal; prop2: hom groups torsion-free.
    """
    prop2 = all(c.hom_group(y, z).is_free() for y in c.objects for z in c.objects)

    prop1 = True
    for y in c.objects:
        basis = c.basis_morphisms(y, y)
        if len(basis) != 1 or c.identity(y).coeffs not in ((1,), (-1,)):
            prop1 = False

    nil = {(y.bits, z.bits): c.basis_morphisms(y, z) for y in c.objects for z in c.objects if y != z}
    for (x, y), fs in nil.items():
        for f in fs:
            for g in c.basis_morphisms(f.target, f.source):
                if not c.compose(g, f).is_zero():
                    prop1 = False

    power = {key: list(v) for key, v in nil.items() if v}
    index = None
    for step in range(1, len(c.objects) + 2):
        if not power:
            index = step
            break
        nxt: Dict[Tuple[int, int], List[Morphism]] = {}
        for (x, y), fs in power.items():
            for z in c.objects:
                if z.bits == y:
                    continue
                for g in nil.get((y, z.bits), []):
                    for f in fs:
                        h = c.compose(g, f)
                        if not h.is_zero():
                            nxt.setdefault((x, z.bits), []).append(h)
        power = {key: _reduce(v) for key, v in nxt.items()}
        power = {key: v for key, v in power.items() if v}
    if index is None:
        prop1 = False
    logger.info(f"{'✅' if prop1 and prop2 else '❌'} properties: prop1={prop1} prop2={prop2}")
    return PropertyReport(prop1, prop2, index)


def _reduce(morphisms: List[Morphism]) -> List[Morphism]:
    """A lattice basis of the span, as morphisms."""
    if not morphisms:
        return []
    n = len(morphisms[0].coeffs)
    rows, _ = hermite_rows([list(m.coeffs) for m in morphisms], n)
    ne = len(morphisms[0].even)
    src, tgt = morphisms[0].source, morphisms[0].target
    return [Morphism(src, tgt, tuple(r[:ne]), tuple(r[ne:])) for r in rows]


def pushforward_module(m: NTModule, f: MonotoneMap, target: PresentedCategory) -> NTModule:
    """f_*(M)(Z) = M(f^-1(Z)); arrows act through the canonical maps between preimages."""
    s = m.category.space
    builder = RelationBuilder(s, m.category.generators)
    extended = {}
    for z in target.objects:
        extended[z.bits] = extend_to_nonconnected(m, PointSet(s, f.preimage(z.bits)))
    actions = {}
    for k, a in enumerate(target.generators):
        src, tgt = f.preimage(a.source.bits), f.preimage(a.target.bits)
        es, et = extended[a.source.bits], extended[a.target.bits]
        if not src or not tgt:
            actions[k] = zeros(et.entry.size, es.entry.size)
            continue
        if a.kind == "i":
            block = builder.extension(src, tgt)
        elif a.kind == "r":
            block = builder.restriction(src, tgt)
        else:
            block = builder.boundary(src, tgt)
        actions[k] = block_matrix(m, block, es, et)
    entries = {z: e.entry for z, e in extended.items()}
    return NTModule(target, entries, actions, f"f_*({m.name})")
