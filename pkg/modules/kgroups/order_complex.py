"""
Order complexes and the K-groups of the locally closed pieces S(Y, Z).

Ch(X) is the simplicial complex of chains of X. S(Y, Z) consists of the open
simplices whose least vertex lies in Y and whose greatest vertex lies in Z;
its compactly supported cohomology is the simplicial cohomology of the pair
(K, L) with K = Ch(Y~ & Z-) and L = Ch(Y~ & dZ-) u Ch(dY~ & Z-). K-theory is
read off as even/odd cohomology, which is exact as long as no torsion and no
class above degree 2 shows up; otherwise a warning is logged.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import pandas as pd

from common.errors import FktError, NotLocallyClosed
from common.intmat import invariant_factors
from modules.poset.poset_core import PointSet, Space, members_of

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


# =============================================================================
# Graded groups
# =============================================================================

@dataclass(frozen=True)
class GradedAbelianGroup:
    """Z/2-graded finitely generated abelian group."""
    even_rank: int = 0
    odd_rank: int = 0
    even_torsion: Tuple[int, ...] = ()
    odd_torsion: Tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return not (self.even_rank or self.odd_rank or self.even_torsion or self.odd_torsion)

    def is_free(self) -> bool:
        return not (self.even_torsion or self.odd_torsion)

    @property
    def total_rank(self) -> int:
        return self.even_rank + self.odd_rank

    def shifted(self, shift: int = 1) -> "GradedAbelianGroup":
        if shift % 2 == 0:
            return self
        return GradedAbelianGroup(self.odd_rank, self.even_rank, self.odd_torsion, self.even_torsion)

    def __add__(self, other: "GradedAbelianGroup") -> "GradedAbelianGroup":
        return GradedAbelianGroup(
            self.even_rank + other.even_rank,
            self.odd_rank + other.odd_rank,
            tuple(sorted(self.even_torsion + other.even_torsion)),
            tuple(sorted(self.odd_torsion + other.odd_torsion)),
        )

    def notation(self) -> str:
        """ℤ[0], ℤ[1]², ℤ[0]⊕ℤ/2[1] or 0."""
        parts = []
        for degree, rank, torsion in ((0, self.even_rank, self.even_torsion),
                                      (1, self.odd_rank, self.odd_torsion)):
            if rank:
                power = str(rank).translate(_SUPERSCRIPTS) if rank > 1 else ""
                parts.append(f"ℤ[{degree}]{power}")
            for d in torsion:
                parts.append(f"ℤ/{d}[{degree}]")
        return "⊕".join(parts) if parts else "0"

    def as_dict(self) -> Dict:
        return {
            "even_rank": self.even_rank,
            "odd_rank": self.odd_rank,
            "even_torsion": list(self.even_torsion),
            "odd_torsion": list(self.odd_torsion),
        }

    def __str__(self) -> str:
        return self.notation()


Z0 = GradedAbelianGroup(even_rank=1)
Z1 = GradedAbelianGroup(odd_rank=1)
ZERO = GradedAbelianGroup()


# =============================================================================
# Complexes
# =============================================================================

@dataclass(frozen=True)
class SimplicialComplex:
    """
    Chains of a poset, each stored with vertices in increasing order.

    The least vertex of a simplex is simplex[0], the greatest simplex[-1].
    """
    space: Space
    simplices: FrozenSet[Simplex]

    def by_dimension(self) -> Dict[int, List[Simplex]]:
        out: Dict[int, List[Simplex]] = {}
        for sigma in sorted(self.simplices, key=lambda t: (len(t), t)):
            out.setdefault(len(sigma) - 1, []).append(sigma)
        return out

    @property
    def dimension(self) -> int:
        return max((len(t) - 1 for t in self.simplices), default=-1)

    def __len__(self) -> int:
        return len(self.simplices)


@dataclass(frozen=True)
class CompactPair:
    K: SimplicialComplex
    L: SimplicialComplex

    @property
    def relative_simplices(self) -> FrozenSet[Simplex]:
        return self.K.simplices - self.L.simplices


@lru_cache(maxsize=64)
def _all_chains(s: Space) -> Tuple[Simplex, ...]:
    out: List[Simplex] = []

    def grow(chain: Simplex):
        out.append(chain)
        top = chain[-1]
        for y in members_of(s.above[top] & ~(1 << top)):
            grow(chain + (y,))

    for x in range(s.n_points):
        grow((x,))
    return tuple(out)


def _chains_within(s: Space, mask: int) -> FrozenSet[Simplex]:
    return frozenset(c for c in _all_chains(s) if all(mask >> p & 1 for p in c))


def order_complex(s: Space, subset: Optional[PointSet] = None) -> SimplicialComplex:
    """Ch(X), or Ch(subset) when a subset is given."""
    mask = s.full if subset is None else subset.bits
    return SimplicialComplex(s, _chains_within(s, mask))


def s_pair(s: Space, y: PointSet, z: PointSet) -> CompactPair:
    """
    The compact pair whose difference realises S(Y, Z).

    Raises:
        NotLocallyClosed: Y or Z is not locally closed
    """
    for label, part in (("Y", y), ("Z", z)):
        if not s.is_locally_closed(part.bits):
            raise NotLocallyClosed(f"{label} = {part} is not locally closed")
    up_y = s.up(y.bits)
    down_z = s.down(z.bits)
    k_mask = up_y & down_z
    K = _chains_within(s, k_mask)
    L = _chains_within(s, up_y & (down_z & ~z.bits)) | _chains_within(s, (up_y & ~y.bits) & down_z)

    direct = frozenset(c for c in _all_chains(s) if y.bits >> c[0] & 1 and z.bits >> c[-1] & 1)
    if K - L != direct:
        raise FktError(f"S({y},{z}): boundary formula disagrees with the min/max filter")
    return CompactPair(SimplicialComplex(s, K), SimplicialComplex(s, L))


# =============================================================================
# Cohomology
# =============================================================================

def _coboundary(rows: Sequence[Simplex], cols: Sequence[Simplex]) -> List[List[int]]:
    """Matrix of d: C^k -> C^(k+1), rows indexed by (k+1)-simplices."""
    index = {sigma: j for j, sigma in enumerate(cols)}
    matrix = []
    for tau in rows:
        row = [0] * len(cols)
        for i in range(len(tau)):
            face = tau[:i] + tau[i + 1:]
            j = index.get(face)
            if j is not None:
                row[j] += -1 if i % 2 else 1
        matrix.append(row)
    return matrix


def relative_cohomology(p: CompactPair) -> List[Tuple[int, int, Tuple[int, ...]]]:
    """H^k(K, L; Z) for k = 0 .. dim K as (degree, free rank, torsion)."""
    cells: Dict[int, List[Simplex]] = {}
    for sigma in sorted(p.relative_simplices, key=lambda t: (len(t), t)):
        cells.setdefault(len(sigma) - 1, []).append(sigma)
    top = p.K.dimension
    if top < 0:
        return []

    ranks: Dict[int, int] = {}
    factors: Dict[int, List[int]] = {}
    for k in range(-1, top + 1):
        rows = cells.get(k + 1, [])
        cols = cells.get(k, [])
        if rows and cols:
            f = invariant_factors(_coboundary(rows, cols), len(cols))
        else:
            f = []
        ranks[k] = len(f)
        factors[k] = f

    out = []
    for k in range(top + 1):
        dim = len(cells.get(k, []))
        free = dim - ranks[k] - ranks[k - 1]
        torsion = tuple(d for d in factors[k - 1] if d > 1)
        out.append((k, free, torsion))
    return out


def is_degenerate(cohomology: Sequence[Tuple[int, int, Tuple[int, ...]]]) -> bool:
    """Torsion or classes above degree 2 make the cohomology-to-K-theory step unreliable."""
    return any(torsion or (k >= 3 and free) for k, free, torsion in cohomology)


def k_groups_checked(s: Space, y: PointSet, z: PointSet) -> Tuple[GradedAbelianGroup, bool]:
    cohomology = relative_cohomology(s_pair(s, y, z))
    even_rank = sum(free for k, free, _ in cohomology if k % 2 == 0)
    odd_rank = sum(free for k, free, _ in cohomology if k % 2 == 1)
    even_torsion = tuple(sorted(d for k, _, t in cohomology if k % 2 == 0 for d in t))
    odd_torsion = tuple(sorted(d for k, _, t in cohomology if k % 2 == 1 for d in t))
    degenerate = is_degenerate(cohomology)
    if degenerate:
        logger.warning(f"⚠️ S({y},{z}) has torsion or high-degree cohomology, K-groups may be off")
    return GradedAbelianGroup(even_rank, odd_rank, even_torsion, odd_torsion), degenerate


def k_groups(s: Space, y: PointSet, z: PointSet) -> GradedAbelianGroup:
    """K*(S(Y, Z)), identified with the group of natural transformations from Y to Z."""
    group, _ = k_groups_checked(s, y, z)
    return group


# =============================================================================
# Tables
# =============================================================================

@dataclass
class HomTable:
    """Groups for all ordered pairs of objects, rows = source Y, columns = target Z."""
    space: Space
    objects: List[PointSet]
    groups: Dict[Tuple[int, int], GradedAbelianGroup] = field(default_factory=dict)

    def get(self, y: PointSet, z: PointSet) -> GradedAbelianGroup:
        return self.groups[(y.bits, z.bits)]

    def to_frame(self) -> pd.DataFrame:
        names = [str(o) for o in self.objects]
        data = [[self.groups[(y.bits, z.bits)].notation() for z in self.objects] for y in self.objects]
        df = pd.DataFrame(data, index=names, columns=names)
        df.index.name = "Y \\ Z"
        return df


def k_group_table(s: Space, objects: Optional[List[PointSet]] = None) -> HomTable:
    """Order-complex groups on LC*(X) x LC*(X), or on the given objects."""
    if objects is None:
        objects = [PointSet(s, m) for m in s.lc_connected_masks]
    table = HomTable(s, list(objects))
    for y in objects:
        for z in objects:
            table.groups[(y.bits, z.bits)] = k_groups(s, y, z)
    logger.info(f"✅ K-group table on {len(objects)} objects")
    return table
