"""
Exact modules of projective dimension two.

For an object Y, j: P_Y -> P0 collects precomposition with every
indecomposable arrow nu: Z -> Y, where P0 is the sum of the P_Z shifted by the
degree of nu. When j is injective, M = coker(j) is entry-free and exact, and
Hom(P0, P_Y) = 0, the module M_k = M / kM has the resolution

    0 -> P_Y --(-k, j)--> P_Y + P0 --(j, k)--> P0 -> M_k

and Ext^2(M_k, P_Y) = Hom(P_Y, P_Y) / k is cyclic of order k.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

from common.errors import PipelinePreconditionFailed
from common.intmat import quotient_invariants, rank
from modules.ntcat.category import Indecomposable, PresentedCategory, indecomposable_arrows
from modules.ntmodules.modules import (
    ModuleMap, NTModule, Resolution, cokernel, direct_sum, free_module, hom_basis_layout, is_exact,
    module_hom_space, morphism_coords, quotient_map, scalar_map, scalar_quotient,
)

logger = logging.getLogger(__name__)

J_INJECTIVE = "j is injective"
M_ENTRY_FREE = "coker(j) is entry-free"
NO_SPLITTING = "Hom(P0, P_Y) = 0"
RESOLUTION_EXACT = "the resolution of M_k is exact"


@dataclass
class CounterexampleReport:
    y: str
    k: int
    indecomposables: List[Indecomposable]
    j: ModuleMap
    M: NTModule
    M_k: NTModule
    resolution: Resolution
    j_injective: bool
    m_entry_free: bool
    m_exact: bool
    resolution_exact: bool
    hom_p0_py_rank: int
    ext2_order: int

    def as_dict(self) -> Dict:
        return {
            "y": self.y,
            "k": self.k,
            "P0": [f"{ind.source}{'[1]' if ind.morphism.degree == 1 else ''}" for ind in self.indecomposables],
            "j_injective": self.j_injective,
            "M_entries": self.M.entry_table(),
            "M_entry_free": self.m_entry_free,
            "M_exact": self.m_exact,
            "hom_P0_PY_rank": self.hom_p0_py_rank,
            "resolution_exact": self.resolution_exact,
            "ext2_order": self.ext2_order,
        }


def _precomposition(c: PresentedCategory, source: NTModule, target: NTModule, nu: Indecomposable) -> ModuleMap:
    """P_Y -> P_Z[deg nu], phi -> phi . nu."""
    shift = nu.morphism.degree or 0
    y = nu.target
    comps = {}
    for w in c.objects:
        columns = [morphism_coords(c.compose(b, nu.morphism), shift) for b in hom_basis_layout(c, y, w, 0)]
        n_rows = target.entries[w.bits].size
        comps[w.bits] = [[col[i] for col in columns] for i in range(n_rows)]
    return ModuleMap(source, target, comps)


def build_j(c: PresentedCategory, y) -> tuple:
    """P_Y, P0, the indecomposables into Y and j."""
    y = c.objects[c.obj(y)]
    into_y = [ind for ind in indecomposable_arrows(c) if ind.target == y]
    p_y = free_module(c, y)
    summands = [free_module(c, ind.source, ind.morphism.degree or 0) for ind in into_y]
    p0, inclusions, _ = direct_sum(summands, name="P0")
    comps = {w: [[0] * p_y.entries[w].size for _ in range(p0.entries[w].size)] for w in p_y.entries}
    for ind, summand, inc in zip(into_y, summands, inclusions):
        part = _precomposition(c, p_y, summand, ind).then(inc)
        for w, m in part.components.items():
            comps[w] = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(comps[w], m)]
    return p_y, p0, into_y, ModuleMap(p_y, p0, comps)


def _stack(top: ModuleMap, bottom: ModuleMap, source: NTModule, target: NTModule) -> ModuleMap:
    """(top, bottom): source -> top.target + bottom.target."""
    return ModuleMap(source, target, {w: top.components[w] + bottom.components[w] for w in source.entries})


def _side_by_side(left: ModuleMap, right: ModuleMap, source: NTModule, target: NTModule) -> ModuleMap:
    """(left right): left.source + right.source -> target."""
    comps = {}
    for w in target.entries:
        n = target.entries[w].size
        comps[w] = [left.components[w][i] + right.components[w][i] for i in range(n)]
    return ModuleMap(source, target, comps)


def counterexample_pipeline(c: PresentedCategory, y, k: int) -> CounterexampleReport:
    """
    Build M, M_k and the resolution for Y and compute Ext^2(M_k, P_Y).

    Raises:
        PipelinePreconditionFailed: j not injective, coker(j) with torsion, a
            non-zero map P0 -> P_Y, or a resolution that fails to be exact
    """
    if k < 2:
        raise PipelinePreconditionFailed("k >= 2", f"got k={k}")
    p_y, p0, into_y, j = build_j(c, y)
    y_name = str(c.objects[c.obj(y)])

    kernels = [w for w, m in j.components.items()
               if p_y.entries[w].size and (not m or rank(m, p_y.entries[w].size) != p_y.entries[w].size)]
    j_injective = not kernels and j.is_natural()
    if not j_injective:
        where = f"kernel at {c.space.name(kernels[0])}" if kernels else "j is not a module map"
        raise PipelinePreconditionFailed(J_INJECTIVE, where)

    M, _ = cokernel(j, name=f"M({y_name})")
    torsion = [w for w, e in M.entries.items() if not e.is_free()]
    m_entry_free = not torsion
    if not m_entry_free:
        raise PipelinePreconditionFailed(M_ENTRY_FREE, f"torsion at {c.space.name(torsion[0])}")
    m_exact = is_exact(M)
    if not m_exact:
        logger.warning(f"⚠️ coker(j) for Y={y_name} is not exact")

    hom = module_hom_space(p0, p_y)
    if hom.free_rank or hom.torsion:
        raise PipelinePreconditionFailed(NO_SPLITTING, f"rank {hom.free_rank}")

    M_k = scalar_quotient(M, k)
    middle, _, _ = direct_sum([p_y, p0], name="P_Y + P0")
    d2 = _stack(scalar_map(p_y, -k), j, p_y, middle)
    d1 = _side_by_side(j, scalar_map(p0, k), middle, p0)
    resolution = Resolution([p_y, middle, p0], [d2, d1], M_k, quotient_map(p0, M_k))
    failure = resolution.failure()
    if failure is not None:
        o, stage = failure
        raise PipelinePreconditionFailed(RESOLUTION_EXACT, f"stage {stage} over {o}")

    ext2_order = _ext2_order(p_y, p0, j, k)
    logger.info(f"✅ Y={y_name}, k={k}: Ext^2(M_k, P_Y) has order {ext2_order}")
    return CounterexampleReport(y_name, k, into_y, j, M, M_k, resolution, j_injective, m_entry_free,
                                m_exact, failure is None, hom.free_rank, ext2_order)


def _ext2_order(p_y: NTModule, p0: NTModule, j: ModuleMap, k: int) -> int:
    """|Hom(P_Y, P_Y) / (k Hom(P_Y, P_Y) + Hom(P0, P_Y) . j)|, 0 for infinite."""
    end = module_hom_space(p_y, p_y)
    images = [[-k * int(i == t) for i in range(end.free_rank)] for t in range(end.free_rank)]
    for beta in module_hom_space(p0, p_y).basis:
        images.append(end.coordinates(j.then(beta)))
    free, torsion = quotient_invariants(end.free_rank, [v for v in images if v is not None and any(v)])
    if free:
        return 0
    order = 1
    for d in torsion:
        order *= d
    return order
