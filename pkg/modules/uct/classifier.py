"""
UCT classifier for finite T0-spaces.

A space satisfies the UCT for filtrated K-theory iff each connected component
is an accordion, i.e. its Hasse diagram is an undirected path. Otherwise a
witness is produced: an embedded copy of X1 or X2, a retract onto X3, X4, the
pseudo-square S or a pseudocircle C_n.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from common.errors import FktError, IsTypeA, NotConnected
from modules.poset.builtins import accordion, cycle_space, model_space
from modules.poset.poset_core import (
    MonotoneMap, PointSet, Space, bits_of, induced_subspace, is_isomorphic,
    is_monotone_map, members_of, popcount,
)

logger = logging.getLogger(__name__)


# =============================================================================
# Types
# =============================================================================

class WitnessKind(str, Enum):
    SUBGRAPH_X1 = "SubgraphX1"
    SUBGRAPH_X2 = "SubgraphX2"
    RETRACT_X3 = "RetractX3"
    RETRACT_X4 = "RetractX4"
    RETRACT_S = "RetractS"
    RETRACT_CN = "RetractCn"


_MODEL_OF_KIND = {
    WitnessKind.SUBGRAPH_X1: "X1",
    WitnessKind.SUBGRAPH_X2: "X2",
    WitnessKind.RETRACT_X3: "X3",
    WitnessKind.RETRACT_X4: "X4",
    WitnessKind.RETRACT_S: "S",
}


@dataclass(frozen=True)
class AccordionForm:
    """
    O_{n_1} v ... v O_{n_m} together with the walk that realises it.

    walk[j] is the point at position j of the total order used for intervals;
    chain i (1-based) covers walk positions start(i) .. start(i) + n_i - 1.
    """
    m: int
    n: Tuple[int, ...]
    walk: Tuple[int, ...]

    @property
    def n_points(self) -> int:
        return len(self.walk)

    def start(self, i: int) -> int:
        return sum(k - 1 for k in self.n[:i - 1])

    def point(self, a: int, i: int) -> int:
        """The point a^i."""
        s = self.start(i)
        if i % 2:
            return self.walk[s + a - 1]
        return self.walk[s + self.n[i - 1] - a]

    @property
    def position(self) -> Dict[int, int]:
        return {p: j for j, p in enumerate(self.walk)}

    @property
    def point_labels(self) -> Dict[int, List[str]]:
        labels: Dict[int, List[str]] = {p: [] for p in self.walk}
        for i in range(1, self.m + 1):
            for a in range(1, self.n[i - 1] + 1):
                labels[self.point(a, i)].append(f"{a}^{i}")
        return labels

    def as_dict(self) -> Dict:
        return {"m": self.m, "n": list(self.n)}


@dataclass(frozen=True)
class Witness:
    """
    Certificate that a connected space fails the UCT.

    embedding maps model point indices to points of the ambient space. For
    retract kinds, f and g are maps between the subspace on `domain` and the
    model with f after g the identity of the model.
    """
    kind: WitnessKind
    model: Space
    embedding: Tuple[int, ...]
    domain: PointSet
    f: Optional[MonotoneMap] = None
    g: Optional[MonotoneMap] = None
    cycle_length: int = 0

    @property
    def retraction_pair(self) -> Optional[Tuple[MonotoneMap, MonotoneMap]]:
        if self.f is None:
            return None
        return self.f, self.g


@dataclass
class UctVerdict:
    holds: bool
    components: List[Tuple[PointSet, AccordionForm]] = field(default_factory=list)
    witness: Optional[Witness] = None
    failing_component: Optional[PointSet] = None


# =============================================================================
# Accordion recognition
# =============================================================================

def _form_from_walk(s: Space, walk: List[int]) -> Tuple[int, ...]:
    runs: List[int] = []
    directions: List[bool] = []
    for a, b in zip(walk, walk[1:]):
        up = s.leq_point(a, b)
        if directions and directions[-1] == up:
            runs[-1] += 1
        else:
            directions.append(up)
            runs.append(2)
    if not runs:
        return 1, 1
    ns = list(runs)
    if not directions[0]:
        ns.insert(0, 1)
    if len(ns) % 2:
        ns.append(1)
    return tuple(ns)


def is_type_a(s: Space) -> Optional[AccordionForm]:
    """
    Accordion form of a connected space, or None.

    Of the two walks along the path, the one whose chain lengths are
    lexicographically greatest is reported (O_n gives (n, 1)).

    Raises:
        NotConnected: empty or disconnected input
    """
    if not s.is_connected(s.full):
        raise NotConnected(f"space with {s.n_points} points is not connected")
    if s.n_points == 1:
        return AccordionForm(m=2, n=(1, 1), walk=(0,))

    neighbours = [s.lower_covers[v] | s.upper_covers[v] for v in range(s.n_points)]
    deg = [popcount(nb) for nb in neighbours]
    if any(d > 2 for d in deg):
        return None
    ends = [v for v in range(s.n_points) if deg[v] == 1]
    if len(ends) != 2:
        return None

    candidates = []
    for start in ends:
        walk = [start]
        prev = None
        current = start
        while True:
            nxt = [v for v in members_of(neighbours[current]) if v != prev]
            if not nxt:
                break
            prev, current = current, nxt[0]
            walk.append(current)
        candidates.append((_form_from_walk(s, walk), walk))

    (form_a, walk_a), (form_b, walk_b) = candidates
    ns, walk = (form_a, walk_a) if form_a >= form_b else (form_b, walk_b)
    return AccordionForm(m=len(ns), n=ns, walk=tuple(walk))


def reconstruct(form: AccordionForm) -> Space:
    """Accordion built from the chain lengths alone."""
    return accordion(form.n)


# =============================================================================
# Witness search
# =============================================================================

def _model_for(kind: WitnessKind, cycle_length: int = 0) -> Space:
    if kind == WitnessKind.RETRACT_CN:
        return cycle_space(cycle_length)
    return model_space(_MODEL_OF_KIND[kind])


def _subgraph_witness(s: Space) -> Optional[Witness]:
    up = [members_of(s.upper_covers[v]) for v in range(s.n_points)]
    down = [members_of(s.lower_covers[v]) for v in range(s.n_points)]
    for kind in (WitnessKind.SUBGRAPH_X1, WitnessKind.SUBGRAPH_X2,
                 WitnessKind.RETRACT_X3, WitnessKind.RETRACT_X4):
        for v in range(s.n_points):
            if kind == WitnessKind.SUBGRAPH_X1 and len(up[v]) >= 3:
                emb = (up[v][0], up[v][1], up[v][2], v)
            elif kind == WitnessKind.SUBGRAPH_X2 and len(down[v]) >= 3:
                emb = (down[v][0], down[v][1], down[v][2], v)
            elif kind == WitnessKind.RETRACT_X3 and len(up[v]) >= 2 and down[v]:
                emb = (up[v][0], up[v][1], v, down[v][0])
            elif kind == WitnessKind.RETRACT_X4 and len(down[v]) >= 2 and up[v]:
                emb = (down[v][0], down[v][1], v, up[v][0])
            else:
                continue
            model = _model_for(kind)
            image = bits_of(emb)
            if kind in (WitnessKind.SUBGRAPH_X1, WitnessKind.SUBGRAPH_X2):
                logger.debug(f"{kind.value} around point {s.labels[v]}")
                return Witness(kind, model, emb, PointSet(s, image))
            return _retract_onto_model(s, kind, model, emb)
    return None


def _retract_onto_model(s: Space, kind: WitnessKind, model: Space, emb: Tuple[int, ...]) -> Witness:
    """X3/X4: the hull of the image retracts onto it, extra points going to the middle point 3."""
    domain = s.hull(bits_of(emb))
    sub, inclusion = induced_subspace(s, PointSet(s, domain))
    local = {p: i for i, p in enumerate(inclusion)}
    to_model = {local[x]: q for q, x in enumerate(emb)}
    f = MonotoneMap(sub, model, tuple(to_model.get(i, 2) for i in range(sub.n_points)))
    g = MonotoneMap(model, sub, tuple(local[x] for x in emb))
    return Witness(kind, model, emb, PointSet(s, domain), f, g)


def _cycle_witness(s: Space) -> Witness:
    """All degrees are 2: retract onto S (one maximum) or onto C_n (n maxima)."""
    maxima = [v for v in range(s.n_points) if not s.upper_covers[v]]
    a = maxima[0]
    walk = [a]
    prev, current = None, a
    first = members_of(s.lower_covers[a])[0]
    while True:
        if prev is None:
            nxt = first
        else:
            nxt = [v for v in members_of(s.lower_covers[current] | s.upper_covers[current]) if v != prev][0]
        if nxt == a:
            break
        prev, current = current, nxt
        walk.append(current)

    sub, inclusion = induced_subspace(s, PointSet(s, s.full))
    n_max = len(maxima)
    if n_max == 1:
        model = model_space("S")
        bottom = [v for v in range(s.n_points) if not s.lower_covers[v]][0]
        b_pos = walk.index(bottom)
        assignment = [0] * s.n_points
        for j, p in enumerate(walk):
            if p == a:
                assignment[p] = 0
            elif p == bottom:
                assignment[p] = 3
            else:
                assignment[p] = 1 if j < b_pos else 2
        emb = (a, walk[1], walk[-1], bottom)
        f = MonotoneMap(sub, model, tuple(assignment))
        g = MonotoneMap(model, sub, emb)
        return Witness(WitnessKind.RETRACT_S, model, emb, PointSet(s, s.full), f, g)

    model = cycle_space(n_max)
    assignment = [0] * s.n_points
    emb = [0] * model.n_points
    k = -1
    for p in walk:
        if not s.upper_covers[p]:
            k += 1
            j = (-k) % n_max
            assignment[p] = 2 * j + 1
            emb[2 * j + 1] = p
        else:
            j = (-k) % n_max
            assignment[p] = 2 * j
            if not s.lower_covers[p]:
                emb[2 * j] = p
    f = MonotoneMap(sub, model, tuple(assignment))
    g = MonotoneMap(model, sub, tuple(emb))
    return Witness(WitnessKind.RETRACT_CN, model, tuple(emb), PointSet(s, s.full), f, g, cycle_length=n_max)


def find_witness(s: Space) -> Witness:
    """
    Witness that a connected, non-accordion space fails the UCT.

    Raises:
        IsTypeA: the space is an accordion
    """
    form = is_type_a(s)
    if form is not None:
        raise IsTypeA(f"space is an accordion of shape {list(form.n)}")
    witness = _subgraph_witness(s)
    if witness is not None:
        return witness
    if any(popcount(s.lower_covers[v] | s.upper_covers[v]) != 2 for v in range(s.n_points)):
        raise FktError("a point of degree >= 3 carries none of the four forbidden configurations")
    return _cycle_witness(s)


# =============================================================================
# Verification and classification
# =============================================================================

def witness_check(s: Space, w: Witness) -> bool:
    """Independent check of a witness against its ambient space."""
    try:
        model = _model_for(w.kind, w.cycle_length)
    except (KeyError, FktError):
        return False
    if model != w.model or len(w.embedding) != model.n_points:
        return False
    if len(set(w.embedding)) != len(w.embedding) or any(not 0 <= x < s.n_points for x in w.embedding):
        return False

    if w.kind != WitnessKind.RETRACT_CN and w.kind != WitnessKind.RETRACT_S:
        model_edges = set(model.hasse_edge_list)
        space_edges = set(s.hasse_edge_list)
        for p in range(model.n_points):
            for q in range(model.n_points):
                if p != q and ((p, q) in model_edges) != ((w.embedding[p], w.embedding[q]) in space_edges):
                    return False

    if w.kind in (WitnessKind.SUBGRAPH_X1, WitnessKind.SUBGRAPH_X2):
        return w.domain.bits == bits_of(w.embedding) and s.is_locally_closed(w.domain.bits)

    if w.f is None or w.g is None:
        return False
    if not s.is_locally_closed(w.domain.bits):
        return False
    sub, inclusion = induced_subspace(s, w.domain)
    if w.f.source != sub or w.f.target != model or w.g.source != model or w.g.target != sub:
        return False
    if not (is_monotone_map(w.f) and is_monotone_map(w.g)):
        return False
    if any(w.f(w.g(p)) != p for p in range(model.n_points)):
        return False
    return all(inclusion[w.g(p)] == w.embedding[p] for p in range(model.n_points))


def _lift(w: Witness, s: Space, inclusion: Tuple[int, ...]) -> Witness:
    emb = tuple(inclusion[x] for x in w.embedding)
    domain = PointSet(s, bits_of(inclusion[x] for x in w.domain.members))
    return Witness(w.kind, w.model, emb, domain, w.f, w.g, w.cycle_length)


def classify_uct(s: Space) -> UctVerdict:
    """Decide UCT(X) component by component."""
    comps = s.components(s.full)
    forms: List[Tuple[PointSet, AccordionForm]] = []
    for comp in comps:
        sub, inclusion = induced_subspace(s, PointSet(s, comp))
        form = is_type_a(sub)
        if form is None:
            witness = _lift(find_witness(sub), s, inclusion)
            logger.info(f"❌ UCT fails: {witness.kind.value} in component {s.name(comp)}")
            return UctVerdict(holds=False, witness=witness, failing_component=PointSet(s, comp))
        lifted = AccordionForm(form.m, form.n, tuple(inclusion[p] for p in form.walk))
        forms.append((PointSet(s, comp), lifted))
    logger.info(f"✅ UCT holds: {len(forms)} accordion component(s)")
    return UctVerdict(holds=True, components=forms)


def verdict_to_dict(s: Space, verdict: UctVerdict) -> Dict:
    if verdict.holds:
        return {
            "holds": True,
            "components": [
                {"points": [s.labels[p] for p in form.walk], **form.as_dict()}
                for _, form in verdict.components
            ],
        }
    w = verdict.witness
    out = {
        "kind": w.kind.value,
        "embedding": {w.model.labels[q]: s.labels[x] for q, x in enumerate(w.embedding)},
        "domain": list(w.domain.labels),
    }
    if w.f is not None:
        out["f"] = {w.f.source.labels[i]: w.model.labels[q] for i, q in enumerate(w.f.assignment)}
        out["g"] = {w.model.labels[q]: w.g.target.labels[i] for q, i in enumerate(w.g.assignment)}
    if w.kind == WitnessKind.RETRACT_CN:
        out["n"] = w.cycle_length
    return {"holds": False, "witness": out}


def is_accordion_space(s: Space) -> bool:
    """True when s is connected and isomorphic to the accordion of its own form."""
    if not s.is_connected(s.full):
        return False
    form = is_type_a(s)
    return form is not None and is_isomorphic(reconstruct(form), s)
