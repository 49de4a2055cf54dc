"""
Linear enumeration of the free module P_Y = Hom(Y, -) of a presented category.

Symbols stand for paths out of Y. Each symbol is either live or has been
rewritten as an integer combination of older live symbols. Per object, the
relations among live symbols that could not be used for rewriting (non-unit
pivots) are kept as a residual lattice. Relations are pushed through every
generator, so the final state is closed under post-composition:

    Hom(Y, Z) = Z^{live symbols at Z} / residual lattice at Z

split by parity of the path degree.
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Sequence, Tuple

from common import config
from common.errors import PresentationDidNotConverge
from common.intmat import hermite_rows, smith_normal_form

logger = logging.getLogger(__name__)

Expr = Dict[int, int]
Path = Tuple[int, ...]


def _axpy(out: Expr, coeff: int, expr: Expr):
    """out += coeff * expr, dropping zeros."""
    if not coeff:
        return
    for s, c in expr.items():
        v = out.get(s, 0) + coeff * c
        if v:
            out[s] = v
        else:
            out.pop(s, None)


@dataclass(frozen=True)
class GeneratorTable:
    """Generator endpoints and degrees plus relations grouped by source object."""
    n_objects: int
    source: Tuple[int, ...]
    target: Tuple[int, ...]
    degree: Tuple[int, ...]
    out_generators: Tuple[Tuple[int, ...], ...]
    relations_at: Tuple[Tuple[Tuple[int, Tuple[Tuple[int, Path], ...]], ...], ...]


class PathEnumerator:
    """Enumerates P_Y for one source object."""

    def __init__(self, table: GeneratorTable, source: int,
                 max_word_length: int = None, max_symbols: int = None):
        self.table = table
        self.source = source
        self.max_word_length = max_word_length or config.MAX_WORD_LENGTH
        self.max_symbols = max_symbols or config.MAX_SYMBOLS

        self.obj: List[int] = []
        self.word: List[Path] = []
        self.parity: List[int] = []
        self.alive: List[bool] = []
        self.act: List[Dict[int, Expr]] = []
        self.subst: Dict[int, Expr] = {}
        self.users: Dict[int, set] = defaultdict(set)
        self.residual: List[List[Expr]] = [[] for _ in range(table.n_objects)]
        self.pending: Deque[Tuple[int, Expr]] = deque()
        self.done = False

    # -------------------------------------------------------------------------
    # Symbols
    # -------------------------------------------------------------------------

    def _new_symbol(self, obj: int, word: Path, parity: int) -> int:
        if len(word) > self.max_word_length:
            raise PresentationDidNotConverge(
                f"path length exceeded {self.max_word_length} from source object {self.source}")
        if len(self.obj) >= self.max_symbols:
            raise PresentationDidNotConverge(
                f"more than {self.max_symbols} symbols from source object {self.source}")
        self.obj.append(obj)
        self.word.append(word)
        self.parity.append(parity)
        self.alive.append(True)
        self.act.append({})
        return len(self.obj) - 1

    def normalize(self, expr: Expr) -> Expr:
        out: Expr = {}
        for s, c in expr.items():
            if self.alive[s]:
                _axpy(out, c, {s: 1})
            else:
                _axpy(out, c, self.subst[s])
        return out

    def _act_value(self, s: int, g: int) -> Expr:
        value = self.act[s].get(g)
        if value is None:
            t = self._new_symbol(self.table.target[g], self.word[s] + (g,),
                                 (self.parity[s] + self.table.degree[g]) % 2)
            value = {t: 1}
            self.act[s][g] = value
            return value
        if any(not self.alive[t] for t in value):
            value = self.normalize(value)
            self.act[s][g] = value
        return value

    def apply(self, g: int, expr: Expr) -> Expr:
        out: Expr = {}
        for s, c in expr.items():
            _axpy(out, c, self._act_value(s, g))
        return out

    def apply_path(self, path: Sequence[int], expr: Expr) -> Expr:
        for g in path:
            expr = self.apply(g, expr)
            if not expr:
                break
        return expr

    # -------------------------------------------------------------------------
    # Relations
    # -------------------------------------------------------------------------

    def _kill(self, t: int, value: Expr):
        self.alive[t] = False
        self.subst[t] = value
        for u in self.users.pop(t, ()):
            coeff = self.subst[u].pop(t, 0)
            if coeff:
                _axpy(self.subst[u], coeff, value)
                for v in value:
                    self.users[v].add(u)
        for v in value:
            self.users[v].add(t)
        for g, image in list(self.act[t].items()):
            diff = dict(self.normalize(image))
            _axpy(diff, -1, self.apply(g, value))
            self.pending.append((self.table.target[g], diff))
        self.act[t] = {}

    def _add_relation(self, obj: int, expr: Expr):
        e = self.normalize(expr)
        if not e:
            return
        rows = [r for r in (self.normalize(r) for r in self.residual[obj]) if r] + [e]
        cols = sorted(set().union(*rows), reverse=True)
        position = {s: j for j, s in enumerate(cols)}
        matrix = []
        for r in rows:
            row = [0] * len(cols)
            for s, c in r.items():
                row[position[s]] = c
            matrix.append(row)
        basis, pivots = hermite_rows(matrix, len(cols))

        kills = []
        residual = []
        for row, p in zip(basis, pivots):
            rest = {cols[j]: row[j] for j in range(p + 1, len(cols)) if row[j]}
            if row[p] == 1:
                kills.append((cols[p], {s: -c for s, c in rest.items()}))
            else:
                rest[cols[p]] = row[p]
                residual.append(rest)
        self.residual[obj] = residual
        for t, value in kills:
            self._kill(t, value)

        e = self.normalize(e)
        if e:
            for g in self.table.out_generators[obj]:
                self.pending.append((self.table.target[g], self.apply(g, e)))

    def _drain(self):
        while self.pending:
            obj, expr = self.pending.popleft()
            self._add_relation(obj, expr)

    # -------------------------------------------------------------------------
    # Driver
    # -------------------------------------------------------------------------

    def run(self) -> "PathEnumerator":
        if self.done:
            return self
        self._new_symbol(self.source, (), 0)
        cursor = 0
        while True:
            self._drain()
            if cursor >= len(self.obj):
                break
            s = cursor
            cursor += 1
            if not self.alive[s]:
                continue
            obj = self.obj[s]
            for g in self.table.out_generators[obj]:
                self._act_value(s, g)
            for target, terms in self.table.relations_at[obj]:
                value: Expr = {}
                for coeff, path in terms:
                    _axpy(value, coeff, self.apply_path(path, {s: 1}))
                self.pending.append((target, value))
        n_symbols = len(self.obj)
        for s in range(n_symbols):
            if self.alive[s]:
                for g in self.table.out_generators[self.obj[s]]:
                    self._act_value(s, g)
        if len(self.obj) != n_symbols:
            raise PresentationDidNotConverge(f"enumeration from source object {self.source} did not close")
        self.done = True
        live = sum(self.alive)
        logger.debug(f"source {self.source}: {len(self.obj)} symbols, {live} live")
        return self

    def live_symbols(self, obj: int, parity: int) -> List[int]:
        return [s for s in range(len(self.obj))
                if self.alive[s] and self.obj[s] == obj and self.parity[s] == parity]

    def presentation(self, obj: int, parity: int) -> "HomPresentation":
        symbols = self.live_symbols(obj, parity)
        index = set(symbols)
        rows = []
        for r in self.residual[obj]:
            r = self.normalize(r)
            if r and set(r) <= index:
                rows.append([r.get(s, 0) for s in symbols])
        return HomPresentation.from_rows(symbols, rows)


@dataclass
class HomPresentation:
    """
    Z^k / rowspace(rows) with Smith data.

    Row vectors x over the symbols have free coordinates (x Q)[r:], where r
    is the number of nonzero invariant factors; the j-th free basis element
    is row r + j of Q^-1.
    """
    symbols: List[int]
    rows: List[List[int]]
    diag: List[int]
    Q: List[List[int]]
    Q_inv: List[List[int]]
    r: int

    @classmethod
    def from_rows(cls, symbols: List[int], rows: List[List[int]]) -> "HomPresentation":
        k = len(symbols)
        if rows:
            diag, _, Q, Q_inv = smith_normal_form(rows, k)
        else:
            diag = []
            Q = [[int(i == j) for j in range(k)] for i in range(k)]
            Q_inv = [row[:] for row in Q]
        r = len([d for d in diag if d])
        return cls(symbols, rows, [d for d in diag if d], Q, Q_inv, r)

    @property
    def free_rank(self) -> int:
        return len(self.symbols) - self.r

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diag if d > 1)

    def coords(self, expr: Expr) -> List[int]:
        if not self.symbols:
            return []
        x = [expr.get(s, 0) for s in self.symbols]
        k = len(self.symbols)
        return [sum(x[i] * self.Q[i][j] for i in range(k) if x[i]) for j in range(self.r, k)]

    def basis_vector(self, j: int) -> Expr:
        row = self.Q_inv[self.r + j]
        return {s: c for s, c in zip(self.symbols, row) if c}
