"""
Exact integer linear algebra on plain Python ints.

Matrices are lists of rows. Vectors are lists. All routines are pure and
return fresh lists, so callers can keep their inputs.

Conventions:
    smith_normal_form(A) -> (diag, P, Q, Q_inv) with P @ A @ Q = D
    hermite_rows(rows)   -> row-style Hermite basis of the row lattice
    kernel_basis(A)      -> integer basis of {x : A x = 0}
"""

from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]
Vector = List[int]


# =============================================================================
# Basic helpers
# =============================================================================

def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def copy_matrix(a: Sequence[Sequence[int]]) -> Matrix:
    return [[int(x) for x in row] for row in a]


def transpose(a: Sequence[Sequence[int]], ncols: int = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int = None,
            ncols: int = None) -> Matrix:
    """Product of an m x k and a k x n matrix; `inner` and `ncols` disambiguate k = 0 and n = 0."""
    m = len(a)
    k = len(a[0]) if m else (inner or 0)
    n = len(b[0]) if b else (ncols or 0)
    out = zeros(m, n)
    for i in range(m):
        row = a[i]
        out_row = out[i]
        for t in range(k):
            coeff = row[t]
            if coeff:
                b_row = b[t]
                for j in range(n):
                    if b_row[j]:
                        out_row[j] += coeff * b_row[j]
    return out


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return [sum(c * x for c, x in zip(row, v) if c and x) for row in a]


def is_zero_vector(v: Sequence[int]) -> bool:
    return all(x == 0 for x in v)


def block_diagonal(blocks: Sequence[Matrix], shapes: Sequence[Tuple[int, int]]) -> Matrix:
    """Block-diagonal matrix; `shapes` gives (rows, cols) so empty blocks keep their size."""
    total_rows = sum(r for r, _ in shapes)
    total_cols = sum(c for _, c in shapes)
    out = zeros(total_rows, total_cols)
    r0 = c0 = 0
    for block, (r, c) in zip(blocks, shapes):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = block[i][j]
        r0 += r
        c0 += c
    return out


# =============================================================================
# Smith normal form
# =============================================================================

def smith_normal_form(a: Sequence[Sequence[int]], ncols: int = None) -> Tuple[List[int], Matrix, Matrix, Matrix]:
    """
    Smith normal form with transforms.

    Args:
        a: m x n integer matrix (list of rows)
        ncols: number of columns, needed only when m == 0

    Returns:
        (diag, P, Q, Q_inv) where P @ a @ Q is diagonal with entries diag
        (length min(m, n), non-negative, each dividing the next nonzero one)
        and Q_inv @ Q = I.
    """
    A = copy_matrix(a)
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    P = identity(m)
    Q = identity(n)
    Qi = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]
        Qi[i], Qi[j] = Qi[j], Qi[i]

    def add_row(target, source, q):
        # row_target += q * row_source
        A[target] = [x + q * y for x, y in zip(A[target], A[source])]
        P[target] = [x + q * y for x, y in zip(P[target], P[source])]

    def add_col(target, source, q):
        # col_target += q * col_source; inverse acts on rows of Q_inv
        for row in A:
            row[target] += q * row[source]
        for row in Q:
            row[target] += q * row[source]
        Qi[source] = [x - q * y for x, y in zip(Qi[source], Qi[target])]

    t = 0
    while t < min(m, n):
        pivot = None
        best = 0
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (pivot is None or abs(v) < best):
                    pivot, best = (i, j), abs(v)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        clean = False
            if not clean:
                # bring the smallest leftover of row t / column t to the pivot
                pos, best = (t, t), abs(A[t][t])
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < best:
                        pos, best = (i, t), abs(A[i][t])
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < best:
                        pos, best = (t, j), abs(A[t][j])
                if pos[0] != t:
                    swap_rows(t, pos[0])
                if pos[1] != t:
                    swap_cols(t, pos[1])
                continue
            bad_row = None
            for i in range(t + 1, m):
                if any(A[i][j] % A[t][t] for j in range(t + 1, n)):
                    bad_row = i
                    break
            if bad_row is None:
                break
            add_row(t, bad_row, 1)

        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            P[t] = [-x for x in P[t]]
        t += 1

    diag = [A[i][i] for i in range(min(m, n))]
    return diag, P, Q, Qi


def invariant_factors(a: Sequence[Sequence[int]], ncols: int = None) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    diag, _, _, _ = smith_normal_form(a, ncols)
    return [d for d in diag if d]


def rank(a: Sequence[Sequence[int]], ncols: int = None) -> int:
    return len(invariant_factors(a, ncols))


def quotient_invariants(n_generators: int, relations: Sequence[Sequence[int]]) -> Tuple[int, List[int]]:
    """
    Structure of Z^n / span(relations).

    Returns:
        (free_rank, torsion) with torsion the invariant factors > 1
    """
    if not relations:
        return n_generators, []
    factors = invariant_factors(relations, n_generators)
    return n_generators - len(factors), [d for d in factors if d > 1]


# =============================================================================
# Hermite normal form and lattices
# =============================================================================

def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[Matrix, List[int]]:
    """
    Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns:
        (basis, pivots): echelon rows with positive pivots, entries above each
        pivot reduced into [0, pivot); pivots[k] is the pivot column of row k
    """
    A = [list(r) for r in rows if any(r)]
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= len(A):
            break
        found = False
        while True:
            nonzero = [i for i in range(r, len(A)) if A[i][c]]
            if not nonzero:
                break
            found = True
            best = min(nonzero, key=lambda i: abs(A[i][c]))
            A[r], A[best] = A[best], A[r]
            others = [i for i in range(r + 1, len(A)) if A[i][c]]
            if not others:
                break
            for i in others:
                q = A[i][c] // A[r][c]
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        if not found:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def lattice_reduce(basis: Sequence[Sequence[int]], pivots: Sequence[int], v: Sequence[int]) -> Vector:
    """Reduce v modulo a Hermite basis; the result is zero iff v lies in the lattice."""
    w = list(v)
    for row, c in zip(basis, pivots):
        if w[c]:
            q = w[c] // row[c]
            if q:
                w = [x - q * y for x, y in zip(w, row)]
    return w


def lattice_contains(rows: Sequence[Sequence[int]], v: Sequence[int], ncols: int) -> bool:
    basis, pivots = hermite_rows(rows, ncols)
    return is_zero_vector(lattice_reduce(basis, pivots, v))


def lattices_equal(rows_a: Sequence[Sequence[int]], rows_b: Sequence[Sequence[int]], ncols: int) -> bool:
    return hermite_rows(rows_a, ncols)[0] == hermite_rows(rows_b, ncols)[0]


def lattice_subset(rows_a: Sequence[Sequence[int]], rows_b: Sequence[Sequence[int]], ncols: int) -> bool:
    """True iff span(rows_a) is contained in span(rows_b)."""
    basis, pivots = hermite_rows(rows_b, ncols)
    return all(is_zero_vector(lattice_reduce(basis, pivots, v)) for v in rows_a)


# =============================================================================
# Kernels, solving, inverses
# =============================================================================

def kernel_basis(a: Sequence[Sequence[int]], ncols: int = None) -> Matrix:
    """Integer basis (as vectors) of {x in Z^n : a x = 0}."""
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    if m == 0:
        return identity(n)
    diag, _, Q, _ = smith_normal_form(a, n)
    r = len([d for d in diag if d])
    return [[Q[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int = None) -> Optional[Vector]:
    """One integer solution of a x = b, or None if there is none."""
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    if m == 0:
        return [0] * n
    diag, P, Q, _ = smith_normal_form(a, n)
    c = mat_vec(P, b)
    y = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return mat_vec(Q, y)


def unimodular_inverse(a: Sequence[Sequence[int]]) -> Optional[Matrix]:
    """Inverse of a square integer matrix with determinant +-1, else None."""
    n = len(a)
    if n == 0:
        return []
    diag, P, Q, _ = smith_normal_form(a, n)
    if any(d != 1 for d in diag):
        return None
    # P a Q = I  =>  a^-1 = Q P
    return mat_mul(Q, P)


def preimage_lattice(g: Sequence[Sequence[int]], target_relations: Sequence[Sequence[int]],
                     n_source: int) -> Matrix:
    """
    Basis of {x in Z^n_source : g x lies in span(target_relations)}.

    g is an m x n_source matrix; target_relations are vectors of length m.
    """
    m = len(g)
    k = len(target_relations)
    if m == 0:
        return identity(n_source)
    stacked = [list(g[i]) + [-target_relations[j][i] for j in range(k)] for i in range(m)]
    kernel = kernel_basis(stacked, n_source + k)
    return [vec[:n_source] for vec in kernel if any(vec[:n_source])]
