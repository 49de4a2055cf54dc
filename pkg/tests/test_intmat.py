"""Tests for the exact integer linear algebra, with sympy as an independent oracle."""

import numpy as np
import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from common.intmat import (
    hermite_rows, invariant_factors, kernel_basis, lattice_contains, lattice_subset, lattices_equal,
    mat_mul, mat_vec, preimage_lattice, quotient_invariants, rank, smith_normal_form, solve_integer,
    transpose, unimodular_inverse,
)


def random_matrices(count: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m, n = rng.integers(1, 6, size=2)
        a = rng.integers(-6, 7, size=(m, n)).tolist()
        if any(any(row) for row in a):
            out.append([[int(x) for x in row] for row in a])
    return out


def oracle_factors(a):
    d = sympy_snf(Matrix(a), domain=ZZ)
    return sorted(abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0)


class TestSmithNormalForm:

    @pytest.mark.parametrize("a", random_matrices(40))
    def test_invariant_factors_match_sympy(self, a):
        assert sorted(invariant_factors(a)) == oracle_factors(a)

    @pytest.mark.parametrize("a", random_matrices(15, seed=11))
    def test_transforms_diagonalise(self, a):
        diag, P, Q, Q_inv = smith_normal_form(a)
        m, n = len(a), len(a[0])
        d = mat_mul(mat_mul(P, a), Q)
        for i in range(m):
            for j in range(n):
                assert d[i][j] == (diag[i] if i == j else 0)
        assert mat_mul(Q_inv, Q) == [[int(i == j) for j in range(n)] for i in range(n)]

    def test_divisibility_chain(self):
        diag, _, _, _ = smith_normal_form([[2, 0], [0, 3]])
        assert diag == [1, 6]

    def test_empty_matrix_with_columns(self):
        diag, P, Q, _ = smith_normal_form([], 3)
        assert diag == []
        assert len(Q) == 3


class TestLattices:

    def test_quotient_invariants(self):
        assert quotient_invariants(3, [[1, 1, 1]]) == (2, [])
        assert quotient_invariants(2, [[2, 0], [0, 4]]) == (0, [2, 4])
        assert quotient_invariants(2, []) == (2, [])

    def test_hermite_rows_canonical(self):
        a, _ = hermite_rows([[2, 4], [1, 1]], 2)
        b, _ = hermite_rows([[1, 1], [0, 2], [3, 5]], 2)
        assert a == b

    def test_containment_and_equality(self):
        rows = [[2, 0], [0, 3]]
        assert lattice_contains(rows, [4, -3], 2)
        assert not lattice_contains(rows, [1, 0], 2)
        assert lattice_subset([[2, 3]], rows, 2)
        assert lattices_equal([[1, 0], [0, 1]], [[1, 1], [0, 1]], 2)
        assert not lattices_equal([[2, 0]], [[1, 0]], 2)

    @pytest.mark.parametrize("a", random_matrices(20, seed=3))
    def test_kernel_basis(self, a):
        n = len(a[0])
        kernel = kernel_basis(a, n)
        assert len(kernel) == n - rank(a, n)
        for v in kernel:
            assert mat_vec(a, v) == [0] * len(a)

    def test_solve_integer(self):
        a = [[2, 1], [0, 3]]
        x = solve_integer(a, [8, 6])
        assert x == [3, 2]
        assert mat_vec(a, x) == [8, 6]
        # x2 = 2 forces 2 x1 = 3
        assert solve_integer(a, [5, 6]) is None
        assert solve_integer([[2]], [1]) is None

    def test_unimodular_inverse(self):
        a = [[2, 1], [1, 1]]
        inv = unimodular_inverse(a)
        assert mat_mul(a, inv) == [[1, 0], [0, 1]]
        assert unimodular_inverse([[2, 0], [0, 1]]) is None

    def test_preimage_lattice(self):
        # x -> 2x into Z / 4Z: preimage of 0 is 2Z
        basis = preimage_lattice([[2]], [[4]], 1)
        assert lattices_equal(basis, [[2]], 1)

    def test_mat_mul_keeps_shape_for_empty_factor(self):
        out = mat_mul([[], []], [], inner=0, ncols=3)
        assert out == [[0, 0, 0], [0, 0, 0]]
        assert transpose([[1, 2, 3]]) == [[1], [2], [3]]
