from fractions import Fraction

import pytest
import sympy

from superkac.linalg import (
    CoordinateMap,
    DimensionError,
    Echelon,
    SparseRationalMatrix as M,
    Subspace,
    column_space,
    intersect,
    inverse,
    kernel_basis,
    nullity,
    quotient_dim,
    rank,
    rat,
    rat_str,
    solve,
)


def test_rat_and_str():
    assert rat("3/6") == Fraction(1, 2)
    assert rat_str(Fraction(-4, 2)) == "-2"
    assert rat_str(Fraction(2, 3)) == "2/3"


def test_constructors_and_access():
    a = M.from_dense([[1, 0], [0, "1/2"]])
    assert a[1, 1] == Fraction(1, 2)
    assert a.nnz() == 2
    assert M.identity(3) == M.diag([1, 1, 1])
    assert a.transpose() == a
    assert M.zeros(2, 3).is_zero()


def test_product_kron_trace():
    a = M.from_dense([[1, 2], [3, 4]])
    b = M.from_dense([[0, 1], [1, 0]])
    assert (a @ b) == M.from_dense([[2, 1], [4, 3]])
    k = a.kron(b)
    assert k.shape == (4, 4) and k[0, 1] == 1 and k[3, 2] == 4
    assert a.trace() == 5


def test_rank_kernel_against_sympy():
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, "1/3", 0], [1, 3, "10/3", 4]]
    a = M.from_dense(rows)
    sm = sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in rows])
    assert rank(a) == sm.rank() == 2
    ker = kernel_basis(a)
    assert ker.dim == 2 == nullity(a)
    for v in ker.vectors():
        assert not a.apply(v)
    # rank-nullity
    assert rank(a) + nullity(a) == a.n_cols


def test_solve_consistent_and_not():
    a = M.from_dense([[1, 1], [1, -1], [2, 0]])
    x = solve(a, [3, 1, 4])
    assert x == [2, 1]
    assert solve(a, [1, 1, 5]) is None
    with pytest.raises(DimensionError):
        solve(a, [1, 2])


def test_inverse_and_subspaces():
    a = M.from_dense([[2, 1], [1, 1]])
    assert a @ inverse(a) == M.identity(2)
    s = Subspace.span(3, [{0: 1}, {1: 1}])
    t = Subspace.span(3, [{1: 1}, {2: 1}])
    assert intersect(s, t).dim == 1
    assert s.contains({0: 2, 1: -1}) and not s.contains({2: 1})
    assert quotient_dim(Subspace.full(3), s) == 1
    assert column_space(a).dim == 2


def test_echelon_and_coordinates():
    e = Echelon(3)
    assert e.add({0: 1, 1: 1})
    assert not e.add({0: 2, 1: 2})
    assert e.rank == 1
    cm = CoordinateMap(3, [{0: 1, 1: 1}, {2: 1}])
    assert cm({0: 3, 1: 3, 2: -1}) == {0: 3, 1: -1}
    assert cm({0: 1}, check=True) is None


def test_big_rational_exact():
    n = 12
    hilbert = M.from_dense([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    inv = inverse(hilbert)
    assert hilbert @ inv == M.identity(n)
    assert max(abs(x) for _, _, x in inv.entries()) > 10 ** 15
