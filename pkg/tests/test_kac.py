from fractions import Fraction

import pytest

from superkac.evenmods import format_content, highest_weight_module, sl21_even_module, spin_hypercharge_content
from superkac.kac import (
    decompose_highest_weight,
    induce_even,
    induce_minus,
    induce_plus,
    irreducible_quotient,
    is_typical,
    kac_dimension,
    maximal_submodule,
    sl21_atypical,
    sl21_kac,
    straightening_map,
)
from superkac.modules import (
    dual_module,
    find_equivariant_iso,
    restrict,
    tensor_modules,
    verify_representation,
)


def content(M):
    return format_content(spin_hypercharge_content(restrict(M, M.algebra.even)))


@pytest.mark.parametrize("a,b,dim", [(0, 3, 4), (1, 1, 8), (2, "5/2", 12), (1, 0, 8)])
def test_kac_dimension(sl21, a, b, dim):
    M = sl21_kac(sl21, a, b)
    assert M.dim == dim == kac_dimension(sl21, sl21_even_module(sl21, a, b))
    assert verify_representation(M) == []


@pytest.mark.parametrize("a,b", [(0, 0), (0, 1), (1, 0), (1, 2), (2, 0), (2, 3), (0, 2), (1, 1), (0, "1/3")])
def test_typicality_matches_condition(sl21, a, b):
    M = sl21_kac(sl21, a, b)
    assert is_typical(M) == (not sl21_atypical(a, b))


def test_maximal_submodule_dims(sl21):
    want = {(0, 0): 3, (0, 1): 1, (1, 0): 5, (2, 0): 7, (1, 2): 3, (1, 1): 0}
    for (a, b), d in want.items():
        assert maximal_submodule(sl21_kac(sl21, a, b)).dim == d


def test_kac_content_pattern(sl21):
    assert content(sl21_kac(sl21, 0, 3)) == "0_{6} + 1/2_{5} + 0_{4}"
    assert content(sl21_kac(sl21, 2, 3)) == "1_{4} + (1/2+3/2)_{3} + 1_{2}"


def test_sl31_kac_module(sl31):
    U = highest_weight_module(sl31, (1, 0), 0)
    M = induce_plus(sl31, U)
    assert M.dim == 24
    assert verify_representation(M) == []
    assert is_typical(M)
    # y = 1 is atypical for the fundamental
    assert not is_typical(induce_plus(sl31, highest_weight_module(sl31, (1, 0), 1)))


def test_induce_minus_and_even(sl21):
    U = sl21_even_module(sl21, 1, 1)
    assert induce_minus(sl21, U).dim == 8
    W = induce_even(sl21, U)
    assert W.dim == 32 and verify_representation(W) == []


def test_double_induction_iso_small(sl21):
    U = sl21_even_module(sl21, 0, "1/2")
    Ud = dual_module(U)
    M = tensor_modules(induce_plus(sl21, U), induce_minus(sl21, Ud))
    W = induce_even(sl21, tensor_modules(U, Ud))
    assert find_equivariant_iso(M, W) is not None


def test_dual_kac_typical_and_atypical(sl21):
    """Dual Kac module vs opposite induction: iso exactly for typical U."""
    for (a, b), expect in {(0, 2): True, (1, 1): True, (0, 0): False, (1, 0): False}.items():
        U = sl21_even_module(sl21, a, b)
        T = find_equivariant_iso(dual_module(induce_plus(sl21, U)), induce_minus(sl21, dual_module(U)))
        assert (T is not None) == expect


def test_atypical_dual_not_generated_by_extreme_layer(sl21):
    from superkac.kac import top_layer
    from superkac.modules import ModuleError, generated_subspace
    D = dual_module(sl21_kac(sl21, 0, 0))
    ys = D.y_values()
    layer = [i for i, y in enumerate(ys) if y == min(ys)]
    assert generated_subspace(D, [{i: 1} for i in layer]).dim < D.dim


@pytest.mark.parametrize("a,b", [(0, 2), (1, 1), (1, 0), (0, "1/3")])
def test_straightening_oracle(sl21, a, b):
    r = straightening_map(sl21, sl21_even_module(sl21, a, b))
    assert r.isomorphism and r.normalised and r.triangular
    assert r.oracle, r.failures


def test_irreducible_quotients(sl21):
    dims = {(1, 0): 3, (0, 1): 3, (2, 0): 5, (1, 2): 5, (3, 0): 7, (2, 3): 7}
    for (a, b), d in dims.items():
        Q = irreducible_quotient(sl21_kac(sl21, a, b))
        assert Q.dim == d
        assert verify_representation(Q) == []


def test_decompose_highest_weight(sl21):
    Q = irreducible_quotient(sl21_kac(sl21, 1, 0))
    pieces = decompose_highest_weight(tensor_modules(Q, Q))
    assert [p["dim"] for p in pieces] == [5, 4]
    assert all(p["irreducible"] for p in pieces)
