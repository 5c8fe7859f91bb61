from fractions import Fraction

import pytest

from superkac.evenmods import (
    WeightNotFound,
    decompose_irreducibles,
    format_content,
    highest_weight_module,
    natural_even,
    sl21_even_module,
    spin_hypercharge_content,
)
from superkac.modules import (
    ModuleError,
    SuperModule,
    adjoint_module,
    check_representation,
    dual_module,
    find_equivariant_iso,
    invariants,
    natural_module,
    parity_shift,
    tensor_modules,
    trivial_module,
    verify_representation,
    weight_multiset,
)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 1), (2, "1/2"), (3, -1)])
def test_sl21_even_module(sl21, a, b):
    U = sl21_even_module(sl21, a, b)
    assert U.dim == a + 1
    assert U.meta["y"] == 2 * Fraction(b) - a
    assert verify_representation(U) == []


def test_natural_and_adjoint_are_representations(sl21, sl31, osp24):
    for A in (sl21, sl31, osp24):
        assert verify_representation(natural_module(A)) == []
        assert verify_representation(adjoint_module(A)) == []


@pytest.mark.parametrize("labels,dim", [((1, 0), 4), ((0, 1), 5), ((2, 0), 10), ((0, 2), 14)])
def test_sp4_highest_weight_modules(osp24, labels, dim):
    U = highest_weight_module(osp24, labels, 0)
    assert U.dim == dim


@pytest.mark.parametrize("labels,dim", [((1, 0), 3), ((0, 1), 3), ((1, 1), 8), ((2, 0), 6)])
def test_sl3_highest_weight_modules(sl31, labels, dim):
    U = highest_weight_module(sl31, labels, Fraction(1, 3))
    assert U.dim == dim
    assert all(y == Fraction(1, 3) for y in U.y_values())


def test_highest_weight_search_bound(sl31):
    with pytest.raises(WeightNotFound):
        highest_weight_module(sl31, (5, 5), 0, fuel=2)


def test_dual_of_dual_is_isomorphic(sl21):
    U = sl21_even_module(sl21, 2, 1)
    assert find_equivariant_iso(dual_module(dual_module(U)), U) is not None


def test_tensor_with_trivial(sl21):
    U = sl21_even_module(sl21, 1, 3)
    T = trivial_module(sl21.even)
    W = tensor_modules(U, T)
    assert all(a == b for a, b in zip(W.action, U.action))


def test_clebsch_gordan_sl2(sl21):
    U = sl21_even_module(sl21, 1, 0)
    W = tensor_modules(U, U)
    content = spin_hypercharge_content(W)
    assert content == [(1, -2, 1), (0, -2, 1)]
    D = tensor_modules(U, dual_module(U))
    assert invariants(D).dim == 1


def test_format_content():
    assert format_content([(Fraction(1, 2), 1, 1), (0, 0, 1), (1, 0, 1), (Fraction(1, 2), -1, 1)]) \
        == "1/2_{1} + (0+1)_{0} + 1/2_{-1}"


def test_invalid_module_detected(sl21):
    U = sl21_even_module(sl21, 1, 1)
    mats = list(U.action)
    mats[sl21.even.y_index] = mats[0]  # Y := h breaks [Y, e] = 0
    bad = SuperModule(U.algebra, tuple(mats), U.parity)
    assert verify_representation(bad)
    with pytest.raises(ModuleError):
        check_representation(bad)


def test_parity_shift_is_representation(sl21):
    N = natural_module(sl21)
    assert verify_representation(parity_shift(N)) == []


def test_decompose_irreducibles_counts(sl31):
    N = natural_even(sl31)
    # N = 3 + 1 over sl(3) + CY, so N (x) N* = 8 + 3 + 3* + 1 + 1
    c = decompose_irreducibles(tensor_modules(N, dual_module(N)))
    assert sum(c.values()) == 5
    assert sum(weight_multiset(N).values()) == 4
