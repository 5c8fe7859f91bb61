from fractions import Fraction

import pytest

from superkac.evenmods import highest_weight_module, sl21_even_module
from superkac.homology import (
    ChainComplex,
    CochainComplex,
    casimir_adjoint,
    check_equivariance,
    cohomology1,
    doubling_module,
    exterior_square_pairs,
    homology1,
    invariant_restricted_h1,
    proof_diagnostics,
    shapiro_check,
)
from superkac.kac import irreducible_quotient, sl21_kac
from superkac.linalg import rank
from superkac.modules import adjoint_module, dual_module, tensor_modules, trivial_module
from superkac.superalgebra import subalgebra


def test_exterior_square_basis(sl21):
    pairs = exterior_square_pairs(sl21)
    even, odd = len(sl21.even_indices), len(sl21.odd_indices)
    # antisymmetric on even-even, symmetric on odd-odd, free on mixed
    assert len(pairs) == even * (even - 1) // 2 + odd * (odd + 1) // 2 + even * odd


def test_full_complex_small(sl21):
    M = sl21_kac(sl21, 1, 1)
    C = ChainComplex(sl21, M)
    d1, d0 = C.full_matrices()
    assert (d0 @ d1).is_zero()
    # rank-nullity on each map
    from superkac.linalg import nullity
    assert rank(d0) + nullity(d0) == d0.n_cols
    h = homology1(C)
    assert h.kernel_dim == nullity(d0) and h.image_dim == rank(d1)


def test_trivial_and_adjoint(sl21):
    assert homology1(ChainComplex(sl21, trivial_module(sl21))).quotient_dim == 0
    assert cohomology1(sl21, trivial_module(sl21)).quotient_dim == 0
    assert cohomology1(sl21, adjoint_module(sl21)).quotient_dim == 0


def test_irreducible_h1(sl21):
    three = irreducible_quotient(sl21_kac(sl21, 1, 0))
    five = irreducible_quotient(sl21_kac(sl21, 2, 0))
    assert cohomology1(sl21, three).quotient_dim == 1
    assert homology1(ChainComplex(sl21, three)).quotient_dim == 1
    assert cohomology1(sl21, five).quotient_dim == 0


def test_cochain_blocks_compose_to_zero(sl21):
    M = sl21_kac(sl21, 0, 1)
    C = CochainComplex(sl21, M)
    for w, p in C.weights():
        for par in (0, 1):
            C.block(w, par)  # raises on d1 d0 != 0


@pytest.mark.parametrize("a,b", [(0, "1/2"), (1, 0)])
def test_blocks_zero_equals_all(sl21, a, b):
    M = doubling_module(sl21, sl21_even_module(sl21, a, b))
    C = ChainComplex(sl21, M)
    assert homology1(C, blocks="zero").quotient_dim == homology1(C, blocks="all").quotient_dim == 1


def test_homology_equals_cohomology_on_doubles(sl21):
    M = doubling_module(sl21, sl21_even_module(sl21, 0, 2))
    assert homology1(ChainComplex(sl21, M)).quotient_dim == cohomology1(sl21, M).quotient_dim == 1


def test_chain_maps_are_equivariant(sl21):
    M = sl21_kac(sl21, 0, 1)
    assert check_equivariance(ChainComplex(sl21, M)) == []


def test_y_subalgebra_homology(sl21):
    """H1(CY, U (x) U*) counts the Y-invariants."""
    CY = subalgebra(sl21.even, [sl21.even.y_index], "CY")
    U = sl21_even_module(sl21, 0, 3)
    N = tensor_modules(U, dual_module(U))
    assert homology1(ChainComplex(CY, N)).quotient_dim == 1


def test_casimir_values(sl21, sl31, osp24):
    assert casimir_adjoint(sl21.even, sl21.even.simple_factors[0]).contraction == 1
    assert casimir_adjoint(sl31.even, sl31.even.simple_factors[0]).contraction == Fraction(3, 2)
    r = casimir_adjoint(osp24.even, osp24.even.simple_factors[0])
    assert r.contraction == Fraction(3, 2)
    assert r.casimir == 2 * r.contraction
    assert r.killing_normalised == 1


def test_invariant_restricted(sl21):
    U = sl21_even_module(sl21, 1, 1)
    res, data = invariant_restricted_h1(sl21.even, tensor_modules(U, dual_module(U)))
    assert res.quotient_dim == 1
    assert (data.kernel_dim, data.image_dim) == (2, 1)


def test_shapiro_and_diagnostics(sl21):
    U = sl21_even_module(sl21, 1, 3)
    r = shapiro_check(sl21, U)
    assert r.ok and r.line() == "1 = 1 PASS"
    lines = proof_diagnostics(sl21.even, tensor_modules(U, dual_module(U)))
    assert all(d.ok for d in lines), [(d.name, d.detail) for d in lines if not d.ok]


def test_diagnostics_sl31(sl31):
    U = highest_weight_module(sl31, (1, 0), 0)
    lines = proof_diagnostics(sl31.even, tensor_modules(U, dual_module(U)))
    assert all(d.ok for d in lines)
    ratio = [d for d in lines if d.name.startswith("d1 I2[")][0]
    assert "ratio 3/2" in ratio.detail


def test_to_json(sl21):
    res = cohomology1(sl21, irreducible_quotient(sl21_kac(sl21, 1, 0)))
    j = res.to_json()
    assert j["h1"] == 1 and j["kernel"] - j["image"] == 1 and len(j["representatives"]) == 1
