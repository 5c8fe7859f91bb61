import pytest

from superkac.extensions import (
    Cocycle,
    CocycleError,
    cocycle_violations,
    doubling,
    extension_from_cocycle,
    family_equivalence,
    hom_module,
    is_indecomposable,
    is_split,
    minimal_polynomial,
    self_extension_cocycle,
)
from superkac.homology import cohomology1
from superkac.kac import irreducible_quotient, sl21_kac
from superkac.linalg import SparseRationalMatrix
from superkac.modules import (
    direct_sum,
    dual_module,
    find_equivariant_iso,
    parity_shift,
    tensor_modules,
    trivial_module,
    verify_representation,
)


@pytest.fixture(scope="module")
def quartet(sl21):
    V = sl21_kac(sl21, 0, "1/3")
    _, c = self_extension_cocycle(V)
    return V, c


def test_hom_is_tensor_with_dual(sl21):
    V = sl21_kac(sl21, 0, 2)
    H = hom_module(V, V)
    assert verify_representation(H) == []
    assert find_equivariant_iso(H, tensor_modules(V, dual_module(V))) is not None


def test_cocycle_identity(quartet):
    V, c = quartet
    assert cocycle_violations(V, V, c) == []
    k0 = next(k for k, m in enumerate(c.values) if not m.is_zero())
    broken = Cocycle(tuple(m.scale(2) if k == k0 else m for k, m in enumerate(c.values)))
    assert cocycle_violations(V, V, broken)
    with pytest.raises(CocycleError):
        extension_from_cocycle(V, V, broken)


def test_coboundary_splits(sl21, quartet):
    V, _ = quartet
    m = SparseRationalMatrix.from_entries(4, 4, [(0, 0, 1), (3, 3, 2), (1, 2, 5)])
    # c(x) = m rho(x) - rho(x) m is a coboundary (m even)
    vals = tuple(m @ r - r @ m for r in V.action)
    E = extension_from_cocycle(V, V, Cocycle(vals), 1)
    split, mm = is_split(E)
    assert split and mm is not None


@pytest.mark.parametrize("t", [1, 2, 5, -3])
def test_family_nonsplit(quartet, t):
    V, c = quartet
    r = doubling(V, t, cocycle=c)
    f = r.flags()
    assert f["representation"] and f["submodule"] and f["quotient"]
    assert not f["split"]
    assert f["indecomposable"] and f["end_dim"] == 2


def test_t_zero_splits(quartet):
    V, c = quartet
    r = doubling(V, 0, cocycle=c)
    assert r.flags()["split"]
    assert not r.flags()["indecomposable"]


def test_family_equivalence(quartet):
    V, c = quartet
    W1 = extension_from_cocycle(V, V, c, 1).W
    W5 = extension_from_cocycle(V, V, c, 5).W
    W0 = extension_from_cocycle(V, V, c, 0).W
    assert family_equivalence(W1, W5)[0]
    assert not family_equivalence(W1, W0)[0]


def test_direct_sum_is_decomposable(sl21):
    V = sl21_kac(sl21, 0, 2)
    rep = is_indecomposable(direct_sum(V, V))
    assert not rep.indecomposable and rep.end_dim == 4


def test_minimal_polynomial():
    T = SparseRationalMatrix.from_dense([[2, 1, 0], [0, 2, 0], [0, 0, 3]])
    # (x - 2)^2 (x - 3) = x^3 - 7x^2 + 16x - 12, lowest degree first
    assert minimal_polynomial(T) == [-12, 16, -7, 1]


def test_atypical_extension_is_kac(sl21):
    """3_{-1} extended by the trivial module reproduces the Kac module (0,0)."""
    T = trivial_module(sl21)
    three = irreducible_quotient(sl21_kac(sl21, 1, 0))
    # with the Kac-module parities the 3 sits in odd degree
    assert not cohomology1(sl21, hom_module(T, three), parities=(0,)).representatives
    U = parity_shift(three)
    res = cohomology1(sl21, hom_module(T, U), parities=(0,))
    assert res.quotient_dim == 1
    c = Cocycle.from_representative(sl21, U, T, res.representatives[0])
    E = extension_from_cocycle(U, T, c, 1)
    assert not is_split(E)[0]
    assert find_equivariant_iso(E.W, sl21_kac(sl21, 0, 0)) is not None
