"""Extensions 0 -> U -> W -> V -> 0 from 1-cocycles, and their structural checks.

A cocycle is an even map c: L -> Hom(V, U) with

    c([x, y]) = x.c(y) - (-1)^{|x||y|} y.c(x),     x.T = rho_U(x) T - (-1)^{|x||T|} T rho_V(x),

and W(t) carries the block action [[rho_U, t c], [0, rho_V]] with U first.
W(t) splits exactly when t c = -x.m for an even m, i.e. when t [c] = 0 in H^1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import SparseRationalMatrix, Subspace, rank, rat, rat_str, solve_sparse, vec_clean
from .modules import (
    ModuleError,
    SuperModule,
    check_representation,
    find_equivariant_iso,
    intertwiner_space,
    same_algebra,
    sgn,
)


class CocycleError(ModuleError):
    pass


def hom_module(V: SuperModule, U: SuperModule, *, check: bool = True) -> SuperModule:
    """Hom(V, U) with basis E_ij (i in U, j in V) at index i * dim V + j."""
    if not same_algebra(V.algebra, U.algebra):
        raise ModuleError("modules live over different algebras")
    A = V.algebra
    dv, du = V.dim, U.dim
    par = tuple((U.parity[i] + V.parity[j]) % 2 for i in range(du) for j in range(dv))
    mats = []
    for a in range(A.dim):
        pa = A.parities[a]
        rows: Dict[int, Dict[int, object]] = {}
        rU, rV = U.action[a], V.action[a]
        colsU = {i: rU.column(i) for i in range(du)}
        for i in range(du):
            for j in range(dv):
                src = i * dv + j
                for k, x in colsU[i].items():           # rho_U E_ij = sum_k rho_U[k, i] E_kj
                    _add(rows, k * dv + j, src, x)
                s = sgn(pa * par[src])
                for l, x in rV.row(j).items():           # E_ij rho_V = sum_l rho_V[j, l] E_il
                    _add(rows, i * dv + l, src, -s * x)
        mats.append(SparseRationalMatrix(du * dv, du * dv, rows))
    H = SuperModule(A, tuple(mats), par, f"hom({V.provenance};{U.provenance})",
                    {"hom_dims": (du, dv)})
    if check:
        check_representation(H)
    return H


def _add(rows, r, c, x):
    row = rows.setdefault(r, {})
    v = row.get(c, 0) + x
    if v:
        row[c] = v
    else:
        row.pop(c, None)


@dataclass
class Cocycle:
    """c(x_a) as dim U x dim V matrices, one per algebra basis element."""

    values: Tuple[SparseRationalMatrix, ...]

    @classmethod
    def from_representative(cls, A, U: SuperModule, V: SuperModule, rep: Dict[Tuple[int, int], object]) -> "Cocycle":
        dv = V.dim
        ents: Dict[int, List[Tuple[int, int, object]]] = {}
        for (a, idx), x in rep.items():
            i, j = divmod(idx, dv)
            ents.setdefault(a, []).append((i, j, x))
        return cls(tuple(SparseRationalMatrix.from_entries(U.dim, V.dim, ents.get(a, []))
                         for a in range(A.dim)))

    def scaled(self, t) -> "Cocycle":
        return Cocycle(tuple(m.scale(rat(t)) for m in self.values))


def _hom_act(A, U, V, a: int, T: SparseRationalMatrix, parity_T: int) -> SparseRationalMatrix:
    return U.action[a] @ T - (T @ V.action[a]).scale(sgn(A.parities[a] * parity_T))


def cocycle_violations(U: SuperModule, V: SuperModule, c: Cocycle) -> List[str]:
    A = U.algebra
    p = A.parities
    bad = []
    for a in range(A.dim):
        T = c.values[a]
        for i, j, _ in T.entries():
            if (U.parity[i] + V.parity[j]) % 2 != p[a]:
                bad.append(f"c({A.labels[a]}) is not of parity {p[a]} (c must be even)")
                break
    for a in range(A.dim):
        for b in range(a, A.dim):
            lhs = SparseRationalMatrix.zeros(U.dim, V.dim)
            for e, f in A.bracket_basis(a, b).items():
                lhs = lhs + c.values[e].scale(f)
            rhs = _hom_act(A, U, V, a, c.values[b], p[b]) - \
                _hom_act(A, U, V, b, c.values[a], p[a]).scale(sgn(p[a] * p[b]))
            if not (lhs - rhs).is_zero():
                bad.append(f"cocycle identity fails on ({A.labels[a]}, {A.labels[b]})")
    return bad


@dataclass
class ExtensionModule:
    W: SuperModule
    U: SuperModule
    V: SuperModule
    cocycle: Cocycle
    t: object

    @property
    def sub_indices(self) -> List[int]:
        return list(range(self.U.dim))

    def submodule_invariant(self) -> bool:
        du = self.U.dim
        for m in self.W.action:
            for i, j, _ in m.entries():
                if i >= du and j < du:
                    return False
        return True

    def quotient_is_V(self) -> bool:
        du = self.U.dim
        idx = list(range(du, self.W.dim))
        return all(m.submatrix(idx, idx) == v for m, v in zip(self.W.action, self.V.action))


def extension_from_cocycle(U: SuperModule, V: SuperModule, c: Cocycle, t=1, *, check: bool = True) -> ExtensionModule:
    bad = cocycle_violations(U, V, c)
    if bad:
        raise CocycleError("; ".join(bad[:3]))
    t = rat(t)
    A = U.algebra
    du, dv = U.dim, V.dim
    n = du + dv
    mats = []
    for a in range(A.dim):
        ents = list(U.action[a].entries())
        ents += [(i + du, j + du, x) for i, j, x in V.action[a].entries()]
        if t:
            ents += [(i, j + du, t * x) for i, j, x in c.values[a].entries()]
        mats.append(SparseRationalMatrix.from_entries(n, n, ents))
    W = SuperModule(A, tuple(mats), U.parity + V.parity,
                    f"extension({U.provenance};{V.provenance};t={rat_str(t)})")
    if check:
        check_representation(W)
    return ExtensionModule(W, U, V, c, t)


def is_split(E: ExtensionModule) -> Tuple[bool, Optional[SparseRationalMatrix]]:
    """Look for an even m: V -> U with t c(x) = m rho_V(x) - rho_U(x) m for all x.

    Then {(m v, v)} is an invariant complement of U.  Returns (split?, m).
    """
    U, V, A = E.U, E.V, E.U.algebra
    dv = V.dim
    unknowns = [(i, j) for i in range(U.dim) for j in range(dv) if U.parity[i] == V.parity[j]]
    pos = {ij: n for n, ij in enumerate(unknowns)}
    rows: List[Dict[int, object]] = []
    rhs: Dict[int, object] = {}
    t = E.t
    for a in range(A.dim):
        eqs: Dict[Tuple[int, int], Dict[int, object]] = {}
        rU, rV = U.action[a], V.action[a]
        # (m rV)_{ij} = sum_k m_ik rV_kj ; (rU m)_{ij} = sum_k rU_ik m_kj
        for (i, k), u in pos.items():
            for j, x in rV.row(k).items():
                e = eqs.setdefault((i, j), {})
                e[u] = e.get(u, 0) + x
        for (k, j), u in pos.items():
            for i, x in rU.column(k).items():
                e = eqs.setdefault((i, j), {})
                e[u] = e.get(u, 0) - x
        target = {(i, j): t * x for i, j, x in E.cocycle.values[a].entries()}
        for key in set(eqs) | set(target):
            r = len(rows)
            rows.append(vec_clean(eqs.get(key, {})))
            if target.get(key):
                rhs[r] = target[key]
    M = SparseRationalMatrix.from_rows(len(unknowns), rows)
    sol = solve_sparse(M, rhs)
    if sol is None:
        return False, None
    m = SparseRationalMatrix.from_entries(U.dim, dv, ((*unknowns[u], x) for u, x in sol.items()))
    return True, m


# -----------------------------------------------------------------------------
# indecomposability


def minimal_polynomial(T: SparseRationalMatrix) -> List[Fraction]:
    """Monic minimal polynomial coefficients (constant term first), by a Krylov search on powers."""
    from .linalg import Echelon
    n = T.n_rows
    flat = lambda m: {i * n + j: x for i, j, x in m.entries()}
    ech = Echelon(n * n, track=True)
    powers = [SparseRationalMatrix.identity(n)]
    ech.add(flat(powers[0]))
    while True:
        nxt = powers[-1] @ T
        v = flat(nxt)
        if not ech.contains(v):
            ech.add(v)
            powers.append(nxt)
            continue
        # express T^k in terms of lower powers
        k = len(powers)
        basis = SparseRationalMatrix.from_columns(n * n, [flat(P) for P in powers])
        sol = solve_sparse(basis, v)
        coeffs = [-Fraction(sol.get(i, 0)) for i in range(k)] + [Fraction(1)]
        return coeffs


@dataclass
class IndecomposabilityReport:
    indecomposable: Optional[bool]        # None = inconclusive over Q
    end_dim: int
    idempotent: Optional[SparseRationalMatrix] = None
    idempotent_rank: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    def verdict(self) -> str:
        if self.indecomposable is None:
            return "inconclusive over Q"
        return "indecomposable" if self.indecomposable else "decomposable"


def is_indecomposable(W: SuperModule, *, seed: int = 0) -> IndecomposabilityReport:
    """Decide indecomposability from the even endomorphism algebra End_L(W).

    Every basis element and every pairwise sum gets its minimal polynomial
    factored over Q.  Two coprime factors give an explicit idempotent; an
    irreducible factor of degree > 1 alone makes the verdict inconclusive.
    If all tested elements are scalar plus nilpotent, the (finite-dimensional)
    endomorphism algebra is local and W is indecomposable.
    """
    import sympy
    x = sympy.Symbol("x")
    basis = intertwiner_space(W, W)
    rep = IndecomposabilityReport(True, len(basis))
    cands = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            cands.append(basis[i] + basis[j])
    inconclusive = False
    for T in cands:
        coeffs = minimal_polynomial(T)
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
        _, factors = sympy.factor_list(poly.as_expr(), x)
        factors = [(sympy.Poly(f, x, domain="QQ"), e) for f, e in factors]
        if len(factors) >= 2:
            f1, e1 = factors[0]
            a_part = f1 ** e1
            b_part = sympy.Poly(1, x, domain="QQ")
            for f, e in factors[1:]:
                b_part = b_part * f ** e
            s, t, g = sympy.gcdex(a_part, b_part)
            # s a + t b = 1: e = t(T) b(T) projects onto ker a(T)
            proj_poly = (t * b_part).rem(sympy.Poly(poly, x))
            coeffs_e = [Fraction(int(c.p), int(c.q)) for c in reversed(proj_poly.all_coeffs())]
            E = _poly_eval_horner(T, coeffs_e)
            rep.indecomposable = False
            rep.idempotent = E
            rep.idempotent_rank = rank(E)
            rep.notes.append(f"minimal polynomial {poly.as_expr()} has coprime factors")
            return rep
        f, e = factors[0] if factors else (sympy.Poly(x, x), 1)
        if f.degree() > 1:
            inconclusive = True
            rep.notes.append(f"irreducible factor {f.as_expr()} of degree {f.degree()}")
    if inconclusive:
        rep.indecomposable = None
    return rep


def _poly_eval_horner(T: SparseRationalMatrix, coeffs: Sequence[Fraction]) -> SparseRationalMatrix:
    """sum coeffs[k] T^k (constant term first)."""
    n = T.n_rows
    out = SparseRationalMatrix.zeros(n, n)
    I = SparseRationalMatrix.identity(n)
    for c in reversed(coeffs):
        out = out @ T + I.scale(rat(c))
    return out


def family_equivalence(W1: SuperModule, W2: SuperModule) -> Tuple[bool, Optional[SparseRationalMatrix]]:
    T = find_equivariant_iso(W1, W2)
    return T is not None, T


# -----------------------------------------------------------------------------
# pipeline


@dataclass
class DoublingReport:
    extension: ExtensionModule
    h1: object
    representation_ok: bool
    submodule_ok: bool
    quotient_ok: bool
    split: bool
    indecomposability: IndecomposabilityReport

    def flags(self) -> Dict[str, object]:
        return {
            "representation": self.representation_ok,
            "submodule": self.submodule_ok,
            "quotient": self.quotient_ok,
            "split": self.split,
            "indecomposable": self.indecomposability.indecomposable,
            "end_dim": self.indecomposability.end_dim,
        }


def self_extension_cocycle(V: SuperModule, *, blocks: str = "zero"):
    """An even cocycle spanning H^1(L, Hom(V, V)) when that space is one-dimensional."""
    from .homology import cohomology1
    H = hom_module(V, V)
    res = cohomology1(V.algebra, H, blocks=blocks, parities=(0,))
    if not res.representatives:
        return res, None
    c = Cocycle.from_representative(V.algebra, V, V, res.representatives[0])
    return res, c


def doubling(V: SuperModule, t=1, *, cocycle: Optional[Cocycle] = None) -> DoublingReport:
    from .modules import verify_representation
    h1 = None
    if cocycle is None:
        h1, cocycle = self_extension_cocycle(V)
        if cocycle is None:
            raise CocycleError("H^1(L, End V) has no even class")
    ext = extension_from_cocycle(V, V, cocycle, t)
    rep_ok = not verify_representation(ext.W)
    split, _ = is_split(ext)
    ind = is_indecomposable(ext.W)
    return DoublingReport(ext, h1, rep_ok, ext.submodule_invariant(), ext.quotient_is_V(), split, ind)
