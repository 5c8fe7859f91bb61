"""Kac modules and the doubly induced module, by PBW straightening.

For a Z-graded type I superalgebra L = L_{-1} + L_0bar + L_{+1}, the PBW
theorem gives a basis of the induced modules made of ordered monomials

    Q_S Qbar_T (x) u_j        S a subset of L_{-1}, T a subset of L_{+1}

(all odd generators square to zero in the enveloping algebra since they
anticommute among themselves within one half).  Three inductions share one
straightening engine:

* ``induce_plus``  (Kac module V+): L_{+1} kills U, only S varies;
* ``induce_minus`` (V-): L_{-1} kills U, only T varies;
* ``induce_even``  (Ind from L_0bar): both S and T vary.

A generator acting on a monomial is moved to the right with the graded
Leibniz rule  x Q r = [x, Q] r + (-1)^{|x|} Q (x r)  until it reaches U.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import SparseRationalMatrix, Subspace, rat, rat_str, vec_axpy, vec_clean
from .modules import (
    ModuleError,
    SuperModule,
    check_representation,
    dual_module,
    generated_subspace,
    largest_invariant_subspace,
    quotient_module,
    same_algebra,
    sgn,
    singular_vectors,
    submodule,
    tensor_modules,
)
from .superalgebra import SuperAlgebra

Key = Tuple[Tuple[int, ...], Tuple[int, ...], int]


class InductionError(ModuleError):
    pass


def _insert(seq: Tuple[int, ...], i: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Left-multiply a sorted odd monomial by generator i: (sign, new monomial) or None."""
    if i in seq:
        return None
    k = sum(1 for s in seq if s < i)
    return (sgn(k), seq[:k] + (i,) + seq[k:])


class _Straightener:
    def __init__(self, A: SuperAlgebra, U: SuperModule, minus_free: bool, plus_free: bool):
        self.A = A
        self.U = U
        self.minus_free = minus_free
        self.plus_free = plus_free
        self.z = {b.index: b.z_grade for b in A.basis}
        self.memo: Dict[Tuple[int, Key], Dict[Key, object]] = {}

    def act(self, x: int, key: Key) -> Dict[Key, object]:
        mk = (x, key)
        hit = self.memo.get(mk)
        if hit is not None:
            return hit
        res = self._act(x, key)
        self.memo[mk] = res
        return res

    def _act(self, x: int, key: Key) -> Dict[Key, object]:
        A = self.A
        S, T, j = key
        px = A.parities[x]
        out: Dict[Key, object] = {}
        if S:
            s1, rest = S[0], (S[1:], T, j)
            for c, f in A.bracket_basis(x, s1).items():
                _acc(out, self.act(c, rest), f)
            for k2, v in self.act(x, rest).items():
                ins = _insert(k2[0], s1)
                if ins is not None:
                    _addto(out, (ins[1], k2[1], k2[2]), sgn(px) * ins[0] * v)
            return _clean(out)
        if T:
            t1, rest = T[0], ((), T[1:], j)
            for c, f in A.bracket_basis(x, t1).items():
                _acc(out, self.act(c, rest), f)
            for k2, v in self.act(x, rest).items():
                _acc(out, self.left_plus(t1, k2), sgn(px) * v)
            return _clean(out)
        z = self.z[x]
        if z == -1:
            return {((x,), (), j): 1} if self.minus_free else {}
        if z == 1:
            return {((), (x,), j): 1} if self.plus_free else {}
        col = self.U.action[x].column(j)
        return {((), (), k): v for k, v in col.items()}

    def left_plus(self, t: int, key: Key) -> Dict[Key, object]:
        """Qbar_t times a PBW monomial, re-straightened."""
        S, T, j = key
        if not S:
            ins = _insert(T, t)
            return {} if ins is None else {((), ins[1], j): ins[0]}
        return self.act(t, key)


def _addto(d: Dict, k, v):
    nv = d.get(k, 0) + v
    if nv:
        d[k] = nv
    else:
        d.pop(k, None)


def _acc(d: Dict, other: Dict, scale):
    if not scale:
        return
    for k, v in other.items():
        _addto(d, k, v * scale)


def _clean(d: Dict) -> Dict:
    return {k: v for k, v in d.items() if v}


def _subsets(idx: Sequence[int]) -> List[Tuple[int, ...]]:
    out: List[Tuple[int, ...]] = []
    for r in range(len(idx) + 1):
        out.extend(combinations(sorted(idx), r))
    return out


def _induce(A: SuperAlgebra, U: SuperModule, minus_free: bool, plus_free: bool, tag: str,
            check: bool) -> SuperModule:
    if A.y_index is None or not A.odd_indices:
        raise InductionError(f"{A.name} is not a Z-graded superalgebra")
    E = U.algebra
    if E.parent is not A and not (E is A.even or same_algebra(E, A.even)):
        raise InductionError("U must be a module of the even subalgebra of the target algebra")
    if any(U.parity):
        raise InductionError("U must be purely even")
    Ss = _subsets(A.minus_indices) if minus_free else [()]
    Ts = _subsets(A.plus_indices) if plus_free else [()]
    keys: List[Key] = []
    for S in Ss:
        for T in Ts:
            for j in range(U.dim):
                keys.append((S, T, j))
    keys.sort(key=lambda k: (len(k[0]) + len(k[1]), len(k[0]), k[0], k[1], k[2]))
    pos = {k: i for i, k in enumerate(keys)}
    st = _Straightener(A, U, minus_free, plus_free)
    n = len(keys)
    mats = []
    for x in range(A.dim):
        rows: Dict[int, Dict[int, object]] = {}
        for c, key in enumerate(keys):
            for k2, v in st.act(x, key).items():
                r = pos.get(k2)
                if r is None:
                    raise InductionError(f"straightening produced an unexpected monomial {k2}")
                rows.setdefault(r, {})[c] = rat(v)
        mats.append(SparseRationalMatrix(n, n, rows))
    parity = tuple((len(S) + len(T)) % 2 for S, T, _ in keys)
    labels = tuple(_key_label(A, k) for k in keys)
    meta = dict(U.meta)
    meta["keys"] = keys
    meta["U_dim"] = U.dim
    M = SuperModule(A, tuple(mats), parity, tag, meta, labels)
    if check:
        check_representation(M)
    return M


def _key_label(A: SuperAlgebra, key: Key) -> str:
    S, T, j = key
    parts = [A.labels[s] for s in S] + [A.labels[t] for t in T] + [f"u{j}"]
    return "*".join(parts)


def induce_plus(A: SuperAlgebra, U: SuperModule, *, check: bool = True) -> SuperModule:
    """Kac module V+(U) = Ind from L_0bar + L_{+1} (L_{+1} acting by zero)."""
    return _induce(A, U, True, False, f"kac({U.provenance})", check)


def induce_minus(A: SuperAlgebra, U: SuperModule, *, check: bool = True) -> SuperModule:
    """V-(U) = Ind from L_0bar + L_{-1} (L_{-1} acting by zero)."""
    return _induce(A, U, False, True, f"kac_minus({U.provenance})", check)


def induce_even(A: SuperAlgebra, U: SuperModule, *, check: bool = True) -> SuperModule:
    """Ind from L_0bar to L; dimension 2^{dim L_1bar} dim U."""
    return _induce(A, U, True, True, f"induce_even({U.provenance})", check)


def kac_dimension(A: SuperAlgebra, U: SuperModule) -> int:
    return 2 ** len(A.minus_indices) * U.dim


# -----------------------------------------------------------------------------
# structure of Kac modules


def top_layer(M: SuperModule) -> List[int]:
    """Basis indices of the generating layer (the U factor) of an induced module.

    For induced modules this is read off the PBW keys; otherwise the extreme Y
    eigenspace that generates M is used (highest first).
    """
    keys = M.meta.get("keys")
    if keys is not None and M.provenance.startswith(("kac(", "kac_minus(")):
        return [i for i, (S, T, _) in enumerate(keys) if not S and not T]
    ys = M.y_values()
    if ys is None:
        raise ModuleError("cannot locate a generating layer without a diagonal Y action")
    for y0 in (max(ys), min(ys)):
        layer = [i for i, y in enumerate(ys) if y == y0]
        if generated_subspace(M, [{i: 1} for i in layer]).dim == M.dim:
            return layer
    raise ModuleError("no extreme Y layer generates the module")


def maximal_submodule(M: SuperModule) -> Subspace:
    """Largest submodule meeting the generating layer trivially.

    For a Kac module (generated by an irreducible top layer) every proper
    submodule lies in the complement of the top layer, so this is the unique
    maximal submodule and M / maximal_submodule(M) is irreducible.
    """
    top = set(top_layer(M))
    start = Subspace(M.dim, SparseRationalMatrix.from_columns(
        M.dim, [{i: 1} for i in range(M.dim) if i not in top]), check=False)
    return largest_invariant_subspace(M, start)


def is_typical(M: SuperModule) -> bool:
    return maximal_submodule(M).dim == 0


def irreducible_quotient(M: SuperModule) -> SuperModule:
    N = maximal_submodule(M)
    Q = quotient_module(M, N, provenance=f"irrep({M.provenance})")
    return Q


def sl21_atypical(a: int, b) -> bool:
    """Atypicality of the sl(2/1) Kac module with Dynkin-type labels (a, b)."""
    b = rat(b)
    return b == 0 or b == a + 1


def sl21_kac(A: SuperAlgebra, a: int, b, *, check: bool = True) -> SuperModule:
    from .evenmods import sl21_even_module
    U = sl21_even_module(A, a, b)
    M = induce_plus(A, U, check=check)
    M.provenance = f"kac:{a},{rat_str(rat(b))}"
    return M


# -----------------------------------------------------------------------------
# decomposition of tensor products into highest-weight pieces


def super_singular_vectors(M: SuperModule):
    """Homogeneous vectors killed by the even raising operators and by L_{+1}."""
    A = M.algebra
    return singular_vectors(M, tuple(A.raising) + tuple(A.plus_indices))


def decompose_highest_weight(M: SuperModule) -> Optional[List[Dict[str, object]]]:
    """Split M into submodules generated by super-singular vectors.

    Returns one record per summand (highest weight, dimension, irreducible?)
    when the generated submodules form a direct sum equal to M, else None.
    """
    A = M.algebra
    pieces = []
    total_vecs = []
    for v, wt, par in super_singular_vectors(M):
        S = generated_subspace(M, [v])
        sub = submodule(M, S)
        irre = maximal_submodule(sub).dim == 0
        pieces.append({"highest_weight": wt, "parity": par, "dim": S.dim, "irreducible": irre,
                       "module": sub})
        total_vecs.extend(S.vectors())
    if sum(p["dim"] for p in pieces) != M.dim:
        return None
    if Subspace.span(M.dim, total_vecs).dim != M.dim:
        return None
    pieces.sort(key=lambda p: -p["dim"])
    return pieces


# -----------------------------------------------------------------------------
# the double induction map and its straightening


def invariant_pairing(A: SuperAlgebra) -> Dict[Tuple[int, int], object]:
    """The L_0-invariant element  QQbar = sum K_st Q_s Qbar_t  of L_{-1} (x) L_{+1}.

    Normalised so that sum K_st [Q_s, Qbar_t] = 2Y.  Raises when the
    invariant is not unique or its bracket image is not central.
    """
    from .linalg import kernel_basis
    minus, plus = list(A.minus_indices), list(A.plus_indices)
    unk = {(s, t): k for k, (s, t) in enumerate((s, t) for s in minus for t in plus)}
    rows: List[Dict[int, object]] = []
    for x in A.even_indices:
        eq: Dict[Tuple[int, int], Dict[int, object]] = {}
        for (s, t), k in unk.items():
            for s2, f in A.bracket_basis(x, s).items():
                eq.setdefault((s2, t), {})
                eq[(s2, t)][k] = eq[(s2, t)].get(k, 0) + f
            for t2, f in A.bracket_basis(x, t).items():
                eq.setdefault((s, t2), {})
                eq[(s, t2)][k] = eq[(s, t2)].get(k, 0) + f
        rows.extend(r for r in eq.values() if any(r.values()))
    m = SparseRationalMatrix.from_rows(len(unk), rows) if rows else SparseRationalMatrix.zeros(0, len(unk))
    ker = kernel_basis(m).vectors()
    if len(ker) != 1:
        raise InductionError(f"expected a unique invariant in L-1 (x) L+1, found {len(ker)}")
    K = {st: ker[0].get(k, 0) for st, k in unk.items() if ker[0].get(k, 0)}
    image: Dict[int, object] = {}
    for (s, t), c in K.items():
        for z, f in A.bracket_basis(s, t).items():
            image[z] = image.get(z, 0) + c * f
    image = {z: v for z, v in image.items() if v}
    if set(image) != {A.y_index}:
        raise InductionError("the invariant pairing does not bracket into the centre")
    scale = Fraction(2) / image[A.y_index]
    return {st: c * scale for st, c in K.items()}


def _pi_index(Vp: SuperModule, Vm: SuperModule, W: SuperModule) -> List[int]:
    """pi: V+(U) (x) V-(U*) -> Ind(U (x) U*), (m u) (x) (mbar u*) |-> m mbar (x) (u (x) u*).

    Returned as the W index of each tensor basis vector (pi is a relabelling,
    no signs arise because u is even).
    """
    pos = {k: i for i, k in enumerate(W.meta["keys"])}
    du = Vm.meta["U_dim"]
    out = []
    for S, _, j in Vp.meta["keys"]:
        for _, T, k in Vm.meta["keys"]:
            out.append(pos[(S, T, j * du + k)])
    return out


class StraighteningResult:
    """Outcome of the double induction check for one U.

    ``phi`` is T o pi^{-1} on W, normalised on the generating sector.
    ``triangular`` reports that phi sends sector (p, q) into
    (p, q) + (p-1, q-1) + ...; ``oracle`` compares phi(QQbar |w>) with
    QQbar |w> + 2y |w> for every basis vector w of U (x) U*.
    """

    def __init__(self, phi, y, isomorphism, normalised, triangular, oracle, failures):
        self.phi = phi
        self.y = y
        self.isomorphism = isomorphism
        self.normalised = normalised
        self.triangular = triangular
        self.oracle = oracle
        self.failures = failures

    @property
    def ok(self) -> bool:
        return self.isomorphism and self.normalised and self.triangular and self.oracle


def straightening_map(A: SuperAlgebra, U: SuperModule) -> StraighteningResult:
    """Solve for the intertwiner V+(U) (x) V-(U*) -> Ind(U (x) U*) and read off phi."""
    from .linalg import rank, solve
    from .modules import intertwiner_space
    Ud = dual_module(U, check=False)
    Vp = induce_plus(A, U, check=False)
    Vm = induce_minus(A, Ud, check=False)
    M = tensor_modules(Vp, Vm, check=False)
    W = induce_even(A, tensor_modules(U, Ud, check=False), check=False)
    pi = _pi_index(Vp, Vm, W)
    inv_pi = {w: i for i, w in enumerate(pi)}
    basis = intertwiner_space(M, W)
    keys = W.meta["keys"]
    top = [i for i, (S, T, _) in enumerate(keys) if not S and not T]
    # phi(|w>) = |w>:  (T)_{r, pi^-1(w)} = delta_{r, w}
    rows: List[Dict[int, object]] = []
    rhs: List[object] = []
    for w in top:
        c = inv_pi[w]
        for r in range(W.dim):
            row = {k: B[r, c] for k, B in enumerate(basis) if B[r, c]}
            want = 1 if r == w else 0
            if row or want:
                rows.append(row)
                rhs.append(want)
    sol = solve(SparseRationalMatrix.from_rows(len(basis), rows), rhs) if basis else None
    y = rat(U.y_values()[0]) if U.y_values() else None
    if sol is None:
        return StraighteningResult(None, y, False, False, False, False, ["no normalised intertwiner"])
    T = SparseRationalMatrix.zeros(W.dim, M.dim)
    for k, B in enumerate(basis):
        if sol[k]:
            T = T + B.scale(sol[k])
    iso = rank(T) == M.dim
    # phi = T o pi^{-1}: column w of phi is column pi^{-1}(w) of T
    phi = SparseRationalMatrix.from_columns(W.dim, [T.column(inv_pi[w]) for w in range(W.dim)])
    failures: List[str] = []
    tri = True
    for c, (S, T_, _) in enumerate(keys):
        p, q = len(S), len(T_)
        for r, v in phi.column(c).items():
            S2, T2, _ = keys[r]
            d = p - len(S2)
            if not (d >= 0 and q - len(T2) == d):
                tri = False
                failures.append(f"phi leaks {W.basis_labels[c]} -> {W.basis_labels[r]}")
                break
    K = invariant_pairing(A)
    pos = {k: i for i, k in enumerate(keys)}
    ok = True
    for w in top:
        j = keys[w][2]
        qq: Dict[int, object] = {}
        for (s, t), coef in K.items():
            qq[pos[((s,), (t,), j)]] = qq.get(pos[((s,), (t,), j)], 0) + coef
        got = phi.apply(qq)
        want = dict(qq)
        want[w] = want.get(w, 0) + 2 * y
        if vec_clean(dict(got)) != vec_clean(want):
            ok = False
            failures.append(f"oracle mismatch at {W.basis_labels[w]}")
    return StraighteningResult(phi, y, iso, True, tri, ok, failures)


__all__ = [
    "InductionError",
    "decompose_highest_weight",
    "dual_module",
    "induce_even",
    "induce_minus",
    "induce_plus",
    "invariant_pairing",
    "irreducible_quotient",
    "is_typical",
    "kac_dimension",
    "maximal_submodule",
    "sl21_atypical",
    "sl21_kac",
    "straightening_map",
    "StraighteningResult",
    "super_singular_vectors",
    "tensor_modules",
    "top_layer",
]
