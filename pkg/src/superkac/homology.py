"""Degree-one Lie superalgebra homology and cohomology with module coefficients.

Chains: B0 = M, B1 = L (x) M, B2 = (super-exterior square of L) (x) M, where
the exterior square has basis X_a ^ X_b for a < b together with X_a ^ X_a
for odd a (odd elements commute under the super wedge).  Boundaries:

    d0(X (x) v)     = X v
    d1(X^Y (x) v)   = X (x) Yv - (-1)^{|X||Y|} Y (x) Xv - [X, Y] (x) v

This is Lambda L (x) U(L) (the Koszul resolution of the trivial module by free
right U(L)-modules) tensored over U(L) with M, so no sign involving the
parity of v appears and H_1 is Tor_1(C, M).

Cochains of parity p: C^0 = M, C^1 = Hom(L, M), C^2 on the exterior square,

    (d0 m)(X)      = (-1)^{|X| p} X m
    (d1 c)(X, Y)   = (-1)^{|X| p} X c(Y) - (-1)^{|X||Y| + |Y| p} Y c(X) - c([X, Y]).

Everything is split into blocks labelled by (Cartan weight, parity), which
the boundary maps preserve.  Since L acts trivially on H_1 and H^1 while a
Cartan element acts on a weight-mu block by mu, only the zero-weight blocks
can contribute; ``blocks="zero"`` computes only those, ``blocks="all"`` every
block (the nonzero ones then serve as a consistency check).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import (
    Echelon,
    SparseRationalMatrix,
    Subspace,
    Vector,
    column_space,
    intersect,
    kernel_basis,
    quotient_dim,
    rank,
    rat,
    vec_axpy,
    vec_clean,
)
from .modules import (
    ModuleError,
    SuperModule,
    invariants,
    intertwiner_space,
    same_algebra,
    sgn,
    singular_vectors,
    generated_subspace,
)
from .superalgebra import SimpleFactor, SuperAlgebra, factor_metric

Weight = Tuple[object, ...]


class SignConventionError(RuntimeError):
    """A composite of boundary maps is nonzero: a sign or structure bug."""


@dataclass
class CohomologyResult:
    kernel_dim: int
    image_dim: int
    quotient_dim: int
    representatives: List[Dict[Tuple, object]] = field(default_factory=list)
    by_block: Dict[Tuple, Tuple[int, int]] = field(default_factory=dict)
    blocks: str = "all"
    seconds: float = 0.0

    def to_json(self) -> Dict[str, object]:
        from .linalg import rat_str
        return {
            "kernel": self.kernel_dim,
            "image": self.image_dim,
            "h1": self.quotient_dim,
            "blocks": self.blocks,
            "representatives": [
                [[list(k), rat_str(v)] for k, v in sorted(r.items())] for r in self.representatives
            ],
        }


def _algebra_weights(A: SuperAlgebra) -> List[Weight]:
    """ad-Cartan eigenvalue of each basis element (the basis consists of weight vectors)."""
    out = []
    for b in range(A.dim):
        w = []
        for h in A.cartan_indices:
            col = A.bracket_basis(h, b)
            if set(col) - {b}:
                raise ModuleError(f"basis element {A.labels[b]} is not an ad-Cartan eigenvector")
            w.append(rat(col.get(b, 0)))
        out.append(tuple(w))
    return out


def _module_weights(A: SuperAlgebra, rho, n: int) -> List[Weight]:
    for h in A.cartan_indices:
        if any(i != j for i, j, _ in rho[h].entries()):
            raise ModuleError("chain blocks need a diagonal Cartan action on the module")
    return [tuple(rat(rho[h][i, i]) for h in A.cartan_indices) for i in range(n)]


def _add(u: Weight, v: Weight, s: int = 1) -> Weight:
    return tuple(rat(x + s * y) for x, y in zip(u, v))


def exterior_square_pairs(A: SuperAlgebra) -> List[Tuple[int, int]]:
    p = A.parities
    return [(a, b) for a in range(A.dim) for b in range(a, A.dim) if a < b or p[a] == 1]


def _module_on(A: SuperAlgebra, M: SuperModule) -> Tuple[SparseRationalMatrix, ...]:
    """Action matrices of A's basis on M; A may be a subalgebra of M's algebra."""
    if A is M.algebra or same_algebra(A, M.algebra):
        return M.action
    # walk up the chain of subalgebras, composing the embeddings
    idx = list(range(A.dim))
    B = A
    while B.parent is not None and B.embedding is not None:
        idx = [B.embedding[i] for i in idx]
        B = B.parent
        if B is M.algebra or same_algebra(B, M.algebra):
            return tuple(M.action[i] for i in idx)
    raise ModuleError(f"module over {M.algebra.name} cannot be restricted to {A.name}")


class ChainComplex:
    """Degree <= 2 chains of (A, M), assembled block by block on demand."""

    def __init__(self, A: SuperAlgebra, M: SuperModule):
        self.A = A
        self.M = M
        self.rho = _module_on(A, M)
        self.aw = _algebra_weights(A)
        self.mw = _module_weights(A, self.rho, M.dim)
        self.p = A.parities
        self.pairs = exterior_square_pairs(A)
        self.by_weight: Dict[Weight, List[int]] = {}
        for i, w in enumerate(self.mw):
            self.by_weight.setdefault(w, []).append(i)
        self._brackets = {(a, b): A.bracket_basis(a, b) for a, b in self.pairs}

    # -- bookkeeping -----------------------------------------------------------

    @property
    def dims(self) -> Tuple[int, int, int]:
        d = self.M.dim
        return (len(self.pairs) * d, self.A.dim * d, d)

    def sector_counts(self) -> Dict[str, int]:
        """Sizes of the even^even, even(x)odd and odd-symmetric sectors of the exterior square."""
        p = self.p
        ee = sum(1 for a, b in self.pairs if p[a] == p[b] == 0)
        eo = sum(1 for a, b in self.pairs if p[a] != p[b])
        oo = sum(1 for a, b in self.pairs if p[a] == p[b] == 1)
        return {"even^even": ee, "even*odd": eo, "odd.odd": oo}

    def weights(self) -> List[Tuple[Weight, int]]:
        """All (weight, parity) labels carried by B1."""
        seen = set()
        for a in range(self.A.dim):
            for i in range(self.M.dim):
                seen.add((_add(self.aw[a], self.mw[i]), (self.p[a] + self.M.parity[i]) % 2))
        return sorted(seen, key=lambda k: (tuple(float(x) for x in k[0]), k[1]))

    def zero_weight(self) -> Weight:
        return tuple(0 for _ in self.A.cartan_indices)

    def keys(self, degree: int, weight: Weight, parity: int) -> List[Tuple]:
        M, p = self.M, self.p
        if degree == 0:
            return [(i,) for i in self.by_weight.get(weight, []) if M.parity[i] == parity]
        if degree == 1:
            out = []
            for a in range(self.A.dim):
                for i in self.by_weight.get(_add(weight, self.aw[a], -1), []):
                    if (p[a] + M.parity[i]) % 2 == parity:
                        out.append((a, i))
            return out
        if degree == 2:
            out = []
            for a, b in self.pairs:
                need = _add(_add(weight, self.aw[a], -1), self.aw[b], -1)
                for i in self.by_weight.get(need, []):
                    if (p[a] + p[b] + M.parity[i]) % 2 == parity:
                        out.append((a, b, i))
            return out
        raise ValueError("degree must be 0, 1 or 2")

    # -- boundary maps ---------------------------------------------------------

    def d0_column(self, a: int, i: int) -> Dict[Tuple, object]:
        return {(k,): x for k, x in self.rho[a].column(i).items()}

    def d1_column(self, a: int, b: int, i: int) -> Dict[Tuple, object]:
        out: Dict[Tuple, object] = {}
        s = sgn(self.p[a] * self.p[b])
        for k, x in self.rho[b].column(i).items():
            _acc(out, (a, k), x)
        for k, x in self.rho[a].column(i).items():
            _acc(out, (b, k), -s * x)
        for c, f in self._brackets[(a, b)].items():
            _acc(out, (c, i), -f)
        return {k: v for k, v in out.items() if v}

    def block(self, weight: Weight, parity: int):
        """(keys2, keys1, keys0, d1, d0) on one block; checks d0 d1 = 0."""
        k2 = self.keys(2, weight, parity)
        k1 = self.keys(1, weight, parity)
        k0 = self.keys(0, weight, parity)
        pos1 = {k: n for n, k in enumerate(k1)}
        pos0 = {k: n for n, k in enumerate(k0)}
        d0 = SparseRationalMatrix.from_columns(len(k0), [
            {pos0[k]: x for k, x in self.d0_column(*key).items()} for key in k1])
        d1 = SparseRationalMatrix.from_columns(len(k1), [
            {pos1[k]: x for k, x in self.d1_column(*key).items()} for key in k2])
        comp = d0 @ d1
        if not comp.is_zero():
            r, c, _ = next(iter(comp.entries()))
            raise SignConventionError(f"d0 d1 != 0 on chain {k2[c]} (component {k0[r]})")
        return k2, k1, k0, d1, d0

    def full_matrices(self) -> Tuple[SparseRationalMatrix, SparseRationalMatrix]:
        """Global (d1, d0) in the basis ordering (a, b, i) / (a, i) / i.  Small modules only."""
        d = self.M.dim
        pair_pos = {pr: n for n, pr in enumerate(self.pairs)}
        cols1 = []
        for a, b in self.pairs:
            for i in range(d):
                cols1.append({k[0] * d + k[1]: x for k, x in self.d1_column(a, b, i).items()})
        cols0 = []
        for a in range(self.A.dim):
            for i in range(d):
                cols0.append({k[0]: x for k, x in self.d0_column(a, i).items()})
        d1 = SparseRationalMatrix.from_columns(self.A.dim * d, cols1)
        d0 = SparseRationalMatrix.from_columns(d, cols0)
        if not (d0 @ d1).is_zero():
            raise SignConventionError("d0 d1 != 0")
        return d1, d0


def _acc(d: Dict, k, x):
    v = d.get(k, 0) + x
    if v:
        d[k] = v
    else:
        d.pop(k, None)


def build_chain_complex(A: SuperAlgebra, M: SuperModule) -> ChainComplex:
    return ChainComplex(A, M)


def _block_list(C, blocks: str):
    if blocks == "zero":
        z = C.zero_weight()
        return [(z, 0), (z, 1)]
    if blocks == "all":
        return C.weights()
    raise ValueError("blocks must be 'zero' or 'all'")


def _quotient(kernel: Subspace, image_cols: List[Vector], keys: List[Tuple], want_reps: bool):
    ech = Echelon(kernel.ambient_dim)
    im_rank = 0
    for v in image_cols:
        if v and ech.add(v):
            im_rank += 1
    reps = []
    if want_reps and kernel.dim > im_rank:
        for v in kernel.vectors():
            if ech.add(v):
                reps.append({keys[j]: x for j, x in v.items()})
    return im_rank, reps


def homology1(C: ChainComplex, *, blocks: str = "all", representatives: bool = True) -> CohomologyResult:
    t0 = time.perf_counter()
    kd = im = 0
    reps: List[Dict] = []
    by_block = {}
    for w, par in _block_list(C, blocks):
        k2, k1, k0, d1, d0 = C.block(w, par)
        if not k1:
            continue
        K = kernel_basis(d0) if k0 else Subspace.full(len(k1))
        r, rr = _quotient(K, d1.columns(), k1, representatives)
        if K.dim < r:
            raise SignConventionError("image larger than kernel")
        kd += K.dim
        im += r
        reps.extend(rr)
        if K.dim or r:
            by_block[(w, par)] = (K.dim, r)
    return CohomologyResult(kd, im, kd - im, reps, by_block, blocks, time.perf_counter() - t0)


# -----------------------------------------------------------------------------
# cochains


class CochainComplex:
    """C^0 -> C^1 -> C^2 for (A, M), blockwise like :class:`ChainComplex`."""

    def __init__(self, A: SuperAlgebra, M: SuperModule):
        self.A = A
        self.M = M
        self.rho = _module_on(A, M)
        self.aw = _algebra_weights(A)
        self.mw = _module_weights(A, self.rho, M.dim)
        self.p = A.parities
        self.pairs = exterior_square_pairs(A)
        self.pair_set = set(self.pairs)
        self.by_weight: Dict[Weight, List[int]] = {}
        for i, w in enumerate(self.mw):
            self.by_weight.setdefault(w, []).append(i)
        # pairs (a, b) with f_ab^e != 0, grouped by e
        self.bracket_into: Dict[int, List[Tuple[int, int, object]]] = {}
        for a, b in self.pairs:
            for e, f in A.bracket_basis(a, b).items():
                self.bracket_into.setdefault(e, []).append((a, b, f))

    def zero_weight(self) -> Weight:
        return tuple(0 for _ in self.A.cartan_indices)

    def weights(self) -> List[Tuple[Weight, int]]:
        seen = set()
        for a in range(self.A.dim):
            for i in range(self.M.dim):
                seen.add((_add(self.mw[i], self.aw[a], -1), (self.p[a] + self.M.parity[i]) % 2))
        return sorted(seen, key=lambda k: (tuple(float(x) for x in k[0]), k[1]))

    def keys(self, degree: int, weight: Weight, parity: int) -> List[Tuple]:
        M, p = self.M, self.p
        if degree == 0:
            return [(i,) for i in self.by_weight.get(weight, []) if M.parity[i] == parity]
        if degree == 1:
            out = []
            for a in range(self.A.dim):
                for i in self.by_weight.get(_add(weight, self.aw[a]), []):
                    if (p[a] + M.parity[i]) % 2 == parity:
                        out.append((a, i))
            return out
        if degree == 2:
            out = []
            for a, b in self.pairs:
                for i in self.by_weight.get(_add(_add(weight, self.aw[a]), self.aw[b]), []):
                    if (p[a] + p[b] + M.parity[i]) % 2 == parity:
                        out.append((a, b, i))
            return out
        raise ValueError("degree must be 0, 1 or 2")

    def d0_column(self, i: int, parity: int) -> Dict[Tuple, object]:
        out = {}
        for a in range(self.A.dim):
            s = sgn(self.p[a] * parity)
            for k, x in self.rho[a].column(i).items():
                out[(a, k)] = s * x
        return out

    def d1_column(self, e: int, i: int, parity: int) -> Dict[Tuple, object]:
        """d1 of the cochain with c(X_e) = v_i, evaluated on canonical pairs."""
        p = self.p
        out: Dict[Tuple, object] = {}
        A = self.A
        for a in range(A.dim):
            if (a, e) in self.pair_set:
                s = sgn(p[a] * parity)
                for k, x in self.rho[a].column(i).items():
                    _acc(out, (a, e, k), s * x)
            if (e, a) in self.pair_set:
                s = -sgn(p[e] * p[a] + p[a] * parity)
                for k, x in self.rho[a].column(i).items():
                    _acc(out, (e, a, k), s * x)
        for a, b, f in self.bracket_into.get(e, []):
            _acc(out, (a, b, i), -f)
        return out

    def block(self, weight: Weight, parity: int):
        k0 = self.keys(0, weight, parity)
        k1 = self.keys(1, weight, parity)
        k2 = self.keys(2, weight, parity)
        pos1 = {k: n for n, k in enumerate(k1)}
        pos2 = {k: n for n, k in enumerate(k2)}
        d0 = SparseRationalMatrix.from_columns(len(k1), [
            {pos1[k]: x for k, x in self.d0_column(key[0], parity).items()} for key in k0])
        d1 = SparseRationalMatrix.from_columns(len(k2), [
            {pos2[k]: x for k, x in self.d1_column(key[0], key[1], parity).items()} for key in k1])
        comp = d1 @ d0
        if not comp.is_zero():
            r, c, _ = next(iter(comp.entries()))
            raise SignConventionError(f"d1 d0 != 0 on cochain {k0[c]} (component {k2[r]})")
        return k0, k1, k2, d0, d1


def build_cochain_complex(A: SuperAlgebra, M: SuperModule) -> CochainComplex:
    return CochainComplex(A, M)


def cohomology1(A: SuperAlgebra, M: SuperModule, *, blocks: str = "all",
                representatives: bool = True, parities: Sequence[int] = (0, 1)) -> CohomologyResult:
    """H^1(A, M).  Representatives are cocycles as {(a, i): coefficient} (c(X_a) component i)."""
    t0 = time.perf_counter()
    C = CochainComplex(A, M)
    kd = im = 0
    reps: List[Dict] = []
    by_block = {}
    for w, par in _block_list(C, blocks):
        if par not in parities:
            continue
        k0, k1, k2, d0, d1 = C.block(w, par)
        if not k1:
            continue
        K = kernel_basis(d1) if k2 else Subspace.full(len(k1))
        r, rr = _quotient(K, d0.columns(), k1, representatives)
        kd += K.dim
        im += r
        for rep in rr:
            rep_meta = dict(rep)
            reps.append(rep_meta)
        if K.dim or r:
            by_block[(w, par)] = (K.dim, r)
    return CohomologyResult(kd, im, kd - im, reps, by_block, blocks, time.perf_counter() - t0)


def cocycle_parity(C: CochainComplex, rep: Dict[Tuple, object]) -> int:
    a, i = next(iter(rep))
    return (C.p[a] + C.M.parity[i]) % 2


# -----------------------------------------------------------------------------
# the algebra acting on chains


def _wedge(p: Sequence[int], a: int, b: int) -> Optional[Tuple[int, Tuple[int, int]]]:
    """X_a ^ X_b in canonical form: (sign, (min, max)) or None when it vanishes."""
    if a < b:
        return 1, (a, b)
    if a > b:
        return -sgn(p[a] * p[b]), (b, a)
    return (1, (a, a)) if p[a] else None


def chain_action(C: ChainComplex, x: int, key: Tuple) -> Dict[Tuple, object]:
    """Adjoint (x) module action of basis element x on a chain basis vector."""
    A, p, rho = C.A, C.p, C.rho
    px = p[x]
    out: Dict[Tuple, object] = {}
    if len(key) == 1:
        for k, v in rho[x].column(key[0]).items():
            _acc(out, (k,), v)
        return out
    if len(key) == 2:
        a, i = key
        for c, f in A.bracket_basis(x, a).items():
            _acc(out, (c, i), f)
        s = sgn(px * p[a])
        for k, v in rho[x].column(i).items():
            _acc(out, (a, k), s * v)
        return out
    a, b, i = key
    for c, f in A.bracket_basis(x, a).items():
        w = _wedge(p, c, b)
        if w:
            _acc(out, (*w[1], i), w[0] * f)
    s1 = sgn(px * p[a])
    for c, f in A.bracket_basis(x, b).items():
        w = _wedge(p, a, c)
        if w:
            _acc(out, (*w[1], i), s1 * w[0] * f)
    s2 = sgn(px * (p[a] + p[b]))
    for k, v in rho[x].column(i).items():
        _acc(out, (a, b, k), s2 * v)
    return out


def apply_d(C: ChainComplex, chain: Dict[Tuple, object]) -> Dict[Tuple, object]:
    """Boundary of a chain given as {key: coefficient} (degree read off the key length)."""
    out: Dict[Tuple, object] = {}
    for key, c in chain.items():
        col = C.d1_column(*key) if len(key) == 3 else C.d0_column(*key)
        for k, v in col.items():
            _acc(out, k, c * v)
    return out


def check_equivariance(C: ChainComplex, weight: Optional[Weight] = None, parity: Optional[int] = None) -> List[str]:
    """d(x . c) = (-1)^{?} x . d(c) with no sign (boundaries are even maps); returns violations."""
    blocks = C.weights() if weight is None else [(weight, parity)]
    bad = []
    for w, par in blocks:
        for deg in (1, 2):
            for key in C.keys(deg, w, par):
                dk = apply_d(C, {key: 1})
                for x in range(C.A.dim):
                    lhs = apply_d(C, chain_action(C, x, key))
                    rhs: Dict[Tuple, object] = {}
                    for k, v in dk.items():
                        for k2, v2 in chain_action(C, x, k).items():
                            _acc(rhs, k2, v * v2)
                    if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                        bad.append(f"d not equivariant for {C.A.labels[x]} on {key}")
                        if len(bad) > 5:
                            return bad
    return bad


def chain_invariants(C: ChainComplex, degree: int) -> Tuple[List[Tuple], Subspace]:
    """Invariants of B_degree (they sit in the even zero-weight block)."""
    z = C.zero_weight()
    keys = C.keys(degree, z, 0)
    rows: Dict[Tuple, Dict[int, object]] = {}
    cart = set(C.A.cartan_indices)
    for j, key in enumerate(keys):
        for x in range(C.A.dim):
            if x in cart:
                continue
            for k, v in chain_action(C, x, key).items():
                rows.setdefault((x, k), {})[j] = v
    m = SparseRationalMatrix.from_rows(len(keys), list(rows.values())) if rows else \
        SparseRationalMatrix.zeros(0, len(keys))
    return keys, kernel_basis(m)


# -----------------------------------------------------------------------------
# the complex restricted to even-subalgebra invariants


@dataclass
class InvariantChainData:
    keys: Dict[int, List[Tuple]]
    invariants: Dict[int, Subspace]
    kernel_dim: int
    image_dim: int

    @property
    def quotient_dim(self) -> int:
        return self.kernel_dim - self.image_dim


def _as_chain(keys: List[Tuple], v: Vector) -> Dict[Tuple, object]:
    return {keys[j]: x for j, x in v.items()}


def _in_span(keys: List[Tuple], basis: Subspace, chain: Dict[Tuple, object]) -> Optional[Vector]:
    pos = {k: n for n, k in enumerate(keys)}
    try:
        v = {pos[k]: x for k, x in chain.items() if x}
    except KeyError:
        return None
    from .linalg import CoordinateMap
    return CoordinateMap(len(keys), basis.vectors())(v)


def invariant_restricted_h1(E: SuperAlgebra, N: SuperModule) -> Tuple[CohomologyResult, InvariantChainData]:
    """H_1 of the complex of E-invariant chains of (E, N).

    For E reductive acting semisimply this equals H_1(E, N), and by Shapiro's
    lemma it is the homology of the induced module.  The restricted maps are
    checked to send invariants to invariants.
    """
    t0 = time.perf_counter()
    C = ChainComplex(E, N)
    inv = {}
    keys = {}
    for d in (0, 1, 2):
        keys[d], inv[d] = chain_invariants(C, d)
    # d0 on invariant 1-chains
    images0 = []
    for v in inv[1].vectors():
        img = apply_d(C, _as_chain(keys[1], v))
        c = _in_span(keys[0], inv[0], img) if img else {}
        if c is None:
            raise SignConventionError("d0 maps an invariant 1-chain outside the invariants")
        images0.append(c)
    k1 = inv[1].dim
    d0r = SparseRationalMatrix.from_columns(inv[0].dim, images0) if k1 else SparseRationalMatrix.zeros(inv[0].dim, 0)
    kern = kernel_basis(d0r)
    images1 = []
    for v in inv[2].vectors():
        img = apply_d(C, _as_chain(keys[2], v))
        c = _in_span(keys[1], inv[1], img) if img else {}
        if c is None:
            raise SignConventionError("d1 maps an invariant 2-chain outside the invariants")
        images1.append(c)
    reps_coords: List[Vector] = []
    ech = Echelon(k1)
    im = 0
    for c in images1:
        if c and ech.add(c):
            im += 1
    for v in kern.vectors():
        if ech.add(v):
            reps_coords.append(v)
    basis1 = inv[1].vectors()
    reps = []
    for c in reps_coords:
        chain: Vector = {}
        for j, x in c.items():
            vec_axpy(chain, basis1[j], x)
        reps.append(_as_chain(keys[1], chain))
    res = CohomologyResult(kern.dim, im, kern.dim - im, reps, {}, "invariant", time.perf_counter() - t0)
    return res, InvariantChainData(keys, inv, kern.dim, im)


# -----------------------------------------------------------------------------
# Casimir contraction and the proof objects I_0 ... I_2^Y


def _factor_structure(A: SuperAlgebra, factor: SimpleFactor):
    idx = factor.indices
    pos = {a: i for i, a in enumerate(idx)}
    n = len(idx)
    f = [[{} for _ in range(n)] for _ in range(n)]
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            for c, x in A.bracket_basis(a, b).items():
                f[i][j][pos[c]] = rat(x)
    return f


def _dense_inverse(g: SparseRationalMatrix) -> List[List[Fraction]]:
    from .linalg import inverse
    gi = inverse(g)
    n = g.n_rows
    return [[Fraction(gi[i, j]) for j in range(n)] for i in range(n)]


@dataclass
class CasimirReport:
    factor: str
    contraction: Fraction          # (f_cab f^ab_d - 1/2 f_abc f^ab_d) / g_cd
    casimir: Fraction              # eigenvalue of -g^{ab} ad J_a ad J_b on the adjoint
    killing_normalised: Fraction   # sum kappa^{ab} ad J_a ad J_b with kappa the Killing form


def casimir_adjoint(A: SuperAlgebra, factor: SimpleFactor) -> CasimirReport:
    """Brute-force contraction of the structure constants of one simple factor.

    The metric is g = -2 tr on the factor's natural block.  With lowered
    indices f_abc = f_ab^e g_ec (totally antisymmetric) the contraction
    f_cab f^ab_d - 1/2 f_abc f^ab_d must be a multiple C g_cd; C is returned
    together with the conventional adjoint Casimir eigenvalue, which is 2C.
    """
    f = _factor_structure(A, factor)
    g = factor_metric(A, factor)
    n = g.n_rows
    gd = [[Fraction(g[i, j]) for j in range(n)] for i in range(n)]
    gi = _dense_inverse(g)
    low = [[[sum((f[a][b].get(e, 0) * gd[e][c] for e in range(n)), Fraction(0)) for c in range(n)]
             for b in range(n)] for a in range(n)]
    # f^{ab}_d = g^{aa'} g^{bb'} f_{a'b'd}
    up = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for d in range(n):
                s = Fraction(0)
                for a2 in range(n):
                    if not gi[a][a2]:
                        continue
                    for b2 in range(n):
                        if gi[b][b2]:
                            s += gi[a][a2] * gi[b][b2] * low[a2][b2][d]
                up[a][b][d] = s
    T = [[Fraction(0)] * n for _ in range(n)]
    for c in range(n):
        for d in range(n):
            s = Fraction(0)
            for a in range(n):
                for b in range(n):
                    if up[a][b][d]:
                        s += (low[c][a][b] - Fraction(1, 2) * low[a][b][c]) * up[a][b][d]
            T[c][d] = s
    ratio = None
    for c in range(n):
        for d in range(n):
            if gd[c][d]:
                ratio = T[c][d] / gd[c][d]
                break
        if ratio is not None:
            break
    for c in range(n):
        for d in range(n):
            if T[c][d] != ratio * gd[c][d]:
                raise ValueError("contraction is not proportional to the metric")
    # conventional Casimir: -sum g^{ab} ad(J_a) ad(J_b) on the adjoint
    ad = [[[f[a][b].get(c, 0) for b in range(n)] for c in range(n)] for a in range(n)]  # ad[a][c][b]
    cas = Fraction(0)
    for a in range(n):
        for b in range(n):
            if gi[a][b]:
                # (ad_a ad_b)[0][0]... use trace / n for the scalar
                tr = sum(ad[a][c][e] * ad[b][e][c] for c in range(n) for e in range(n))
                cas -= gi[a][b] * tr
    cas = cas / n
    from .superalgebra import killing_scale
    ks = killing_scale(A, factor)  # Killing = ks * g
    # with the Killing form as metric the same operator is -cas / ks (always 1)
    return CasimirReport(factor.name, ratio, cas, -cas / ks)


def factor_adjoint_module(E: SuperAlgebra, factor: SimpleFactor) -> SuperModule:
    """Adjoint of one simple factor as a module of the whole even algebra."""
    idx = factor.indices
    pos = {a: i for i, a in enumerate(idx)}
    n = len(idx)
    mats = []
    for x in range(E.dim):
        rows: Dict[int, Dict[int, object]] = {}
        if x in pos:
            for j, b in enumerate(idx):
                for c, v in E.bracket_basis(x, b).items():
                    rows.setdefault(pos[c], {})[j] = v
        mats.append(SparseRationalMatrix(n, n, rows))
    return SuperModule(E, tuple(mats), (0,) * n, f"adjoint({factor.name})")


@dataclass
class DiagnosticLine:
    name: str
    ok: bool
    detail: str


def proof_diagnostics(E: SuperAlgebra, N: SuperModule) -> List[DiagnosticLine]:
    """Build the proof's invariant chains for (E, N) and check their boundaries.

    N is the zero-Y-weight module U (x) U*.  For every simple factor F whose
    adjoint occurs in N (via an equivariant map iota), with metric g on F:

        I1   = g^{ab} J_a (x) iota(J_b)
        I2   = 1/2 g^{aa'} g^{bb'} (J_a ^ J_b) (x) iota([J_a', J_b'])
        I2^Y = g^{ab} (Y ^ J_a) (x) iota(J_b)

    and checks d0 I1 = 0, d1 I2 = C I1 with C from :func:`casimir_adjoint`,
    d1 I2^Y = 0.  Also d0 (Y (x) w0) = 0 for each invariant w0, and d1 = 0 on
    the invariants of (L_0 ^ L_0) (x) W for each isotypic component W of N
    that is not an adjoint of a factor.
    """
    C = ChainComplex(E, N)
    out: List[DiagnosticLine] = []
    y = E.y_index
    p = E.parities
    NE = SuperModule(E, C.rho, N.parity, N.provenance)
    inv0 = invariants(NE)
    out.append(DiagnosticLine("I0 = w0 invariants", True, f"dim {inv0.dim}"))
    for w0 in inv0.vectors():
        chain = {(y, i): x for i, x in w0.items()}
        r = apply_d(C, chain)
        out.append(DiagnosticLine("d0 I1^Y = 0", not r, f"residual {len(r)} terms"))
    adj_weights = set()
    for F in E.simple_factors:
        adjF = factor_adjoint_module(E, F)
        iotas = intertwiner_space(adjF, NE)
        cas = casimir_adjoint(E, F)
        gi = _dense_inverse(factor_metric(E, F))
        idx = F.indices
        n = len(idx)
        fstruct = _factor_structure(E, F)
        # highest weight of the factor adjoint (for the isotypic bookkeeping below)
        for v, wt, _ in singular_vectors(adjF, E.raising):
            adj_weights.add(wt)
        if not iotas:
            out.append(DiagnosticLine(f"I1[{F.name}]", True, "adjoint absent from U (x) U*: vacuous"))
            continue
        for t, iota in enumerate(iotas):
            w = [iota.column(b) for b in range(n)]
            I1: Dict[Tuple, object] = {}
            for a in range(n):
                for b in range(n):
                    if gi[a][b]:
                        for i, x in w[b].items():
                            _acc(I1, (idx[a], i), gi[a][b] * x)
            r0 = apply_d(C, I1)
            out.append(DiagnosticLine(f"d0 I1[{F.name}#{t}] = 0", not r0, f"residual {len(r0)} terms"))
            I2: Dict[Tuple, object] = {}
            for a in range(n):
                for a2 in range(n):
                    if not gi[a][a2]:
                        continue
                    for b in range(n):
                        for b2 in range(n):
                            if not gi[b][b2]:
                                continue
                            wedge = _wedge(p, idx[a], idx[b])
                            if wedge is None:
                                continue
                            coef = Fraction(1, 2) * gi[a][a2] * gi[b][b2] * wedge[0]
                            for c, fc in fstruct[a2][b2].items():
                                for i, x in w[c].items():
                                    _acc(I2, (*wedge[1], i), coef * fc * x)
            d1I2 = apply_d(C, I2)
            ratio = _ratio(d1I2, I1)
            ok = ratio is not None and ratio == cas.contraction
            out.append(DiagnosticLine(
                f"d1 I2[{F.name}#{t}] = C I1", ok,
                f"observed ratio {ratio}, contracted C = {cas.contraction} "
                f"(conventional adjoint Casimir {cas.casimir})"))
            I2Y: Dict[Tuple, object] = {}
            for a in range(n):
                for b in range(n):
                    if gi[a][b]:
                        wedge = _wedge(p, y, idx[a])
                        for i, x in w[b].items():
                            _acc(I2Y, (*wedge[1], i), wedge[0] * gi[a][b] * x)
            r2 = apply_d(C, I2Y)
            out.append(DiagnosticLine(f"d1 I2^Y[{F.name}#{t}] = 0", not r2, f"residual {len(r2)} terms"))
    # non-adjoint isotypic components
    keys2, inv2 = chain_invariants(C, 2)
    ss = set(E.semisimple_indices)
    by_wt: Dict[Weight, List[Vector]] = {}
    for v, wt, _ in singular_vectors(NE, E.raising):
        by_wt.setdefault(wt, []).append(v)
    checked = 0
    for wt, vecs in sorted(by_wt.items(), key=lambda kv: tuple(float(x) for x in kv[0])):
        if wt in adj_weights:
            continue
        W = generated_subspace(NE, vecs)
        wset = Subspace.span(N.dim, W.vectors())
        # chains (a ^ b) (x) w with a, b in L_0 and w in W
        pos2 = {k: j for j, k in enumerate(keys2)}
        comp_cols = []
        pairs = sorted({(a, b) for (a, b, _) in keys2 if a in ss and b in ss})
        for a, b in pairs:
            for wv in wset.vectors():
                col = {}
                for i, x in wv.items():
                    if (a, b, i) in pos2:
                        col[pos2[(a, b, i)]] = x
                    else:
                        col = None
                        break
                if col:
                    comp_cols.append(col)
        if not comp_cols:
            continue
        S = Subspace.span(len(keys2), comp_cols)
        I = intersect(inv2, S)
        for v in I.vectors():
            r = apply_d(C, _as_chain(keys2, v))
            checked += 1
            out.append(DiagnosticLine(f"d1 I2^W[{_wt_str(wt)}] = 0", not r, f"residual {len(r)} terms"))
    if checked == 0:
        out.append(DiagnosticLine("d1 I2^W = 0", True, "no non-adjoint constituent carries an invariant: vacuous"))
    res, data = invariant_restricted_h1(E, N)
    out.append(DiagnosticLine("invariant complex count", res.quotient_dim >= 0,
                              f"{data.kernel_dim} - {data.image_dim} = {res.quotient_dim}"))
    return out


def _wt_str(wt) -> str:
    from .linalg import rat_str
    return ",".join(rat_str(x) for x in wt)


def _ratio(u: Dict, v: Dict) -> Optional[Fraction]:
    if not v:
        return None
    k = next(iter(v))
    r = Fraction(u.get(k, 0)) / Fraction(v[k])
    for key in set(u) | set(v):
        if Fraction(u.get(key, 0)) != r * Fraction(v.get(key, 0)):
            return None
    return r


# -----------------------------------------------------------------------------
# Shapiro cross-check


@dataclass
class ShapiroReport:
    direct: CohomologyResult
    restricted: CohomologyResult
    kernel: int
    image: int

    @property
    def ok(self) -> bool:
        return self.direct.quotient_dim == self.restricted.quotient_dim

    def line(self) -> str:
        return f"{self.direct.quotient_dim} = {self.restricted.quotient_dim} {'PASS' if self.ok else 'FAIL'}"


def doubling_module(A: SuperAlgebra, U: SuperModule) -> SuperModule:
    """V+(U) (x) V-(U*)."""
    from .kac import induce_minus, induce_plus
    from .modules import dual_module, tensor_modules
    return tensor_modules(induce_plus(A, U), induce_minus(A, dual_module(U)))


def shapiro_check(A: SuperAlgebra, U: SuperModule, *, blocks: str = "all",
                  doubled: Optional[SuperModule] = None) -> ShapiroReport:
    from .modules import dual_module, tensor_modules
    M = doubled if doubled is not None else doubling_module(A, U)
    direct = homology1(ChainComplex(A, M), blocks=blocks, representatives=False)
    N = tensor_modules(U, dual_module(U))
    restricted, data = invariant_restricted_h1(U.algebra, N)
    return ShapiroReport(direct, restricted, data.kernel_dim, data.image_dim)
