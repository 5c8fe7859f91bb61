"""Finite-dimensional graded modules over a :class:`SuperAlgebra`.

A module is a tuple of exact sparse matrices, one per basis element of the
algebra, together with a parity for every basis vector.  Every constructor in
the package (induction, duals, tensor products, Hom spaces, quotients)
returns this type, and :func:`verify_representation` is the single check that
all of them are honest representations.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import (
    CoordinateMap,
    Echelon,
    SparseRationalMatrix,
    Subspace,
    Vector,
    inverse,
    kernel_basis,
    rank,
    rat,
    vec_axpy,
    vec_clean,
)
from .superalgebra import SuperAlgebra, same_algebra

Weight = Tuple[object, ...]


class ModuleError(ValueError):
    pass


class RepresentationError(ModuleError):
    """The matrices fail the graded representation property."""


def sgn(k: int) -> int:
    return -1 if k & 1 else 1


@dataclass(eq=False)
class SuperModule:
    algebra: SuperAlgebra
    action: Tuple[SparseRationalMatrix, ...]
    parity: Tuple[int, ...]
    provenance: str = "hand-supplied"
    meta: Dict[str, object] = field(default_factory=dict)
    basis_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        n = len(self.parity)
        if len(self.action) != self.algebra.dim:
            raise ModuleError(f"need {self.algebra.dim} matrices, got {len(self.action)}")
        for a, m in enumerate(self.action):
            if m.shape != (n, n):
                raise ModuleError(f"matrix for {self.algebra.labels[a]} has shape {m.shape}, expected {(n, n)}")
        if any(p not in (0, 1) for p in self.parity):
            raise ModuleError("parities must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.parity)

    def rho(self, x) -> SparseRationalMatrix:
        """Matrix of an algebra element given as a label, an index or a coefficient dict."""
        if isinstance(x, str):
            return self.action[self.algebra.index(x)]
        if isinstance(x, int):
            return self.action[x]
        out = SparseRationalMatrix.zeros(self.dim, self.dim)
        for a, c in x.items():
            out = out + self.action[a].scale(c)
        return out

    @cached_property
    def cartan_is_diagonal(self) -> bool:
        for h in self.algebra.cartan_indices:
            for i, j, _ in self.action[h].entries():
                if i != j:
                    return False
        return True

    @cached_property
    def weights(self) -> Optional[Tuple[Weight, ...]]:
        """Cartan eigenvalues of each basis vector, or None if the Cartan action is not diagonal."""
        if not self.cartan_is_diagonal:
            return None
        hs = self.algebra.cartan_indices
        return tuple(tuple(rat(self.action[h][i, i]) for h in hs) for i in range(self.dim))

    def y_values(self) -> Optional[List[object]]:
        w = self.weights
        if w is None or self.algebra.y_index is None:
            return None
        k = self.algebra.cartan_indices.index(self.algebra.y_index)
        return [x[k] for x in w]

    def graded_key(self, i: int):
        w = self.weights
        return (self.parity[i], w[i] if w is not None else None)

    def __repr__(self) -> str:
        return f"SuperModule({self.algebra.name}, dim={self.dim}, {self.provenance})"


# -----------------------------------------------------------------------------
# verification


def verify_representation(M: SuperModule, *, pairs: Optional[Iterable[Tuple[int, int]]] = None) -> List[str]:
    """List of violations of parity preservation and of the graded bracket relation.

    Checks rho(a) rho(b) - (-1)^{|a||b|} rho(b) rho(a) = sum_c f_ab^c rho(c)
    for every a <= b (the relation for b < a follows by super-antisymmetry).
    """
    A = M.algebra
    p = A.parities
    out: List[str] = []
    for a, m in enumerate(M.action):
        for i, j, _ in m.entries():
            if M.parity[i] != (M.parity[j] + p[a]) % 2:
                out.append(f"{A.labels[a]} maps basis vector {j} (parity {M.parity[j]}) "
                           f"to {i} (parity {M.parity[i]})")
                break
    if pairs is None:
        pairs = ((a, b) for a in range(A.dim) for b in range(a, A.dim))
    for a, b in pairs:
        ma, mb = M.action[a], M.action[b]
        lhs = ma @ mb
        rhs_swap = mb @ ma
        lhs = lhs - rhs_swap if sgn(p[a] * p[b]) == 1 else lhs + rhs_swap
        for c, f in A.bracket_basis(a, b).items():
            lhs = lhs - M.action[c].scale(f)
        if not lhs.is_zero():
            out.append(f"[{A.labels[a]}, {A.labels[b]}] relation fails ({lhs.nnz()} nonzero entries)")
    return out


def check_representation(M: SuperModule) -> SuperModule:
    bad = verify_representation(M)
    if bad:
        raise RepresentationError("; ".join(bad[:5]))
    return M


# -----------------------------------------------------------------------------
# elementary constructions


def trivial_module(A: SuperAlgebra) -> SuperModule:
    z = SparseRationalMatrix.zeros(1, 1)
    return SuperModule(A, tuple(z for _ in range(A.dim)), (0,), "trivial")


def adjoint_module(A: SuperAlgebra) -> SuperModule:
    return SuperModule(A, A.ad, A.parities, "adjoint", basis_labels=A.labels)


def natural_module(A: SuperAlgebra) -> SuperModule:
    """The defining supermatrix representation (even block first)."""
    if A.realization is None or A.block_sizes is None:
        raise ModuleError("algebra has no realization")
    m, n = A.block_sizes
    return SuperModule(A, tuple(A.realization), (0,) * m + (1,) * n, "natural")


def restrict(M: SuperModule, E: SuperAlgebra) -> SuperModule:
    """Restriction to a subalgebra whose indices are shared with ``M.algebra`` (the even part)."""
    if E.parent is not M.algebra and not same_algebra(E.parent or E, M.algebra):
        raise ModuleError("restriction needs the even subalgebra of the module's algebra")
    return SuperModule(E, tuple(M.action[: E.dim]), M.parity, f"res({M.provenance})", dict(M.meta))


def dual_module(M: SuperModule, *, check: bool = True) -> SuperModule:
    """Graded dual: (x f)(v) = -(-1)^{|x||f|} f(x v), in the dual basis."""
    A = M.algebra
    p = A.parities
    mats = []
    for a, m in enumerate(M.action):
        rows: Dict[int, Dict[int, object]] = {}
        for i, j, x in m.entries():
            # rho*(a)[j, i] = -(-1)^{|a||i|} rho(a)[i, j]
            rows.setdefault(j, {})[i] = -sgn(p[a] * M.parity[i]) * x
        mats.append(SparseRationalMatrix(M.dim, M.dim, rows, _trusted=True))
    D = SuperModule(A, tuple(mats), M.parity, f"dual({M.provenance})")
    if "y" in M.meta:
        D.meta["y"] = -M.meta["y"]
    if check:
        check_representation(D)
    return D


def tensor_modules(V: SuperModule, W: SuperModule, *, check: bool = True) -> SuperModule:
    """x (v (x) w) = xv (x) w + (-1)^{|x||v|} v (x) xw.  Basis index i*dim(W) + k."""
    if not same_algebra(V.algebra, W.algebra):
        raise ModuleError("tensor factors live over different algebras")
    A = V.algebra
    p = A.parities
    idW = SparseRationalMatrix.identity(W.dim)
    sign_v = SparseRationalMatrix.diag([sgn(q) for q in V.parity])
    idV = SparseRationalMatrix.identity(V.dim)
    mats = []
    for a in range(A.dim):
        left = V.action[a].kron(idW)
        right = (sign_v if p[a] else idV).kron(W.action[a])
        mats.append(left + right)
    par = tuple((pv + pw) % 2 for pv in V.parity for pw in W.parity)
    T = SuperModule(A, tuple(mats), par, f"tensor({V.provenance};{W.provenance})")
    if check:
        check_representation(T)
    return T


def direct_sum(V: SuperModule, W: SuperModule) -> SuperModule:
    from .linalg import block_diag
    mats = tuple(block_diag(a, b) for a, b in zip(V.action, W.action))
    return SuperModule(V.algebra, mats, V.parity + W.parity, f"sum({V.provenance};{W.provenance})")


def parity_shift(M: SuperModule) -> SuperModule:
    """Pi M: same matrices up to the sign needed for odd elements, flipped parities."""
    A = M.algebra
    mats = []
    for a, m in enumerate(M.action):
        mats.append(m.scale(-1) if A.parities[a] else m)
    # with the sign flip, the relations still hold because odd brackets involve two odd factors
    return SuperModule(A, tuple(mats), tuple(1 - q for q in M.parity), f"Pi({M.provenance})")


def with_y(M: SuperModule, y) -> SuperModule:
    """Replace the action of Y by the scalar ``y`` (for modules of the even subalgebra)."""
    A = M.algebra
    if A.y_index is None:
        raise ModuleError("algebra has no Y")
    mats = list(M.action)
    mats[A.y_index] = SparseRationalMatrix.diag([rat(y)] * M.dim)
    meta = dict(M.meta)
    meta["y"] = rat(y)
    return SuperModule(A, tuple(mats), M.parity, M.provenance, meta)


# -----------------------------------------------------------------------------
# subspaces, submodules, quotients


def generated_subspace(M: SuperModule, vectors: Sequence[Vector],
                       generators: Optional[Sequence[int]] = None) -> Subspace:
    """Smallest subspace containing ``vectors`` and stable under ``generators`` (default all)."""
    gens = range(M.algebra.dim) if generators is None else generators
    ech = Echelon(M.dim)
    basis: List[Vector] = []
    queue: List[Vector] = []
    for v in vectors:
        v = vec_clean(v)
        if v and ech.add(v):
            basis.append(v)
            queue.append(v)
    while queue:
        v = queue.pop()
        for a in gens:
            w = M.action[a].apply(v)
            if w and ech.add(w):
                basis.append(w)
                queue.append(w)
    return Subspace(M.dim, SparseRationalMatrix.from_columns(M.dim, basis), check=False)


def graded_basis(M: SuperModule, vectors: Sequence[Vector]) -> List[Tuple[Vector, Tuple]]:
    """Split a graded subspace's spanning set into homogeneous components.

    Each vector is cut into pieces by (parity, weight) of the module basis.
    For a graded (e.g. invariant) subspace the pieces lie in the subspace and
    their span is the same.  Returns (vector, key) pairs with independent
    vectors in each key class.
    """
    buckets: Dict[Tuple, List[Vector]] = {}
    for v in vectors:
        parts: Dict[Tuple, Vector] = {}
        for i, x in v.items():
            parts.setdefault(M.graded_key(i), {})[i] = x
        for k, part in parts.items():
            buckets.setdefault(k, []).append(part)
    out: List[Tuple[Vector, Tuple]] = []
    for k in sorted(buckets, key=_key_order):
        ech = Echelon(M.dim)
        for v in buckets[k]:
            if ech.add(v):
                out.append((v, k))
    clean = [vec_clean(v) for v in vectors if v]
    expected = rank(SparseRationalMatrix.from_columns(M.dim, clean)) if clean else 0
    if len(out) != expected:
        raise ModuleError("subspace is not graded; cannot choose a homogeneous basis")
    return out


def _key_order(k):
    parity, w = k
    return (parity, tuple(float(x) for x in w) if w is not None else ())


def submodule(M: SuperModule, space: Subspace | Sequence[Vector], provenance: str = "submodule") -> SuperModule:
    """The invariant subspace as a module, in a homogeneous basis."""
    vecs = space.vectors() if isinstance(space, Subspace) else list(space)
    hb = graded_basis(M, vecs)
    cols = [v for v, _ in hb]
    coords = CoordinateMap(M.dim, cols)
    k = len(cols)
    mats = []
    for a, m in enumerate(M.action):
        out_cols = []
        for v in cols:
            c = coords(m.apply(v))
            if c is None:
                raise ModuleError(f"subspace is not stable under {M.algebra.labels[a]}")
            out_cols.append(c)
        mats.append(SparseRationalMatrix.from_columns(k, out_cols))
    par = tuple(key[0] for _, key in hb)
    S = SuperModule(M.algebra, tuple(mats), par, provenance, dict(M.meta))
    S.meta["embedding"] = cols
    return S


def quotient_module(M: SuperModule, space: Subspace | Sequence[Vector], provenance: str = "quotient") -> SuperModule:
    """M / N with basis the images of unit vectors completing a basis of N."""
    vecs = space.vectors() if isinstance(space, Subspace) else list(space)
    ech = Echelon(M.dim)
    for v in vecs:
        ech.add(v)
    if ech.rank != len(vecs):
        raise ModuleError("spanning vectors of the submodule are dependent")
    comp = []
    for i in range(M.dim):
        if ech.add({i: 1}):
            comp.append(i)
    full = [vec_clean(v) for v in vecs] + [{i: 1} for i in comp]
    F = SparseRationalMatrix.from_columns(M.dim, full)
    Finv = inverse(F)
    nsub = len(vecs)
    k = len(comp)
    mats = []
    for a, m in enumerate(M.action):
        cols = []
        for i in comp:
            w = m.column(i)
            c = Finv.apply(w)
            cols.append({j - nsub: x for j, x in c.items() if j >= nsub})
        mats.append(SparseRationalMatrix.from_columns(k, cols))
    Q = SuperModule(M.algebra, tuple(mats), tuple(M.parity[i] for i in comp), provenance, dict(M.meta))
    Q.meta["complement"] = comp
    if M.basis_labels:
        Q.basis_labels = tuple(M.basis_labels[i] for i in comp)
    return Q


def is_invariant(M: SuperModule, space: Subspace) -> bool:
    ech = Echelon(M.dim)
    for v in space.vectors():
        ech.add(v)
    for m in M.action:
        for v in space.vectors():
            if not ech.contains(m.apply(v)):
                return False
    return True


def invariants(M: SuperModule) -> Subspace:
    """Joint kernel of all action matrices."""
    from .linalg import vstack_all
    return kernel_basis(vstack_all(list(M.action)))


def largest_invariant_subspace(M: SuperModule, start: Subspace) -> Subspace:
    """Largest submodule contained in ``start`` (iterated stabiliser)."""
    B = start
    while True:
        if B.dim == 0:
            return B
        # annihilator of span(B): rows a with a . B = 0
        ann = kernel_basis(B.basis.transpose()).vectors()
        if not ann:
            return B
        annm = SparseRationalMatrix.from_rows(M.dim, ann)
        blocks = []
        for m in M.action:
            blocks.append(annm @ m @ B.basis)
        from .linalg import vstack_all
        K = kernel_basis(vstack_all(blocks))
        if K.dim == B.dim:
            return B
        new_cols = [B.basis.apply(c) for c in K.vectors()]
        B = Subspace(M.dim, SparseRationalMatrix.from_columns(M.dim, new_cols), check=False)


# -----------------------------------------------------------------------------
# weights


def weight_multiset(M: SuperModule) -> Counter:
    w = M.weights
    if w is None:
        raise ModuleError("Cartan action is not diagonal in this basis")
    return Counter(w)


def weight_spaces(M: SuperModule) -> Dict[Weight, List[int]]:
    w = M.weights
    if w is None:
        raise ModuleError("Cartan action is not diagonal in this basis")
    out: Dict[Weight, List[int]] = {}
    for i, x in enumerate(w):
        out.setdefault(x, []).append(i)
    return out


def singular_vectors(M: SuperModule, raising: Sequence[int]) -> List[Tuple[Vector, Weight, int]]:
    """Homogeneous vectors killed by all ``raising`` elements: (vector, weight, parity)."""
    out = []
    spaces: Dict[Tuple, List[int]] = {}
    for i in range(M.dim):
        spaces.setdefault(M.graded_key(i), []).append(i)
    for (par, wt), idx in sorted(spaces.items(), key=lambda kv: _key_order(kv[0])):
        if not raising:
            for i in idx:
                out.append(({i: 1}, wt, par))
            continue
        blocks = [M.action[a].submatrix(range(M.dim), idx) for a in raising]
        from .linalg import vstack_all
        K = kernel_basis(vstack_all(blocks))
        for c in K.vectors():
            out.append(({idx[j]: x for j, x in c.items()}, wt, par))
    return out


# -----------------------------------------------------------------------------
# intertwiners


def intertwiner_space(M1: SuperModule, M2: SuperModule, *, parity: int = 0,
                      generators: Optional[Sequence[int]] = None) -> List[SparseRationalMatrix]:
    """Basis of the maps T: M1 -> M2 of the given parity with T rho1(x) = rho2(x) T.

    For odd T the relation is T rho1(x) = (-1)^{|x|} rho2(x) T.  Unknowns are
    restricted to weight-preserving, parity-compatible entries when both
    modules have diagonal Cartan action; the Cartan equations then hold
    automatically and only the root vectors are imposed.
    """
    if not same_algebra(M1.algebra, M2.algebra):
        raise ModuleError("modules live over different algebras")
    A = M1.algebra
    w1, w2 = M1.weights, M2.weights
    use_w = w1 is not None and w2 is not None
    unknowns: Dict[Tuple[int, int], int] = {}
    by_w2: Dict[Tuple, List[int]] = {}
    for i in range(M2.dim):
        by_w2.setdefault((M2.parity[i], w2[i] if use_w else None), []).append(i)
    for j in range(M1.dim):
        key = ((M1.parity[j] + parity) % 2, w1[j] if use_w else None)
        for i in by_w2.get(key, []):
            unknowns[(i, j)] = len(unknowns)
    if generators is None:
        cart = set(A.cartan_indices) if use_w else set()
        generators = [a for a in range(A.dim) if a not in cart]
    rows: List[Dict[int, object]] = []
    # row index for equation (a, i, j): (T rho1(a) - s rho2(a) T)_{ij}
    t_by_row: Dict[int, List[Tuple[int, int]]] = {}
    t_by_col: Dict[int, List[Tuple[int, int]]] = {}
    for (i, j), u in unknowns.items():
        t_by_row.setdefault(i, []).append((j, u))
        t_by_col.setdefault(j, []).append((i, u))
    for a in generators:
        s = sgn(parity * A.parities[a])
        eqs: Dict[Tuple[int, int], Dict[int, object]] = {}
        r1 = M1.action[a]
        r2 = M2.action[a]
        # (T r1)_{ij} = sum_k T_{ik} r1_{kj}
        for k, row in r1.rows.items():
            for i, u in t_by_col.get(k, []):
                for j, x in row.items():
                    e = eqs.setdefault((i, j), {})
                    e[u] = e.get(u, 0) + x
        # (r2 T)_{ij} = sum_k r2_{ik} T_{kj}
        for i, row in r2.rows.items():
            for k, x in row.items():
                for j, u in t_by_row.get(k, []):
                    e = eqs.setdefault((i, j), {})
                    e[u] = e.get(u, 0) - s * x
        for e in eqs.values():
            e = vec_clean(e)
            if e:
                rows.append(e)
    n_unk = len(unknowns)
    if n_unk == 0:
        return []
    K = kernel_basis(SparseRationalMatrix.from_rows(n_unk, rows)) if rows else Subspace.full(n_unk)
    inv = {u: ij for ij, u in unknowns.items()}
    out = []
    for c in K.vectors():
        out.append(SparseRationalMatrix.from_entries(M2.dim, M1.dim, ((*inv[u], x) for u, x in c.items())))
    return out


def find_equivariant_iso(M1: SuperModule, M2: SuperModule, *, seed: int = 0,
                         attempts: int = 20) -> Optional[SparseRationalMatrix]:
    """An even invertible intertwiner M1 -> M2, or None if there is none.

    When the intertwiner space is nonzero but no random combination tried is
    invertible, the answer is None as well (isomorphic modules admit an
    invertible element in a Zariski-dense set, so this is very unlikely).
    """
    if M1.dim != M2.dim:
        return None
    if M1.weights is not None and M2.weights is not None and Counter(M1.weights) != Counter(M2.weights):
        return None
    basis = intertwiner_space(M1, M2)
    if not basis:
        return None
    rng = random.Random(seed)
    for t in range(attempts):
        if t == 0 and len(basis) == 1:
            T = basis[0]
        else:
            T = SparseRationalMatrix.zeros(M2.dim, M1.dim)
            for B in basis:
                T = T + B.scale(rng.randint(1, 10 + 10 * t))
        if rank(T) == M1.dim:
            return T
        if len(basis) == 1:
            return None
    return None


def is_intertwiner(T: SparseRationalMatrix, M1: SuperModule, M2: SuperModule) -> bool:
    for a in range(M1.algebra.dim):
        if not (T @ M1.action[a] - M2.action[a] @ T).is_zero():
            return False
    return True
