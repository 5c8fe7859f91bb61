"""Type I Lie superalgebras sl(m/n) and osp(2/2n) from supermatrix realizations.

Structure constants are never typed in by hand: each constructor builds the
realization matrices, brackets them (commutator or anticommutator according
to parity) and re-expands the result in the basis.

Basis order: even elements first (each simple factor of the semisimple part:
its Cartan elements then its root vectors), then ``Y``, then L_{-1}, then
L_{+1}.  ``Y`` is normalised so that ``[Y, x] = z(x) x`` with z = -1, 0, +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import (
    Echelon,
    SparseRationalMatrix,
    Vector,
    inverse,
    kernel_basis,
    rat,
    vec_axpy,
    vec_clean,
)

StructureConstants = Dict[Tuple[int, int], Dict[int, object]]


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class BasisElement:
    index: int
    parity: int
    z_grade: int
    label: str

    def __post_init__(self):
        if (self.parity == 0) != (self.z_grade == 0):
            raise AlgebraError(f"{self.label}: parity {self.parity} inconsistent with z-grade {self.z_grade}")


@dataclass(frozen=True)
class SimpleFactor:
    """A simple ideal of the even semisimple part L_0.

    ``block`` is the coordinate range of the realization on which the factor
    acts by its natural representation.
    """

    name: str
    indices: Tuple[int, ...]
    block: Tuple[int, int]


@dataclass(eq=False)
class SuperAlgebra:
    name: str
    family: str
    params: Tuple[int, ...]
    basis: Tuple[BasisElement, ...]
    structure: StructureConstants
    cartan_indices: Tuple[int, ...]
    y_index: Optional[int]
    simple_factors: Tuple[SimpleFactor, ...] = ()
    realization: Optional[Tuple[SparseRationalMatrix, ...]] = None
    block_sizes: Optional[Tuple[int, int]] = None
    raising: Tuple[int, ...] = ()
    lowering: Tuple[int, ...] = ()
    parent: Optional["SuperAlgebra"] = field(default=None, repr=False)
    embedding: Optional[Tuple[int, ...]] = None

    # -- basic data -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def parities(self) -> Tuple[int, ...]:
        return tuple(b.parity for b in self.basis)

    @cached_property
    def labels(self) -> Tuple[str, ...]:
        return tuple(b.label for b in self.basis)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    @cached_property
    def even_indices(self) -> Tuple[int, ...]:
        return tuple(b.index for b in self.basis if b.parity == 0)

    @cached_property
    def odd_indices(self) -> Tuple[int, ...]:
        return tuple(b.index for b in self.basis if b.parity == 1)

    @cached_property
    def minus_indices(self) -> Tuple[int, ...]:
        return tuple(b.index for b in self.basis if b.z_grade == -1)

    @cached_property
    def plus_indices(self) -> Tuple[int, ...]:
        return tuple(b.index for b in self.basis if b.z_grade == 1)

    @cached_property
    def semisimple_indices(self) -> Tuple[int, ...]:
        return tuple(i for f in self.simple_factors for i in f.indices)

    @cached_property
    def semisimple_cartan(self) -> Tuple[int, ...]:
        return tuple(i for i in self.cartan_indices if i != self.y_index)

    def is_even(self) -> bool:
        return not self.odd_indices

    def bracket_basis(self, a: int, b: int) -> Dict[int, object]:
        return self.structure.get((a, b), {})

    def bracket(self, x: Sequence | Dict[int, object], y: Sequence | Dict[int, object]) -> Vector:
        """Graded bracket of two coefficient vectors (lists or sparse dicts)."""
        xs = _as_sparse(x)
        ys = _as_sparse(y)
        out: Dict[int, object] = {}
        for a, xa in xs.items():
            for b, yb in ys.items():
                f = self.structure.get((a, b))
                if f:
                    vec_axpy(out, f, xa * yb)
        return vec_clean(out)

    # -- adjoint and Killing form -----------------------------------------------

    @cached_property
    def ad(self) -> Tuple[SparseRationalMatrix, ...]:
        """``ad[a][c, b] = f_ab^c``."""
        mats = []
        for a in range(self.dim):
            rows: Dict[int, Dict[int, object]] = {}
            for b in range(self.dim):
                for c, x in self.structure.get((a, b), {}).items():
                    rows.setdefault(c, {})[b] = x
            mats.append(SparseRationalMatrix(self.dim, self.dim, rows))
        return tuple(mats)

    @cached_property
    def killing(self) -> SparseRationalMatrix:
        return killing_form(self)

    @cached_property
    def even(self) -> "SuperAlgebra":
        return even_subalgebra(self)

    def __repr__(self) -> str:
        return f"SuperAlgebra({self.name}, dim={self.dim})"


def _as_sparse(x) -> Dict[int, object]:
    if isinstance(x, dict):
        return {k: v for k, v in x.items() if v}
    return {i: v for i, v in enumerate(x) if v}


# -----------------------------------------------------------------------------
# construction from a realization


def _unit(n: int, i: int, j: int, x=1) -> SparseRationalMatrix:
    return SparseRationalMatrix(n, n, {i: {j: x}}, _trusted=True)


def _flatten(m: SparseRationalMatrix) -> Dict[int, object]:
    n = m.n_cols
    return {r * n + c: x for r, row in m.rows.items() for c, x in row.items()}


def _super_bracket(a: SparseRationalMatrix, b: SparseRationalMatrix, pa: int, pb: int) -> SparseRationalMatrix:
    if pa and pb:
        return a @ b + b @ a
    return a @ b - b @ a


class _Coordinates:
    """Expansion of realization matrices in a fixed basis."""

    def __init__(self, mats: Sequence[SparseRationalMatrix]):
        flat = [_flatten(m) for m in mats]
        ech = Echelon(mats[0].n_rows * mats[0].n_cols)
        for v in flat:
            if not ech.add(v):
                raise AlgebraError("realization matrices are linearly dependent")
        self.positions = sorted(ech.pivots)
        sub = SparseRationalMatrix.from_columns(
            len(self.positions), [{i: v[p] for i, p in enumerate(self.positions) if p in v} for v in flat]
        )
        self.inv = inverse(sub)
        self.flat = flat

    def __call__(self, m: SparseRationalMatrix) -> Dict[int, object]:
        v = _flatten(m)
        rhs = {i: v[p] for i, p in enumerate(self.positions) if p in v}
        coords = self.inv.apply(rhs)
        recon: Dict[int, object] = {}
        for k, x in coords.items():
            vec_axpy(recon, self.flat[k], x)
        if vec_clean(recon) != vec_clean(v):
            raise AlgebraError("bracket left the span of the realization")
        return coords


def _from_realization(name, family, params, mats, labels, parities, *, cartan, y_index, factors,
                      block_sizes) -> SuperAlgebra:
    coords = _Coordinates(mats)
    dim = len(mats)
    structure: StructureConstants = {}
    for a in range(dim):
        for b in range(dim):
            br = _super_bracket(mats[a], mats[b], parities[a], parities[b])
            if br.is_zero():
                continue
            structure[(a, b)] = coords(br)
    # z-grades from ad Y
    zs = []
    for a in range(dim):
        f = structure.get((y_index, a), {})
        if not f:
            zs.append(0)
            continue
        if set(f) != {a}:
            raise AlgebraError(f"basis element {labels[a]} is not an ad-Y eigenvector")
        zs.append(int(f[a]))
    basis = tuple(BasisElement(i, parities[i], zs[i], labels[i]) for i in range(dim))

    def strictly(m: SparseRationalMatrix, upper: bool) -> bool:
        if m.is_zero():
            return False
        return all((c > r) if upper else (c < r) for r, row in m.rows.items() for c in row)

    raising = tuple(i for i in range(dim) if parities[i] == 0 and i not in cartan and strictly(mats[i], True))
    lowering = tuple(i for i in range(dim) if parities[i] == 0 and i not in cartan and strictly(mats[i], False))
    return SuperAlgebra(
        name=name,
        family=family,
        params=tuple(params),
        basis=basis,
        structure=structure,
        cartan_indices=tuple(cartan),
        y_index=y_index,
        simple_factors=tuple(factors),
        realization=tuple(mats),
        block_sizes=block_sizes,
        raising=raising,
        lowering=lowering,
    )


def _sl_factor(n_total: int, start: int, size: int, name: str, first_index: int):
    """Cartan (coroot) elements then root vectors of sl(size) on a diagonal block."""
    mats, labels = [], []
    for k in range(size - 1):
        i = start + k
        m = SparseRationalMatrix(n_total, n_total, {i: {i: 1}, i + 1: {i + 1: -1}}, _trusted=True)
        mats.append(m)
        labels.append(f"H{i + 1}")
    for i in range(start, start + size):
        for j in range(start, start + size):
            if i != j:
                mats.append(_unit(n_total, i, j))
                labels.append(_elabel(n_total, i, j))
    factor = SimpleFactor(name, tuple(range(first_index, first_index + len(mats))), (start, start + size))
    return mats, labels, factor, size - 1


def _elabel(n: int, i: int, j: int, prefix: str = "E") -> str:
    if n < 10:
        return f"{prefix}{i + 1}{j + 1}"
    return f"{prefix}{i + 1},{j + 1}"


def build_sl(m: int, n: int) -> SuperAlgebra:
    """sl(m/n), m != n, as supertraceless (m+n)x(m+n) supermatrices."""
    if m < 1 or n < 1:
        raise AlgebraError("sl(m/n) needs m >= 1 and n >= 1")
    if m == n:
        raise AlgebraError("m ≠ n required (sl(n/n) is not simple)")
    N = m + n
    mats: List[SparseRationalMatrix] = []
    labels: List[str] = []
    parities: List[int] = []
    cartan: List[int] = []
    factors = []
    for start, size, name in ((0, m, f"sl({m})"), (m, n, f"sl({n})")):
        if size < 2:
            continue
        fm, fl, fac, nh = _sl_factor(N, start, size, name, len(mats))
        cartan.extend(range(len(mats), len(mats) + nh))
        mats += fm
        labels += fl
        parities += [0] * len(fm)
        factors.append(fac)
    alpha = Fraction(n, n - m)
    beta = Fraction(m, n - m)
    y = SparseRationalMatrix.diag([alpha] * m + [beta] * n)
    y_index = len(mats)
    mats.append(y)
    labels.append("Y")
    parities.append(0)
    cartan.append(y_index)
    # L_{-1}: lower-left block, then L_{+1}: upper-right block
    for i in range(m, N):
        for j in range(m):
            mats.append(_unit(N, i, j))
            labels.append(_elabel(N, i, j))
            parities.append(1)
    for i in range(m):
        for j in range(m, N):
            mats.append(_unit(N, i, j))
            labels.append(_elabel(N, i, j))
            parities.append(1)
    return _from_realization(f"sl({m}/{n})", "sl", (m, n), mats, labels, parities, cartan=cartan,
                             y_index=y_index, factors=factors, block_sizes=(m, n))


def osp_form(n: int) -> SparseRationalMatrix:
    """Even supersymmetric form: antidiagonal identity on the 2-block, antidiagonal +-1 on the 2n-block."""
    N = 2 + 2 * n
    rows = {0: {1: 1}, 1: {0: 1}}
    for k in range(2 * n):
        rows[2 + k] = {2 + 2 * n - 1 - k: 1 if k < n else -1}
    return SparseRationalMatrix(N, N, rows)


def _osp_condition(n: int, parity: int, units: Sequence[Tuple[int, int]]) -> SparseRationalMatrix:
    """Linear conditions B(Xu, v) + (-1)^{|X||u|} B(u, Xv) = 0 on span of given matrix units."""
    N = 2 + 2 * n
    B = osp_form(n)
    coord_parity = [0, 0] + [1] * (2 * n)
    rows: Dict[int, Dict[int, object]] = {}
    for col, (p, q) in enumerate(units):
        # X = E_pq; B(X e_i, e_j) = [i == q] B_pj ; B(e_i, X e_j) = [j == q] B_ip
        for j in range(N):
            x = B[p, j]
            if x:
                r = q * N + j
                rows.setdefault(r, {})
                rows[r][col] = rows[r].get(col, 0) + x
        for i in range(N):
            x = B[i, p]
            if x:
                sign = -1 if (parity and coord_parity[i]) else 1
                r = i * N + q
                rows.setdefault(r, {})
                rows[r][col] = rows[r].get(col, 0) + sign * x
    return SparseRationalMatrix(N * N, len(units), rows)


def build_osp2_2n(n: int) -> SuperAlgebra:
    """osp(2/2n): supermatrices preserving :func:`osp_form`; even part so(2) + sp(2n)."""
    if n < 1:
        raise AlgebraError("osp(2/2n) needs n >= 1")
    N = 2 + 2 * n
    coord_parity = [0, 0] + [1] * (2 * n)

    def partner(k):  # local index in the 2n block
        return 2 * n - 1 - k

    # torus weights of coordinates on (t, h_1..h_n)
    wt = []
    wt.append((1,) + (0,) * n)
    wt.append((-1,) + (0,) * n)
    for k in range(2 * n):
        w = [0] * (n + 1)
        if k < n:
            w[1 + k] = 1
        else:
            w[1 + partner(k)] = -1
        wt.append(tuple(w))

    groups: Dict[Tuple[Tuple[int, ...], int], List[Tuple[int, int]]] = {}
    for i in range(N):
        for j in range(N):
            w = tuple(a - b for a, b in zip(wt[i], wt[j]))
            if not any(w):
                continue
            par = coord_parity[i] ^ coord_parity[j]
            groups.setdefault((w, par), []).append((i, j))

    def solve_group(units, par):
        cond = _osp_condition(n, par, units)
        out = []
        for v in kernel_basis(cond).vectors():
            lead = min(v)
            s = v[lead]
            out.append(SparseRationalMatrix(N, N, _rows_from(units, v, s)))
        return out

    def leading_unit(m: SparseRationalMatrix):
        return min((r, c) for r, row in m.rows.items() for c in row)

    even_roots, odd = [], []
    for (w, par), units in sorted(groups.items(), key=lambda kv: kv[1][0]):
        for m in solve_group(units, par):
            (odd if par else even_roots).append(m)

    mats: List[SparseRationalMatrix] = []
    labels: List[str] = []
    parities: List[int] = []
    cartan: List[int] = []
    # sp(2n) Cartan in the coroot basis, then root vectors
    def hdiag(k):
        i, ip = 2 + k, 2 + partner(k)
        return {i: {i: 1}, ip: {ip: -1}}

    for k in range(n):
        rows = hdiag(k)
        if k < n - 1:
            for r, row in hdiag(k + 1).items():
                rows.setdefault(r, {})
                for c, x in row.items():
                    rows[r][c] = rows[r].get(c, 0) - x
        cartan.append(len(mats))
        mats.append(SparseRationalMatrix(N, N, rows))
        labels.append(f"H{k + 1}")
        parities.append(0)
    even_roots.sort(key=leading_unit)
    for m in even_roots:
        i, j = leading_unit(m)
        mats.append(m)
        labels.append(_elabel(N, i, j, "S"))
        parities.append(0)
    factor = SimpleFactor(f"sp({2 * n})", tuple(range(len(mats))), (2, N))
    y_index = len(mats)
    mats.append(SparseRationalMatrix.diag([1, -1] + [0] * (2 * n)))
    labels.append("Y")
    parities.append(0)
    cartan.append(y_index)
    y = mats[y_index]

    def zgrade(m):
        br = y @ m - m @ y
        r, c = leading_unit(m)
        return br[r, c] / m[r, c]

    odd.sort(key=leading_unit)
    for z in (-1, 1):
        for m in odd:
            if zgrade(m) == z:
                i, j = leading_unit(m)
                mats.append(m)
                labels.append(_elabel(N, i, j, "Q"))
                parities.append(1)
    return _from_realization(f"osp(2/{2 * n})", "osp2", (n,), mats, labels, parities, cartan=cartan,
                             y_index=y_index, factors=[factor], block_sizes=(2, 2 * n))


def _rows_from(units, v, s):
    rows: Dict[int, Dict[int, object]] = {}
    for k, x in v.items():
        i, j = units[k]
        rows.setdefault(i, {})[j] = rat(Fraction(x) / s)
    return rows


def build(family: str, *params: int) -> SuperAlgebra:
    if family == "sl":
        if len(params) != 2:
            raise AlgebraError("sl needs two parameters m n")
        return build_sl(*params)
    if family in ("osp2", "osp"):
        if len(params) != 1:
            raise AlgebraError("osp2 needs one parameter n")
        return build_osp2_2n(*params)
    raise AlgebraError(f"unknown family {family!r}")


# -----------------------------------------------------------------------------
# checks


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def verify_super_jacobi(A: SuperAlgebra) -> List[str]:
    """Exhaustive axiom check; returns human-readable violations (empty if none)."""
    p = A.parities
    z = [b.z_grade for b in A.basis]
    out: List[str] = []
    lab = A.labels
    for a in range(A.dim):
        for b in range(A.dim):
            fab = A.bracket_basis(a, b)
            fba = A.bracket_basis(b, a)
            s = _sgn(p[a] * p[b])
            if vec_clean({k: fab.get(k, 0) + s * fba.get(k, 0) for k in set(fab) | set(fba)}):
                out.append(f"antisymmetry fails for ({lab[a]}, {lab[b]})")
            for c in fab:
                if p[c] != (p[a] + p[b]) % 2:
                    out.append(f"parity of [{lab[a]}, {lab[b]}] has component {lab[c]}")
                if A.y_index is not None and z[c] != z[a] + z[b]:
                    out.append(f"z-grading of [{lab[a]}, {lab[b]}] has component {lab[c]}")
    for a, b, c in product(range(A.dim), repeat=3):
        acc: Dict[int, object] = {}
        # [X,[Y,Z]] + (-1)^{|X|(|Y|+|Z|)} [Y,[Z,X]] + (-1)^{|Z|(|X|+|Y|)} [Z,[X,Y]]
        for x, y, zz, sign in ((a, b, c, 1), (b, c, a, _sgn(p[a] * (p[b] + p[c]))), (c, a, b, _sgn(p[c] * (p[a] + p[b])))):
            for k, coef in A.bracket_basis(y, zz).items():
                for l, coef2 in A.bracket_basis(x, k).items():
                    acc[l] = acc.get(l, 0) + sign * coef * coef2
        if vec_clean(acc):
            out.append(f"Jacobi fails for ({lab[a]}, {lab[b]}, {lab[c]})")
    return out


def verify_realization(A: SuperAlgebra) -> List[str]:
    """Realization matrices reproduce the structure constants; sl(m/n) elements are supertraceless."""
    out = []
    if A.realization is None:
        return out
    mats = A.realization
    p = A.parities
    for a in range(A.dim):
        for b in range(A.dim):
            br = _super_bracket(mats[a], mats[b], p[a], p[b])
            exp = SparseRationalMatrix.zeros(*br.shape)
            for c, x in A.bracket_basis(a, b).items():
                exp = exp + mats[c].scale(x)
            if br != exp:
                out.append(f"realization bracket mismatch for ({A.labels[a]}, {A.labels[b]})")
    if A.family == "sl" and A.block_sizes:
        m, _ = A.block_sizes
        for a, M in enumerate(mats):
            st = sum(M[i, i] for i in range(m)) - sum(M[i, i] for i in range(m, M.n_rows))
            if st:
                out.append(f"{A.labels[a]} has nonzero supertrace")
    return out


def triangular_decomposition(A: SuperAlgebra) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
    """Indices of (L_{-1}, L_0bar, L_{+1}); checks ad-Y eigenvalues against stored z-grades."""
    if A.y_index is None:
        raise AlgebraError("no Y generator")
    for b in A.basis:
        f = A.bracket_basis(A.y_index, b.index)
        expected = {b.index: b.z_grade} if b.z_grade else {}
        if vec_clean(f) != expected:
            raise AlgebraError(f"ad Y eigenvalue of {b.label} disagrees with z-grade {b.z_grade}")
    return A.minus_indices, A.even_indices, A.plus_indices


def killing_form(A: SuperAlgebra) -> SparseRationalMatrix:
    """``K(a, b) = str(ad_a ad_b)``."""
    ad = A.ad
    p = A.parities
    rows: Dict[int, Dict[int, object]] = {}
    for a in range(A.dim):
        for b in range(A.dim):
            prod = ad[a] @ ad[b]
            s = sum(_sgn(p[c]) * prod[c, c] for c in range(A.dim))
            if s:
                rows.setdefault(a, {})[b] = s
    return SparseRationalMatrix(A.dim, A.dim, rows)


def even_subalgebra(A: SuperAlgebra) -> SuperAlgebra:
    """Restriction to L_0bar.  Even indices come first, so indices are shared with ``A``."""
    ev = A.even_indices
    if ev != tuple(range(len(ev))):
        raise AlgebraError("even elements must come first in the basis")
    n = len(ev)
    structure = {}
    for (a, b), f in A.structure.items():
        if a < n and b < n:
            if any(c >= n for c in f):
                raise AlgebraError("even part is not closed")
            structure[(a, b)] = f
    real = tuple(A.realization[:n]) if A.realization is not None else None
    E = SuperAlgebra(
        name=f"{A.name}_0",
        family=A.family,
        params=A.params,
        basis=A.basis[:n],
        structure=structure,
        cartan_indices=A.cartan_indices,
        y_index=A.y_index,
        simple_factors=A.simple_factors,
        realization=real,
        block_sizes=A.block_sizes,
        raising=A.raising,
        lowering=A.lowering,
        parent=A,
        embedding=tuple(range(n)),
    )
    return E


def subalgebra(A: SuperAlgebra, indices: Sequence[int], name: Optional[str] = None) -> SuperAlgebra:
    """The span of the given basis elements as an algebra of its own (closure is checked).

    Indices are renumbered 0..k-1 in the given order; ``embedding`` records the
    original positions so modules of ``A`` can be restricted.
    """
    idx = tuple(indices)
    pos = {a: i for i, a in enumerate(idx)}
    structure: StructureConstants = {}
    for a in idx:
        for b in idx:
            f = A.structure.get((a, b))
            if not f:
                continue
            if any(c not in pos for c in f):
                raise AlgebraError("the given elements do not span a subalgebra")
            structure[(pos[a], pos[b])] = {pos[c]: x for c, x in f.items()}
    basis = tuple(BasisElement(pos[a], A.basis[a].parity, A.basis[a].z_grade, A.basis[a].label) for a in idx)
    factors = tuple(SimpleFactor(f.name, tuple(pos[i] for i in f.indices), f.block)
                    for f in A.simple_factors if all(i in pos for i in f.indices))
    real = tuple(A.realization[a] for a in idx) if A.realization is not None else None
    return SuperAlgebra(
        name=name or f"{A.name}|{len(idx)}",
        family=A.family,
        params=A.params,
        basis=basis,
        structure=structure,
        cartan_indices=tuple(pos[h] for h in A.cartan_indices if h in pos),
        y_index=pos.get(A.y_index) if A.y_index is not None else None,
        simple_factors=factors,
        realization=real,
        block_sizes=A.block_sizes,
        raising=tuple(pos[i] for i in A.raising if i in pos),
        lowering=tuple(pos[i] for i in A.lowering if i in pos),
        parent=A,
        embedding=idx,
    )


def with_structure_constants(A: SuperAlgebra, structure: StructureConstants) -> SuperAlgebra:
    """Copy of ``A`` with replaced structure constants (used for perturbation tests)."""
    return SuperAlgebra(A.name + "'", A.family, A.params, A.basis, structure, A.cartan_indices, A.y_index,
                        A.simple_factors, None, A.block_sizes, A.raising, A.lowering)


def same_algebra(A: SuperAlgebra, B: SuperAlgebra) -> bool:
    if A is B:
        return True
    ra = A.parent or A
    rb = B.parent or B
    return A.name == B.name and A.dim == B.dim and ra.structure == rb.structure


# -----------------------------------------------------------------------------
# invariant metric on simple factors


def factor_metric(A: SuperAlgebra, factor: SimpleFactor) -> SparseRationalMatrix:
    """``g(X, Y) = -2 tr(X Y)`` on the factor's natural block.

    In this normalisation su(2) has structure constants epsilon_ijk in an
    orthonormal basis (the compact-form convention with tr(T_a T_b) = delta/2).
    """
    if A.realization is None:
        raise AlgebraError("metric needs the realization")
    lo, hi = factor.block
    idx = factor.indices
    rows: Dict[int, Dict[int, object]] = {}
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            prod = A.realization[a] @ A.realization[b]
            t = sum(prod[k, k] for k in range(lo, hi))
            if t:
                rows.setdefault(i, {})[j] = -2 * t
    return SparseRationalMatrix(len(idx), len(idx), rows)


def killing_scale(A: SuperAlgebra, factor: SimpleFactor) -> Fraction:
    """Ratio (Killing form of the factor) / :func:`factor_metric`."""
    idx = factor.indices
    g = factor_metric(A, factor)
    pos = {a: i for i, a in enumerate(idx)}
    a0 = idx[0]
    # Killing form of the factor itself, restricted to its own adjoint
    rows: Dict[int, Dict[int, object]] = {}
    for b in idx:
        for c, x in A.bracket_basis(a0, b).items():
            rows.setdefault(pos[c], {})[pos[b]] = x
    ad0 = SparseRationalMatrix(len(idx), len(idx), rows)
    k00 = (ad0 @ ad0).trace()
    return Fraction(k00) / Fraction(g[0, 0])


def _rank_one_triple(A: SuperAlgebra) -> Tuple[int, int, int, Fraction]:
    if len(A.semisimple_cartan) != 1 or len(A.raising) != 1:
        raise AlgebraError(f"{A.name}: semisimple part is not sl(2)")
    h, e, f = A.semisimple_cartan[0], A.raising[0], A.lowering[0]
    ef = A.bracket_basis(e, f)
    if set(ef) != {h} or A.bracket_basis(h, e) != {e: 2}:
        raise AlgebraError(f"{A.name}: (h, e, f) is not a standard sl(2) triple")
    return h, e, f, Fraction(ef[h])


def explicit_isomorphism(A: SuperAlgebra, B: SuperAlgebra) -> SparseRationalMatrix:
    """A graded isomorphism phi: A -> B as a (dim B x dim A) matrix.

    Only the rank-one case is handled (even part sl(2) + CY, as for
    sl(2/1) and osp(2/2)).  The even part is matched through the sl(2)
    triples with Y -> Y; each odd half is then the unique (up to scale)
    L_0bar-equivariant map, and the relative scale of the two halves is
    fixed by one anticommutator.  The result is checked on every pair of
    basis elements before it is returned.
    """
    if A.dim != B.dim or sorted(A.parities) != sorted(B.parities):
        raise AlgebraError("dimensions or parities differ")
    if A.y_index is None or B.y_index is None:
        raise AlgebraError("both algebras need a grading element Y")
    if len(A.even_indices) != 4 or len(B.even_indices) != 4:
        raise AlgebraError("explicit_isomorphism handles even part sl(2) + CY only")
    hA, eA, fA, kA = _rank_one_triple(A)
    hB, eB, fB, kB = _rank_one_triple(B)
    phi: Dict[int, Dict[int, object]] = {
        hA: {hB: 1}, eA: {eB: 1}, fA: {fB: kA / kB}, A.y_index: {B.y_index: 1}}

    def halves(idxA, idxB):
        # X with X ad_A(x) = ad_B(phi x) X on the half, for all even x
        n, m = len(idxA), len(idxB)
        if n != m:
            raise AlgebraError("odd halves have different dimensions")
        pa = {a: i for i, a in enumerate(idxA)}
        pb = {b: i for i, b in enumerate(idxB)}
        rows: List[Dict[int, object]] = []
        for x in A.even_indices:
            eq: Dict[Tuple[int, int], Dict[int, object]] = {}
            for j, a in enumerate(idxA):
                # (X ad_A x)_{ij} = sum_k X_{ik} [x, a]_k
                for c, v in A.bracket_basis(x, a).items():
                    if c not in pa:
                        raise AlgebraError("odd half of A is not L_0bar-stable")
                    for i in range(m):
                        d = eq.setdefault((i, j), {})
                        d[i * n + pa[c]] = d.get(i * n + pa[c], 0) + v
                # (ad_B(phi x) X)_{ij} = sum_k [phi x, b_k]_i X_{kj}
            for y, cy in phi[x].items():
                for k, b in enumerate(idxB):
                    for c, v in B.bracket_basis(y, b).items():
                        if c not in pb:
                            raise AlgebraError("odd half of B is not L_0bar-stable")
                        for j in range(n):
                            d = eq.setdefault((pb[c], j), {})
                            d[k * n + j] = d.get(k * n + j, 0) - cy * v
            rows.extend(r for r in eq.values() if any(r.values()))
        ker = kernel_basis(SparseRationalMatrix.from_rows(m * n, rows)).vectors()
        if len(ker) != 1:
            raise AlgebraError(f"equivariant map between odd halves not unique ({len(ker)})")
        X = ker[0]
        return {a: vec_clean({idxB[i]: X.get(i * n + j, 0) for i in range(m)}) for j, a in enumerate(idxA)}

    plus = halves(A.plus_indices, B.plus_indices)
    minus = halves(A.minus_indices, B.minus_indices)
    # fix beta in  phi|_{L-1} = beta * minus  from one nonzero anticommutator
    beta = None
    for s in A.minus_indices:
        for t in A.plus_indices:
            lhs = _image(phi, A.bracket_basis(s, t))
            rhs = B.bracket(minus[s], plus[t])
            if lhs and rhs:
                k = next(iter(rhs))
                beta = Fraction(lhs.get(k, 0)) / Fraction(rhs[k])
                break
        if beta is not None:
            break
    if not beta:
        raise AlgebraError("could not fix the relative scale of the odd halves")
    phi.update(plus)
    phi.update({s: {c: beta * v for c, v in minus[s].items()} for s in minus})
    for a in range(A.dim):
        for b in range(A.dim):
            if vec_clean(_image(phi, A.bracket_basis(a, b))) != vec_clean(B.bracket(phi[a], phi[b])):
                raise AlgebraError(f"candidate map fails on [{A.labels[a]}, {A.labels[b]}]")
    return SparseRationalMatrix.from_columns(B.dim, [phi[a] for a in range(A.dim)])


def _image(phi: Dict[int, Dict[int, object]], v: Mapping[int, object]) -> Vector:
    out: Dict[int, object] = {}
    for a, x in v.items():
        vec_axpy(out, phi[a], x)
    return vec_clean(out)
