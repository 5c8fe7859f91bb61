"""Exact sparse linear algebra over the rationals.

Matrices are stored row-wise as ``{row: {col: value}}`` with values that are
``int`` or ``Fraction`` (integral fractions are normalised to ``int`` so the
common small-integer case stays cheap).  Elimination is fraction-free: every
row is scaled to a primitive integer vector before reduction and kept
primitive by dividing out the content after each step.

Nothing in here takes a tolerance.  Results are exact and deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Scalar = "int | Fraction"
Vector = Dict[int, object]


def rat(x) -> object:
    """Normalise a scalar: Fractions with denominator 1 become ints.

    Strings of the form ``"p/q"`` are accepted too.
    """
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    elif not isinstance(x, Fraction):
        x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return x


def rat_str(x) -> str:
    x = rat(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


class DimensionError(ValueError):
    pass


class NotASubspaceError(ValueError):
    """Raised by :func:`quotient_dim` when the inner space is not contained in the outer one."""


# ----------------------------------------------------------------------------
# sparse vectors


def vec_add(u: Mapping[int, object], v: Mapping[int, object], scale=1) -> Vector:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + scale * x
        if y:
            out[k] = rat(y)
        else:
            out.pop(k, None)
    return out


def vec_axpy(acc: Vector, v: Mapping[int, object], scale=1) -> None:
    """In-place ``acc += scale * v``."""
    for k, x in v.items():
        y = acc.get(k, 0) + scale * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def vec_clean(v: Mapping[int, object]) -> Vector:
    return {k: rat(x) for k, x in v.items() if x}


def vec_scale(v: Mapping[int, object], s) -> Vector:
    if not s:
        return {}
    return {k: rat(x * s) for k, x in v.items()}


def _primitive(row: Mapping[int, object]) -> Dict[int, int]:
    """Scale a rational row to a primitive integer row with positive leading entry."""
    den = 1
    for x in row.values():
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    if den != 1:
        irow = {k: int(x * den) for k, x in row.items()}
    else:
        irow = {k: int(x) for k, x in row.items()}
    g = gcd(*irow.values()) if irow else 1
    if g > 1:
        irow = {k: x // g for k, x in irow.items()}
    return irow


# ----------------------------------------------------------------------------
# matrices


class SparseRationalMatrix:
    """Immutable sparse matrix with exact rational entries.

    Do not mutate ``rows`` after construction; all operations return new
    matrices.
    """

    __slots__ = ("n_rows", "n_cols", "rows")

    def __init__(self, n_rows: int, n_cols: int, rows: Optional[Mapping[int, Mapping[int, object]]] = None,
                 *, _trusted: bool = False):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        if rows is None:
            self.rows: Dict[int, Dict[int, object]] = {}
        elif _trusted:
            self.rows = rows  # type: ignore[assignment]
        else:
            clean: Dict[int, Dict[int, object]] = {}
            for r, row in rows.items():
                if not 0 <= r < self.n_rows:
                    raise DimensionError(f"row index {r} out of range")
                crow = {}
                for c, x in row.items():
                    if not 0 <= c < self.n_cols:
                        raise DimensionError(f"column index {c} out of range")
                    if x:
                        crow[c] = rat(x)
                if crow:
                    clean[r] = crow
            self.rows = clean

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "SparseRationalMatrix":
        return cls(n_rows, n_cols, {}, _trusted=True)

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)}, _trusted=True)

    @classmethod
    def diag(cls, values: Sequence) -> "SparseRationalMatrix":
        n = len(values)
        return cls(n, n, {i: {i: rat(v)} for i, v in enumerate(values) if v}, _trusted=True)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseRationalMatrix":
        n_rows = len(data)
        n_cols = len(data[0]) if n_rows else 0
        rows = {}
        for i, row in enumerate(data):
            if len(row) != n_cols:
                raise DimensionError("ragged dense matrix")
            r = {j: rat(x) for j, x in enumerate(row) if rat(x)}
            if r:
                rows[i] = r
        return cls(n_rows, n_cols, rows, _trusted=True)

    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int, entries: Iterable[Tuple[int, int, object]]) -> "SparseRationalMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for r, c, x in entries:
            if c in rows.get(r, {}):
                raise ValueError(f"duplicate entry ({r}, {c})")
            rows.setdefault(r, {})[c] = x
        return cls(n_rows, n_cols, rows)

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Mapping[int, object]]) -> "SparseRationalMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    rows.setdefault(i, {})[j] = rat(x)
        return cls(n_rows, len(columns), rows, _trusted=True)

    @classmethod
    def from_rows(cls, n_cols: int, rows: Sequence[Mapping[int, object]]) -> "SparseRationalMatrix":
        return cls(len(rows), n_cols, {i: dict(r) for i, r in enumerate(rows) if r})

    # access ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, key: Tuple[int, int]):
        r, c = key
        return self.rows.get(r, {}).get(c, 0)

    def entries(self) -> Iterator[Tuple[int, int, object]]:
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def to_dense(self) -> List[List[object]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for r, row in self.rows.items():
            for c, x in row.items():
                out[r][c] = x
        return out

    def row(self, i: int) -> Vector:
        return dict(self.rows.get(i, {}))

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [dict() for _ in range(self.n_cols)]
        for r, row in self.rows.items():
            for c, x in row.items():
                cols[c][r] = x
        return cols

    def column(self, j: int) -> Vector:
        return {r: row[j] for r, row in self.rows.items() if j in row}

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"SparseRationalMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz()})"

    # algebra -----------------------------------------------------------------

    def transpose(self) -> "SparseRationalMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for r, row in self.rows.items():
            for c, x in row.items():
                rows.setdefault(c, {})[r] = x
        return SparseRationalMatrix(self.n_cols, self.n_rows, rows, _trusted=True)

    @property
    def T(self) -> "SparseRationalMatrix":
        return self.transpose()

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.n_cols != other.n_rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out: Dict[int, Dict[int, object]] = {}
        for r, row in self.rows.items():
            acc: Dict[int, object] = {}
            for k, x in row.items():
                orow = orows.get(k)
                if orow is None:
                    continue
                for c, y in orow.items():
                    acc[c] = acc.get(c, 0) + x * y
            acc = {c: rat(v) for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return SparseRationalMatrix(self.n_rows, other.n_cols, out, _trusted=True)

    def apply(self, v: Mapping[int, object]) -> Vector:
        """Matrix times sparse column vector."""
        out: Dict[int, object] = {}
        for r, row in self.rows.items():
            s = 0
            for c, x in row.items():
                y = v.get(c)
                if y:
                    s += x * y
            if s:
                out[r] = rat(s)
        return out

    def _combine(self, other: "SparseRationalMatrix", scale) -> "SparseRationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            acc = out.setdefault(r, {})
            vec_axpy(acc, row, scale)
            if not acc:
                del out[r]
            else:
                out[r] = {c: rat(x) for c, x in acc.items()}
        return SparseRationalMatrix(self.n_rows, self.n_cols, out, _trusted=True)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "SparseRationalMatrix":
        s = rat(s)
        if not s:
            return SparseRationalMatrix.zeros(*self.shape)
        rows = {r: {c: rat(x * s) for c, x in row.items()} for r, row in self.rows.items()}
        return SparseRationalMatrix(self.n_rows, self.n_cols, rows, _trusted=True)

    def kron(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        """Kronecker product, row index ``i * other.n_rows + k``."""
        rows: Dict[int, Dict[int, object]] = {}
        m, n = other.shape
        for i, arow in self.rows.items():
            for k, brow in other.rows.items():
                rows[i * m + k] = {j * n + l: rat(x * y) for j, x in arow.items() for l, y in brow.items()}
        return SparseRationalMatrix(self.n_rows * m, self.n_cols * n, rows, _trusted=True)

    def submatrix(self, row_ids: Sequence[int], col_ids: Sequence[int]) -> "SparseRationalMatrix":
        cmap = {c: j for j, c in enumerate(col_ids)}
        rows = {}
        for i, r in enumerate(row_ids):
            row = self.rows.get(r)
            if not row:
                continue
            sub = {cmap[c]: x for c, x in row.items() if c in cmap}
            if sub:
                rows[i] = sub
        return SparseRationalMatrix(len(row_ids), len(col_ids), rows, _trusted=True)

    def hstack(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.n_rows != other.n_rows:
            raise DimensionError("hstack row mismatch")
        rows = {r: dict(row) for r, row in self.rows.items()}
        off = self.n_cols
        for r, row in other.rows.items():
            rows.setdefault(r, {}).update({c + off: x for c, x in row.items()})
        return SparseRationalMatrix(self.n_rows, self.n_cols + other.n_cols, rows, _trusted=True)

    def vstack(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.n_cols != other.n_cols:
            raise DimensionError("vstack column mismatch")
        rows = {r: dict(row) for r, row in self.rows.items()}
        off = self.n_rows
        rows.update({r + off: dict(row) for r, row in other.rows.items()})
        return SparseRationalMatrix(self.n_rows + other.n_rows, self.n_cols, rows, _trusted=True)

    def trace(self):
        return rat(sum(row.get(r, 0) for r, row in self.rows.items()))


def block_diag(a: SparseRationalMatrix, b: SparseRationalMatrix) -> SparseRationalMatrix:
    rows = {r: dict(row) for r, row in a.rows.items()}
    for r, row in b.rows.items():
        rows[r + a.n_rows] = {c + a.n_cols: x for c, x in row.items()}
    return SparseRationalMatrix(a.n_rows + b.n_rows, a.n_cols + b.n_cols, rows, _trusted=True)


def vstack_all(mats: Sequence[SparseRationalMatrix]) -> SparseRationalMatrix:
    n_cols = mats[0].n_cols
    rows = {}
    off = 0
    for m in mats:
        if m.n_cols != n_cols:
            raise DimensionError("vstack column mismatch")
        for r, row in m.rows.items():
            rows[r + off] = dict(row)
        off += m.n_rows
    return SparseRationalMatrix(off, n_cols, rows, _trusted=True)


# ----------------------------------------------------------------------------
# elimination


class Echelon:
    """Incremental fraction-free row echelon form.

    Rows are added one at a time; each is reduced against the current pivots
    (pivot column = smallest remaining column in the given column order) and
    either becomes a new pivot row or reduces to zero.  Optionally records, for
    every stored row, its expression in terms of the inserted rows.
    """

    def __init__(self, n_cols: int, col_order: Optional[Sequence[int]] = None, track: bool = False):
        self.n_cols = n_cols
        if col_order is None:
            self._pos = None
        else:
            self._pos = {c: i for i, c in enumerate(col_order)}
        self.pivots: Dict[int, Dict[int, int]] = {}
        self.track = track
        self.combos: Dict[int, Dict[int, object]] = {}
        self._n_added = 0

    def _lead(self, row):
        if self._pos is None:
            return min(row)
        pos = self._pos
        return min(row, key=pos.__getitem__)

    def reduce(self, row: Mapping[int, object], combo: Optional[Dict[int, object]] = None):
        """Reduce ``row`` against current pivots; returns (residual, combo)."""
        r = _primitive(row) if row else {}
        if combo is not None and row:
            # track scaling applied by _primitive
            scale = None
            for k, x in r.items():
                scale = Fraction(x) / Fraction(row[k])
                break
            combo = vec_scale(combo, scale)
        pivots = self.pivots
        while r:
            c = self._lead(r)
            prow = pivots.get(c)
            if prow is None:
                break
            a = prow[c]
            b = r[c]
            # r <- a*r - b*prow
            g = gcd(a, b)
            fa, fb = a // g, b // g
            if fa != 1:
                r = {k: x * fa for k, x in r.items()}
            for k, x in prow.items():
                y = r.get(k, 0) - fb * x
                if y:
                    r[k] = y
                else:
                    r.pop(k, None)
            if combo is not None:
                combo = vec_add(vec_scale(combo, fa), self.combos[c], -fb)
            if r:
                g = gcd(*r.values())
                if g > 1:
                    r = {k: x // g for k, x in r.items()}
                    if combo is not None:
                        combo = vec_scale(combo, Fraction(1, g))
        return r, combo

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; returns True if it was independent of earlier rows."""
        idx = self._n_added
        self._n_added += 1
        combo = {idx: 1} if self.track else None
        r, combo = self.reduce(row, combo)
        if not r:
            return False
        c = self._lead(r)
        if r[c] < 0:
            r = {k: -x for k, x in r.items()}
            if combo is not None:
                combo = vec_scale(combo, -1)
        self.pivots[c] = r
        if combo is not None:
            self.combos[c] = combo
        return True

    def contains(self, row: Mapping[int, object]) -> bool:
        r, _ = self.reduce(row)
        return not r

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rref(self) -> Dict[int, Dict[int, object]]:
        """Reduced echelon rows with unit pivots, keyed by pivot column."""
        order = sorted(self.pivots, key=(lambda c: c) if self._pos is None else self._pos.__getitem__)
        red: Dict[int, Dict[int, object]] = {}
        for c in reversed(order):
            row = dict(self.pivots[c])
            # eliminate later pivot columns
            for c2 in list(row):
                if c2 != c and c2 in red:
                    f = row.get(c2)
                    if f:
                        vec_axpy(row, red[c2], -f)
            piv = row[c]
            red[c] = {k: rat(Fraction(x) / piv) for k, x in row.items() if x}
        return red


def _column_order(m: SparseRationalMatrix) -> List[int]:
    """Columns sorted by ascending fill (sparse columns pivot first)."""
    counts = [0] * m.n_cols
    for row in m.rows.values():
        for c in row:
            counts[c] += 1
    return sorted(range(m.n_cols), key=lambda c: (counts[c], c))


def _echelon(m: SparseRationalMatrix, track: bool = False) -> Echelon:
    ech = Echelon(m.n_cols, _column_order(m), track=track)
    order = sorted(m.rows, key=lambda r: (len(m.rows[r]), r))
    for r in order:
        ech.add(m.rows[r])
    return ech


def rank(m: SparseRationalMatrix) -> int:
    """Exact rank over the rationals."""
    if m.is_zero():
        return 0
    # eliminate along the shorter dimension
    if m.n_rows > m.n_cols:
        m = m.transpose()
    return _echelon(m).rank


class Subspace:
    """A subspace of Q^n given by linearly independent basis columns."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: SparseRationalMatrix, *, check: bool = True):
        if basis.n_rows != ambient_dim:
            raise DimensionError("basis rows must equal ambient dimension")
        if check and rank(basis) != basis.n_cols:
            raise ValueError("basis columns are linearly dependent")
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, SparseRationalMatrix.zeros(n, 0), check=False)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, SparseRationalMatrix.identity(n), check=False)

    @classmethod
    def span(cls, n: int, vectors: Sequence[Mapping[int, object]]) -> "Subspace":
        """Span of arbitrary (possibly dependent) vectors; keeps an independent subset."""
        ech = Echelon(n)
        keep = []
        for v in vectors:
            if v and ech.add(v):
                keep.append(vec_clean(v))
        return cls(n, SparseRationalMatrix.from_columns(n, keep), check=False)

    @property
    def dim(self) -> int:
        return self.basis.n_cols

    def vectors(self) -> List[Vector]:
        return self.basis.columns()

    def contains(self, v: Mapping[int, object]) -> bool:
        ech = Echelon(self.ambient_dim)
        for col in self.vectors():
            ech.add(col)
        return ech.contains(v)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: SparseRationalMatrix) -> Subspace:
    """Basis of the right null space ``{v : m v = 0}``."""
    n = m.n_cols
    if m.is_zero():
        return Subspace.full(n)
    ech = _echelon(m)
    red = ech.rref()
    free = [c for c in range(n) if c not in red]
    cols = []
    for f in free:
        v = {f: 1}
        for p, row in red.items():
            x = row.get(f)
            if x:
                v[p] = rat(-x)
        cols.append(v)
    return Subspace(n, SparseRationalMatrix.from_columns(n, cols), check=False)


def nullity(m: SparseRationalMatrix) -> int:
    return m.n_cols - rank(m)


def solve(m: SparseRationalMatrix, b: Sequence | Mapping[int, object]):
    """Return some x with ``m x = b`` (as a dense list) or None if inconsistent."""
    if isinstance(b, Mapping):
        bvec = {k: rat(x) for k, x in b.items() if x}
        if any(not 0 <= k < m.n_rows for k in bvec):
            raise DimensionError("right-hand side index out of range")
    else:
        if len(b) != m.n_rows:
            raise DimensionError(f"right-hand side has length {len(b)}, expected {m.n_rows}")
        bvec = {i: rat(x) for i, x in enumerate(b) if x}
    x = solve_sparse(m, bvec)
    if x is None:
        return None
    return [x.get(j, 0) for j in range(m.n_cols)]


def solve_sparse(m: SparseRationalMatrix, b: Mapping[int, object]) -> Optional[Vector]:
    n = m.n_cols
    aug_col = n
    order = _column_order(m) + [aug_col]
    ech = Echelon(n + 1, order)
    rows = dict(m.rows)
    for r, x in b.items():
        if x:
            rows[r] = dict(rows.get(r, {}))
            rows[r][aug_col] = x
    for r in sorted(rows, key=lambda r: (len(rows[r]), r)):
        ech.add(rows[r])
    if aug_col in ech.pivots:
        return None
    red = ech.rref()
    return {p: rat(row.get(aug_col, 0)) for p, row in red.items() if row.get(aug_col, 0)}


def column_space(m: SparseRationalMatrix) -> Subspace:
    return Subspace.span(m.n_rows, m.columns())


def quotient_dim(k: Subspace, i: Subspace) -> int:
    """dim K - dim I, after checking I is contained in K."""
    if k.ambient_dim != i.ambient_dim:
        raise DimensionError("ambient dimension mismatch")
    ech = Echelon(k.ambient_dim)
    for col in k.vectors():
        ech.add(col)
    for j, col in enumerate(i.vectors()):
        if not ech.contains(col):
            raise NotASubspaceError(f"basis vector {j} of the inner space is not in the outer space")
    return k.dim - i.dim


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("ambient dimension mismatch")
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n)
    stacked = a.basis.hstack(b.basis.scale(-1))
    ker = kernel_basis(stacked)
    vecs = []
    acols = a.vectors()
    for coeffs in ker.vectors():
        v: Dict[int, object] = {}
        for j, x in coeffs.items():
            if j < a.dim:
                vec_axpy(v, acols[j], x)
        vecs.append(vec_clean(v))
    return Subspace.span(n, vecs)


def inverse(m: SparseRationalMatrix) -> SparseRationalMatrix:
    """Exact inverse of a square matrix; raises ValueError if singular."""
    n = m.n_rows
    if m.n_cols != n:
        raise DimensionError("inverse of non-square matrix")
    cols = []
    for j in range(n):
        x = solve_sparse(m, {j: 1})
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return SparseRationalMatrix.from_columns(n, cols)


class CoordinateMap:
    """Coordinates of vectors with respect to fixed independent columns.

    One elimination up front (a set of pivot rows with an invertible square
    block), then each lookup is a sparse product plus an exact membership
    check.
    """

    def __init__(self, n: int, columns: Sequence[Mapping[int, object]]):
        self.n = n
        self.columns = [vec_clean(c) for c in columns]
        k = len(self.columns)
        if k == 0:
            self.rows: List[int] = []
            self.inv = SparseRationalMatrix.zeros(0, 0)
            return
        ech = Echelon(n)
        for c in self.columns:
            if not ech.add(c):
                raise ValueError("columns are linearly dependent")
        self.rows = sorted(ech.pivots)
        pos = {r: i for i, r in enumerate(self.rows)}
        sub = SparseRationalMatrix.from_columns(
            k, [{pos[r]: x for r, x in c.items() if r in pos} for c in self.columns])
        self.inv = inverse(sub)
        self._pos = pos

    def __call__(self, v: Mapping[int, object], check: bool = True) -> Optional[Vector]:
        """Coordinates of ``v`` or None when ``v`` is outside the span (if ``check``)."""
        if not self.columns:
            return {} if not vec_clean(v) or not check else None
        rhs = {self._pos[r]: x for r, x in v.items() if r in self._pos and x}
        coords = self.inv.apply(rhs)
        if check:
            recon: Dict[int, object] = {}
            for j, x in coords.items():
                vec_axpy(recon, self.columns[j], x)
            if vec_clean(recon) != vec_clean(v):
                return None
        return coords
