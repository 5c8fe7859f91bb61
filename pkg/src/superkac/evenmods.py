"""Irreducible modules of the even subalgebra L_0bar = L_0 + C Y.

Two ways to get one:

* :func:`sl21_even_module` writes down the spin-j module of sl(2) with Y acting
  as a scalar (closed formulas, used for sl(2/1) and osp(2/2));
* :func:`highest_weight_module` searches tensor powers of the natural module
  and its dual for a highest weight vector of the requested weight and cuts
  out the cyclic submodule it generates.  This covers any dominant integral
  weight of the semisimple part, with a bounded search.

Weights are tuples of Cartan eigenvalues in ``A.cartan_indices`` order.  With
the coroot Cartan bases used by the constructors these are Dynkin labels for
the semisimple part, followed by the Y eigenvalue.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import SparseRationalMatrix, rat, rat_str
from .modules import (
    ModuleError,
    SuperModule,
    check_representation,
    dual_module,
    generated_subspace,
    invariants,
    natural_module,
    restrict,
    singular_vectors,
    submodule,
    tensor_modules,
    trivial_module,
    weight_multiset,
    with_y,
)
from .superalgebra import SuperAlgebra

EvenModule = SuperModule


class WeightNotFound(ModuleError):
    """No highest weight vector of the requested weight within the search bound."""


def _even(A: SuperAlgebra) -> SuperAlgebra:
    return A if A.parent is not None or A.is_even() else A.even


def sl2_triple(A: SuperAlgebra) -> Tuple[int, int, int, Fraction]:
    """(h, e, f, kappa) for a rank-one semisimple part with [e, f] = kappa h."""
    if len(A.semisimple_cartan) != 1 or len(A.raising) != 1:
        raise ModuleError(f"{A.name}: semisimple part is not sl(2)")
    h, e, f = A.semisimple_cartan[0], A.raising[0], A.lowering[0]
    ef = A.bracket_basis(e, f)
    if set(ef) != {h}:
        raise ModuleError("[e, f] is not proportional to h")
    he = A.bracket_basis(h, e)
    if he != {e: 2}:
        raise ModuleError("h is not normalised so that [h, e] = 2e")
    return h, e, f, Fraction(ef[h])


def sl21_even_module(A: SuperAlgebra, a: int, b) -> EvenModule:
    """Spin a/2 with hypercharge y = 2b - a, as an L_0bar module.

    Basis v_0..v_a with h v_k = (a - 2k) v_k, f' v_k = v_{k+1},
    e v_k = k (a - k + 1) v_{k-1}, where f' = f / kappa and [e, f] = kappa h.
    """
    E = _even(A)
    a = int(a)
    if a < 0:
        raise ModuleError("a must be a nonnegative integer")
    b = rat(b)
    y = rat(2 * b - a)
    h, e, f, kappa = sl2_triple(E)
    n = a + 1
    mats = [SparseRationalMatrix.zeros(n, n) for _ in range(E.dim)]
    mats[h] = SparseRationalMatrix.diag([a - 2 * k for k in range(n)])
    mats[e] = SparseRationalMatrix.from_entries(n, n, ((k - 1, k, k * (a - k + 1)) for k in range(1, n)))
    mats[f] = SparseRationalMatrix.from_entries(n, n, ((k + 1, k, rat(kappa)) for k in range(n - 1)))
    mats[E.y_index] = SparseRationalMatrix.diag([y] * n)
    M = SuperModule(E, tuple(mats), (0,) * n, f"even_hw:{a},{rat_str(b)}",
                    {"a": a, "b": b, "y": y, "highest_weight": (rat(a), y)})
    return check_representation(M)


def natural_even(A: SuperAlgebra) -> EvenModule:
    """Defining representation restricted to L_0bar, with every basis vector even."""
    E = _even(A)
    N = restrict(natural_module(E.parent or A), E) if E.parent is not None else natural_module(E)
    return SuperModule(E, N.action, (0,) * N.dim, "natural_even")


def _ss_weight(M: SuperModule, w) -> Tuple:
    A = M.algebra
    pos = [A.cartan_indices.index(h) for h in A.semisimple_cartan]
    return tuple(w[k] for k in pos)


def highest_weight_module(A: SuperAlgebra, labels: Sequence, y, *, fuel: int = 6) -> EvenModule:
    """Irreducible L_0bar module with semisimple highest weight ``labels`` and Y = y.

    Searches N^{(x) i} (x) (N*)^{(x) j} for i + j <= fuel.  The search is
    exhaustive within that bound; failure raises :class:`WeightNotFound`.
    """
    E = _even(A)
    target = tuple(rat(x) for x in labels)
    if len(target) != len(E.semisimple_cartan):
        raise ModuleError(f"expected {len(E.semisimple_cartan)} labels, got {len(target)}")
    if any(x < 0 or Fraction(x).denominator != 1 for x in target):
        raise ModuleError("labels must be nonnegative integers (dominant integral)")
    N = natural_even(E)
    ND = dual_module(N, check=False)
    T = trivial_module(E)
    cache: Dict[Tuple[int, int], SuperModule] = {(0, 0): T}

    def power(i, j):
        if (i, j) in cache:
            return cache[(i, j)]
        if i > 0:
            M = tensor_modules(power(i - 1, j), N, check=False)
        else:
            M = tensor_modules(power(0, j - 1), ND, check=False)
        cache[(i, j)] = M
        return M

    for total in range(fuel + 1):
        for i in range(total, -1, -1):
            j = total - i
            M = power(i, j)
            for v, wt, par in singular_vectors(M, E.raising):
                if _ss_weight(M, wt) == target:
                    S = generated_subspace(M, [v], E.lowering)
                    sub = submodule(M, S, "even_hw")
                    out = with_y(sub, y)
                    out.provenance = f"even_hw:{','.join(rat_str(x) for x in target)}@{rat_str(y)}"
                    out.meta = {"y": rat(y), "highest_weight": target + (rat(y),), "found_in": (i, j)}
                    return check_representation(out)
    raise WeightNotFound(f"no highest weight vector of weight {target} in tensor powers up to {fuel}")


# -----------------------------------------------------------------------------
# decomposition


def decompose_irreducibles(M: SuperModule) -> Counter:
    """Highest weights of the L_0bar constituents, assuming complete reducibility.

    Counts singular vectors of the even raising operators (per weight and
    parity).  For a module on which Y acts semisimply this is the L_0bar
    content.  Keys are (weight, parity).
    """
    E = M.algebra
    out: Counter = Counter()
    for _, wt, par in singular_vectors(M, E.raising):
        out[(wt, par)] += 1
    return out


def spin_hypercharge_content(M: SuperModule) -> List[Tuple[object, object, int]]:
    """For a rank-one semisimple part: sorted (j, y, multiplicity) of the even constituents."""
    A = M.algebra
    if len(A.semisimple_cartan) != 1:
        raise ModuleError("spin content needs a rank-one semisimple part")
    hpos = A.cartan_indices.index(A.semisimple_cartan[0])
    ypos = A.cartan_indices.index(A.y_index)
    c: Counter = Counter()
    for (wt, _par), k in decompose_irreducibles(M).items():
        c[(Fraction(wt[hpos]) / 2, rat(wt[ypos]))] += k
    return sorted(((j, y, k) for (j, y), k in c.items()), key=lambda t: (-t[1], -t[0]))


def format_content(content: Sequence[Tuple[object, object, int]]) -> str:
    """Render like ``0_{6} + 1/2_{5} + (0+1)_{4}``; equal y values are grouped."""
    by_y: Dict[object, List[object]] = {}
    for j, y, k in content:
        by_y.setdefault(y, []).extend([j] * k)
    parts = []
    for y in sorted(by_y, reverse=True):
        js = sorted(by_y[y])
        body = rat_str(js[0]) if len(js) == 1 else "(" + "+".join(rat_str(j) for j in js) + ")"
        parts.append(f"{body}_{{{rat_str(y)}}}")
    return " + ".join(parts)


def weight_decomposition(M: SuperModule) -> Counter:
    return weight_multiset(M)


__all__ = [
    "EvenModule",
    "WeightNotFound",
    "decompose_irreducibles",
    "dual_module",
    "format_content",
    "highest_weight_module",
    "invariants",
    "natural_even",
    "sl21_even_module",
    "sl2_triple",
    "spin_hypercharge_content",
    "tensor_modules",
    "weight_decomposition",
]
