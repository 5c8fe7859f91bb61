"""JSON round trips for algebras, modules and cohomology results.

Rationals are written as strings ("3/2", "-1", "0"), never floats, so a
dump followed by a load reproduces every matrix entry exactly.  Each
document carries ``schema_version``.

A module document looks like::

    {"schema_version": 1, "kind": "module",
     "algebra": {"family": "sl", "params": [2, 1], "part": "full"},
     "dim": 4, "parity": [0, 1, 1, 0], "provenance": "kac:0,2",
     "action": {"H1": [["0", ...], ...], ...}}

Large modules use ``"action_sparse": {label: [[i, j, "p/q"], ...]}``
instead of dense rows; the loader accepts either form (and a mix).
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Any, Dict, List, Mapping

from .linalg import SparseRationalMatrix, rat, rat_str
from .modules import ModuleError, SuperModule, verify_representation
from .superalgebra import AlgebraError, SuperAlgebra, build, killing_form

SCHEMA_VERSION = 1
DENSE_LIMIT = 64


class SchemaError(ValueError):
    pass


@lru_cache(maxsize=None)
def cached_algebra(family: str, params: tuple) -> SuperAlgebra:
    return build(family, *params)


def algebra_spec(A: SuperAlgebra) -> Dict[str, Any]:
    if A.parent is None:
        return {"family": A.family, "params": list(A.params), "part": "full"}
    P = A.parent
    if A.embedding == tuple(P.even_indices) or A.embedding == tuple(range(len(P.even_indices))):
        return {"family": P.family, "params": list(P.params), "part": "even"}
    raise SchemaError(f"cannot serialize modules over the subalgebra {A.name}")


def algebra_from_spec(spec: Mapping[str, Any]) -> SuperAlgebra:
    try:
        A = cached_algebra(spec["family"], tuple(int(p) for p in spec["params"]))
    except KeyError as exc:
        raise SchemaError(f"algebra spec lacks {exc}") from None
    part = spec.get("part", "full")
    if part == "full":
        return A
    if part == "even":
        return A.even
    raise SchemaError(f"unknown algebra part {part!r}")


# -----------------------------------------------------------------------------
# algebras


def dump_algebra(A: SuperAlgebra) -> Dict[str, Any]:
    structure = [[a, b, c, rat_str(v)]
                 for (a, b), out in sorted(A.structure.items())
                 for c, v in sorted(out.items()) if v]
    K = killing_form(A)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "algebra",
        "name": A.name,
        "family": A.family,
        "params": list(A.params),
        "dim": A.dim,
        "labels": list(A.labels),
        "parities": list(A.parities),
        "z_grades": [b.z_grade for b in A.basis],
        "cartan": list(A.cartan_indices),
        "y_index": A.y_index,
        "structure": structure,
        "killing": [[i, j, rat_str(x)] for i, j, x in K.entries()],
    }


# -----------------------------------------------------------------------------
# modules


def _dense(m: SparseRationalMatrix) -> List[List[str]]:
    return [[rat_str(m[i, j]) for j in range(m.n_cols)] for i in range(m.n_rows)]


def dump_module(M: SuperModule) -> Dict[str, Any]:
    A = M.algebra
    doc: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "module",
        "algebra": algebra_spec(A),
        "dim": M.dim,
        "parity": list(M.parity),
        "provenance": M.provenance,
    }
    if M.dim <= DENSE_LIMIT:
        doc["action"] = {A.labels[a]: _dense(m) for a, m in enumerate(M.action)}
    else:
        doc["action_sparse"] = {A.labels[a]: [[i, j, rat_str(x)] for i, j, x in m.entries()]
                                for a, m in enumerate(M.action)}
    if M.basis_labels is not None:
        doc["basis_labels"] = list(M.basis_labels)
    keys = M.meta.get("keys")
    if keys is not None:
        doc["pbw_keys"] = [[list(S), list(T), j] for S, T, j in keys]
        doc["U_dim"] = M.meta.get("U_dim")
    return doc


def load_module(doc: Mapping[str, Any], *, verify: bool = True) -> SuperModule:
    """Rebuild a module from :func:`dump_module` output (or a hand-written file).

    ``parity`` defaults to all even.  With ``verify`` the graded
    representation property is checked and a :class:`ModuleError` lists the
    first violations.
    """
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}")
    if "algebra" not in doc or "dim" not in doc:
        raise SchemaError("a module document needs 'algebra' and 'dim'")
    A = algebra_from_spec(doc["algebra"])
    n = int(doc["dim"])
    dense = doc.get("action", {}) or {}
    sparse = doc.get("action_sparse", {}) or {}
    unknown = (set(dense) | set(sparse)) - set(A.labels)
    if unknown:
        raise SchemaError(f"labels not in {A.name}: {sorted(unknown)}")
    mats = []
    for a, lab in enumerate(A.labels):
        if lab in dense:
            rows = dense[lab]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise SchemaError(f"matrix for {lab} is not {n}x{n}")
            mats.append(SparseRationalMatrix.from_dense([[rat(x) for x in r] for r in rows]))
        elif lab in sparse:
            mats.append(SparseRationalMatrix.from_entries(n, n, ((int(i), int(j), rat(x)) for i, j, x in sparse[lab])))
        else:
            mats.append(SparseRationalMatrix.zeros(n, n))
    parity = tuple(int(p) for p in doc.get("parity", [0] * n))
    if len(parity) != n:
        raise SchemaError("parity list has the wrong length")
    meta: Dict[str, Any] = {}
    if "pbw_keys" in doc:
        meta["keys"] = [(tuple(S), tuple(T), int(j)) for S, T, j in doc["pbw_keys"]]
        meta["U_dim"] = doc.get("U_dim")
    labels = tuple(doc["basis_labels"]) if "basis_labels" in doc else None
    M = SuperModule(A, tuple(mats), parity, doc.get("provenance", "file"), meta, labels)
    if verify:
        bad = verify_representation(M)
        if bad:
            raise ModuleError("not a representation: " + "; ".join(bad[:5]))
    return M


def dumps(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False)


def save_module(M: SuperModule, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(dump_module(M)))
        fh.write("\n")


def read_module(path: str, *, verify: bool = True) -> SuperModule:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from None
    return load_module(doc, verify=verify)


def modules_identical(M1: SuperModule, M2: SuperModule) -> bool:
    return (M1.algebra.labels == M2.algebra.labels and M1.parity == M2.parity
            and all(a == b for a, b in zip(M1.action, M2.action)))


__all__ = [
    "AlgebraError",
    "SCHEMA_VERSION",
    "SchemaError",
    "algebra_from_spec",
    "algebra_spec",
    "cached_algebra",
    "dump_algebra",
    "dump_module",
    "dumps",
    "load_module",
    "modules_identical",
    "read_module",
    "save_module",
]
