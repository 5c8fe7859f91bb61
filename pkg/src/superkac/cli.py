"""Command line front end: ``superkac <command> ...``.

Commands

    algebra  FAMILY PARAMS...                 structure, Killing form, super-Jacobi check
    module   FAMILY PARAMS... SPEC            build, verify, even decomposition
    tensor   FAMILY PARAMS... SPEC1 SPEC2     highest-weight decomposition of SPEC1 (x) SPEC2
    homology FAMILY PARAMS... (SPEC | --double SPEC) [--mode ...]
    double   FAMILY PARAMS... SPEC --param t  Kac module -> H^1 -> cocycle -> W(t)

Module specs

    kac:a,b               sl(2/1)-type Kac module, spin a/2 and y = 2b - a
    kac:l1,...,lr@y       Kac module on the even irreducible with Dynkin labels l and Y = y
    kac_minus:...         the opposite induction V-(U)
    induce_even:...       induction from the even subalgebra
    even_hw:...           the even module U itself
    irrep:...             irreducible quotient of the Kac module
    trivial | adjoint | natural
    dual(S)  shift(S)  tensor(S1;S2)  file:PATH

The exit status is 0 exactly when every verification flag of the run is
true; usage and input errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .linalg import rat, rat_str
from .modules import (
    ModuleError,
    SuperModule,
    adjoint_module,
    dual_module,
    natural_module,
    parity_shift,
    tensor_modules,
    trivial_module,
    verify_representation,
    weight_multiset,
)
from .serialize import cached_algebra, dump_algebra, dump_module, dumps, read_module
from .superalgebra import AlgebraError, SuperAlgebra, verify_super_jacobi


class SpecError(ValueError):
    pass


# -----------------------------------------------------------------------------
# module spec grammar


def _split_top(s: str, sep: str) -> List[str]:
    depth, out, cur = 0, [], []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def even_module_from_payload(A: SuperAlgebra, payload: str) -> SuperModule:
    """``a,b`` (rank one) or ``l1,...,lr@y``."""
    from .evenmods import highest_weight_module, sl21_even_module
    if "@" in payload:
        labels, y = payload.split("@", 1)
        ls = [int(x) for x in labels.split(",") if x.strip()] if labels.strip() else []
        return highest_weight_module(A, ls, rat(y))
    parts = [p.strip() for p in payload.split(",")]
    if len(parts) != 2:
        raise SpecError(f"expected 'a,b' or 'labels@y', got {payload!r}")
    return sl21_even_module(A, int(parts[0]), rat(parts[1]))


def parse_module(A: SuperAlgebra, spec: str) -> SuperModule:
    from .kac import induce_even, induce_minus, induce_plus, irreducible_quotient
    spec = spec.strip()
    for head, fn in (("dual(", dual_module), ("shift(", parity_shift)):
        if spec.startswith(head):
            if not spec.endswith(")"):
                raise SpecError(f"unbalanced parentheses in {spec!r}")
            return fn(parse_module(A, spec[len(head):-1]))
    if spec.startswith("tensor("):
        if not spec.endswith(")"):
            raise SpecError(f"unbalanced parentheses in {spec!r}")
        parts = _split_top(spec[len("tensor("):-1], ";")
        if len(parts) != 2:
            raise SpecError("tensor(...) takes two specs separated by ';'")
        return tensor_modules(parse_module(A, parts[0]), parse_module(A, parts[1]))
    if spec == "trivial":
        return trivial_module(A)
    if spec == "adjoint":
        return adjoint_module(A)
    if spec == "natural":
        return natural_module(A)
    if ":" not in spec:
        raise SpecError(f"unrecognised module spec {spec!r}")
    kind, payload = spec.split(":", 1)
    if kind == "file":
        return read_module(payload)
    if kind not in ("kac", "kac_minus", "induce_even", "even_hw", "irrep"):
        raise SpecError(f"unknown module kind {kind!r}")
    U = even_module_from_payload(A, payload)
    if kind == "even_hw":
        return U
    if kind == "kac_minus":
        return induce_minus(A, U)
    if kind == "induce_even":
        return induce_even(A, U)
    M = induce_plus(A, U)
    M.provenance = spec if kind == "kac" else M.provenance
    if kind == "irrep":
        Q = irreducible_quotient(M)
        Q.provenance = spec
        return Q
    return M


def seed_module(A: SuperAlgebra, spec: str) -> SuperModule:
    """The even module U named by a ``kac:`` / ``even_hw:`` spec (for --double)."""
    spec = spec.strip()
    for kind in ("kac:", "even_hw:"):
        if spec.startswith(kind):
            return even_module_from_payload(A, spec[len(kind):])
    raise SpecError("--double needs a 'kac:...' spec naming the seed module U")


# -----------------------------------------------------------------------------
# reporting


class Report:
    """Flags, a result payload and timings; rendered as text or JSON."""

    def __init__(self, command: List[str]):
        self.command = command
        self.flags: Dict[str, bool] = {}
        self.result: Dict[str, Any] = {}
        self.lines: List[str] = []
        self.timings: Dict[str, float] = {}
        self._t = time.perf_counter()

    def flag(self, name: str, ok: bool) -> None:
        self.flags[name] = bool(ok)

    def say(self, line: str) -> None:
        self.lines.append(line)

    def tick(self, name: str) -> None:
        now = time.perf_counter()
        self.timings[name] = round(now - self._t, 4)
        self._t = now

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> Dict[str, Any]:
        return {"schema_version": 1, "kind": "report", "command": self.command,
                "flags": self.flags, "ok": self.ok, "result": self.result, "timings": self.timings}

    def text(self) -> str:
        out = list(self.lines)
        for k, v in self.flags.items():
            out.append(f"  [{'pass' if v else 'FAIL'}] {k}")
        return "\n".join(out)


def _algebra(args) -> Tuple[SuperAlgebra, List[str]]:
    """Split positionals into FAMILY PARAMS... and the remaining module specs."""
    pos = list(args.items)
    if not pos:
        raise SpecError("missing algebra family")
    family = pos.pop(0)
    params = []
    while pos and pos[0].lstrip("-").isdigit():
        params.append(int(pos.pop(0)))
    return cached_algebra(family, tuple(params)), pos


def _weights_text(M: SuperModule) -> str:
    A = M.algebra
    from .evenmods import format_content, spin_hypercharge_content
    from .modules import restrict
    E = A if A.is_even() else A.even
    R = M if A.is_even() else restrict(M, E)
    if R.weights is None:
        return "n/a (the Cartan subalgebra does not act diagonally)"
    if len(E.semisimple_cartan) == 1:
        return format_content(spin_hypercharge_content(R))
    from .evenmods import decompose_irreducibles
    parts = []
    for (wt, par), k in sorted(decompose_irreducibles(R).items(), key=lambda t: (-t[0][0][-1], t[0])):
        lab = "(" + ",".join(rat_str(x) for x in wt) + ")" + ("'" if par else "")
        parts.append(lab if k == 1 else f"{k}x{lab}")
    return " + ".join(parts)


# -----------------------------------------------------------------------------
# commands


def cmd_algebra(args, rep: Report) -> None:
    A, rest = _algebra(args)
    if rest:
        raise SpecError(f"unexpected arguments {rest}")
    bad = verify_super_jacobi(A)
    rep.tick("jacobi")
    rep.flag("super_jacobi", not bad)
    rep.result = dump_algebra(A)
    rep.result["jacobi_violations"] = bad[:20]
    rep.say(f"{A.name}: dim {A.dim} (even {len(A.even_indices)}, odd {len(A.odd_indices)})")
    rep.say("basis: " + " ".join(A.labels))
    rep.say(f"structure constants: {len(rep.result['structure'])} nonzero")
    rep.say(f"super-Jacobi: {'pass' if not bad else f'{len(bad)} violations'}")


def cmd_module(args, rep: Report) -> None:
    A, rest = _algebra(args)
    if len(rest) != 1:
        raise SpecError("module needs exactly one module spec")
    try:
        M = parse_module(A, rest[0])
    except ModuleError as exc:
        rep.flag("representation", False)
        rep.say(f"invalid module: {exc}")
        rep.result = {"error": str(exc)}
        return
    bad = verify_representation(M)
    rep.tick("build")
    rep.flag("representation", not bad)
    dec = _weights_text(M)
    rep.say(f"{M.provenance}: dim {M.dim} over {M.algebra.name}")
    rep.say(f"decomposition: {dec}")
    rep.result = {"dim": M.dim, "decomposition": dec}
    if M.weights is not None:
        rep.result["weights"] = sorted([[[rat_str(x) for x in w], k] for w, k in weight_multiset(M).items()])
    if args.json:
        _write_json(args.json, dump_module(M))


def _expected_table(path: str) -> List[Tuple[str, str, List[int]]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            lhs, rhs = line.rsplit("=", 1)
            dims = sorted((int(x) for x in rhs.split("+")), reverse=True)
            specs = _split_top(lhs, ";")
            if len(specs) == 2:
                out.append((specs[0].strip(), specs[1].strip(), dims))
            else:
                out.append(("", "", dims))
    return out


def cmd_tensor(args, rep: Report) -> None:
    from .kac import decompose_highest_weight
    A, rest = _algebra(args)
    if len(rest) != 2:
        raise SpecError("tensor needs two module specs")
    V, W = parse_module(A, rest[0]), parse_module(A, rest[1])
    M = tensor_modules(V, W)
    rep.tick("build")
    pieces = decompose_highest_weight(M)
    rep.tick("decompose")
    rep.flag("representation", not verify_representation(M))
    rep.flag("decomposed", pieces is not None)
    if pieces is None:
        rep.say(f"{rest[0]} x {rest[1]}: no direct-sum decomposition into highest-weight pieces")
        return
    total = sum((weight_multiset(p["module"]) for p in pieces), start=type(weight_multiset(M))())
    rep.flag("weight_multiset", total == weight_multiset(M))
    dims = [p["dim"] for p in pieces]
    text = " + ".join(str(d) for d in dims)
    rep.say(f"{rest[0]} x {rest[1]} = {text}")
    for p in pieces:
        wt = ",".join(rat_str(x) for x in p["highest_weight"])
        rep.say(f"  dim {p['dim']:>3}  highest weight ({wt})  {'irreducible' if p['irreducible'] else 'reducible'}")
    rep.result = {"dims": dims, "pieces": [
        {"dim": p["dim"], "highest_weight": [rat_str(x) for x in p["highest_weight"]],
         "parity": p["parity"], "irreducible": p["irreducible"]} for p in pieces]}
    if args.expect:
        table = _expected_table(args.expect)
        want = [d for s1, s2, d in table if (s1, s2) == (rest[0], rest[1])] or \
               [d for s1, s2, d in table if not s1]
        if not want:
            raise SpecError(f"{args.expect} has no row for {rest[0]} ; {rest[1]}")
        rep.flag("matches_expected", sorted(dims, reverse=True) == want[0])
        rep.result["expected"] = want[0]


def cmd_homology(args, rep: Report) -> None:
    from .homology import (ChainComplex, cohomology1, doubling_module, homology1,
                           invariant_restricted_h1, proof_diagnostics, shapiro_check)
    A, rest = _algebra(args)
    mode = args.mode
    U = None
    if args.double:
        if rest:
            raise SpecError("give either --double SPEC or a module spec, not both")
        U = seed_module(A, args.double)
    elif len(rest) != 1:
        raise SpecError("homology needs a module spec or --double SPEC")
    if mode in ("invariant", "shapiro", "diagnostics") and U is None:
        raise SpecError(f"--mode {mode} needs --double SPEC")
    if mode in ("homology", "cohomology"):
        M = doubling_module(A, U) if U is not None else parse_module(A, rest[0])
        rep.tick("build")
        rep.flag("representation", not verify_representation(M))
        rep.tick("verify")
        if mode == "homology":
            res = homology1(ChainComplex(A, M), blocks=args.blocks, representatives=args.representatives)
            name = "h1"
        else:
            res = cohomology1(A, M, blocks=args.blocks, representatives=args.representatives)
            name = "H^1"
        rep.tick(mode)
        rep.flag("d_squared_zero", True)  # block construction raises otherwise
        rep.result = res.to_json()
        rep.result["dim"] = M.dim
        rep.say(f"{mode} of {M.provenance} (dim {M.dim}) over {A.name}")
        rep.say(f"kernel {res.kernel_dim}, image {res.image_dim}, {name} = {res.quotient_dim}")
        if args.expect_h1 is not None:
            rep.flag("matches_expected", res.quotient_dim == args.expect_h1)
        return
    from .modules import tensor_modules as tm
    N = tm(U, dual_module(U))
    if mode == "invariant":
        res, data = invariant_restricted_h1(U.algebra, N)
        rep.tick("invariant")
        rep.result = res.to_json()
        rep.result.update({"invariant_kernel": data.kernel_dim, "invariant_image": data.image_dim})
        rep.say(f"invariant-restricted H1 on U (x) U*: {res.kernel_dim} - {res.image_dim} = {res.quotient_dim}")
        rep.say(f"invariant complex: {data.kernel_dim} - {data.image_dim} = {data.quotient_dim}")
        if args.expect_h1 is not None:
            rep.flag("matches_expected", res.quotient_dim == args.expect_h1)
    elif mode == "shapiro":
        r = shapiro_check(A, U, blocks=args.blocks)
        rep.tick("shapiro")
        rep.flag("shapiro", r.ok)
        rep.result = {"direct": r.direct.to_json(), "restricted": r.restricted.to_json(),
                      "invariant_kernel": r.kernel, "invariant_image": r.image}
        rep.say(r.line())
    elif mode == "diagnostics":
        lines = proof_diagnostics(U.algebra, N)
        rep.tick("diagnostics")
        for d in lines:
            rep.say(f"{'PASS' if d.ok else 'FAIL'}  {d.name}: {d.detail}")
            rep.flag(d.name, d.ok)
        rep.result = {"diagnostics": [{"name": d.name, "ok": d.ok, "detail": d.detail} for d in lines]}
    else:
        raise SpecError(f"unknown mode {mode!r}")


def cmd_double(args, rep: Report) -> None:
    from .extensions import doubling
    A, rest = _algebra(args)
    if len(rest) != 1:
        raise SpecError("double needs one Kac module spec")
    V = parse_module(A, rest[0])
    t = rat(args.param)
    rep.tick("build")
    r = doubling(V, t)
    rep.tick("double")
    f = r.flags()
    rep.flag("representation", f["representation"])
    rep.flag("submodule", f["submodule"])
    rep.flag("quotient", f["quotient"])
    # a nonzero class gives a nonsplit, indecomposable W exactly when t != 0
    rep.flag("split_as_expected", f["split"] == (t == 0))
    rep.flag("indecomposable_as_expected", f["indecomposable"] is (t != 0))
    W = r.extension.W
    h1 = r.h1.quotient_dim if r.h1 is not None else None
    rep.result = {"dim": W.dim, "t": rat_str(t), "h1_end": h1,
                  "split": f["split"], "indecomposable": f["indecomposable"], "end_dim": f["end_dim"]}
    rep.say(f"V = {V.provenance} (dim {V.dim}); H^1(L, End V) = {h1}")
    rep.say(f"W(t={rat_str(t)}): dim {W.dim}, {'split' if f['split'] else 'nonsplit'}, "
            f"{r.indecomposability.verdict()}, End dim {f['end_dim']}")
    if args.json:
        doc = dump_module(W)
        doc["report"] = {k: v for k, v in rep.to_json().items() if k != "timings"}
        _write_json(args.json, doc)


def _write_json(path: str, doc: Dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
        fh.write("\n")


COMMANDS = {"algebra": cmd_algebra, "module": cmd_module, "tensor": cmd_tensor,
            "homology": cmd_homology, "double": cmd_double}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superkac", description="Kac modules and H1 for type I superalgebras")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("items", nargs="*", help="FAMILY PARAMS... [module specs]")
        s.add_argument("--json", metavar="PATH", help="write machine-readable output here")
        s.add_argument("--report", metavar="PATH", help="write the run report as JSON")
        s.add_argument("--quiet", action="store_true")
        if name == "tensor":
            s.add_argument("--expect", metavar="TABLE", help="lines 'spec1 ; spec2 = d1 + d2 + ...'")
        if name == "homology":
            s.add_argument("--double", metavar="SPEC", help="use V+(U) (x) V-(U*) for the seed U in SPEC")
            s.add_argument("--mode", default="homology",
                           choices=["homology", "cohomology", "invariant", "shapiro", "diagnostics"])
            s.add_argument("--blocks", default="all", choices=["all", "zero"])
            s.add_argument("--no-representatives", dest="representatives", action="store_false")
            s.add_argument("--expect-h1", type=int, default=None)
        if name == "double":
            s.add_argument("--param", default="1", metavar="t")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    rep = Report(argv)
    try:
        COMMANDS[args.command](args, rep)
    except (SpecError, AlgebraError, ModuleError, OSError, ValueError) as exc:
        print(f"superkac: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "algebra" and args.json:
        _write_json(args.json, rep.result)
    if args.report:
        _write_json(args.report, rep.to_json())
    if not args.quiet:
        print(rep.text())
    return 0 if rep.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
