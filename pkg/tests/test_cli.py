import json
import subprocess
import sys

import pytest

from superkac.cli import SpecError, main, parse_module
from superkac.kac import sl21_kac
from superkac.modules import dual_module, parity_shift, tensor_modules
from superkac.serialize import (
    SchemaError,
    dump_algebra,
    dump_module,
    load_module,
    modules_identical,
    read_module,
    save_module,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_command(capsys, tmp_path):
    path = tmp_path / "a.json"
    code, out, _ = run(capsys, "algebra", "sl", "2", "1", "--json", str(path))
    assert code == 0 and "dim 8" in out and "super-Jacobi: pass" in out
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == 1 and doc["dim"] == 8
    assert all(isinstance(q[3], str) for q in doc["structure"])


def test_algebra_osp(capsys):
    code, out, _ = run(capsys, "algebra", "osp2", "2")
    assert code == 0 and "dim 19" in out


def test_algebra_sl22_rejected(capsys):
    code, _, err = run(capsys, "algebra", "sl", "2", "2")
    assert code == 2 and "m ≠ n required" in err


def test_module_table1_patterns(capsys):
    code, out, _ = run(capsys, "module", "sl", "2", "1", "kac:0,3")
    assert code == 0 and "0_{6} + 1/2_{5} + 0_{4}" in out and "dim 4" in out
    code, out, _ = run(capsys, "module", "sl", "2", "1", "kac:1,1")
    assert "1/2_{1} + (0+1)_{0} + 1/2_{-1}" in out


def test_module_file_invalid(capsys, tmp_path, sl21):
    doc = dump_module(sl21_kac(sl21, 0, 2))
    doc["action"]["E12"][0][1] = "7"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "module", "sl", "2", "1", f"file:{bad}")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("s1,s2,dims", [
    ("irrep:1,0", "irrep:1,0", [5, 4]),
    ("irrep:1,0", "irrep:0,1", [8, 1]),
    ("irrep:3,0", "irrep:0,1", [16, 5]),
])
def test_tensor_command(capsys, s1, s2, dims):
    code, out, _ = run(capsys, "tensor", "sl", "2", "1", s1, s2)
    assert code == 0 and " + ".join(map(str, dims)) in out


def test_tensor_expect_table(capsys, tmp_path):
    table = tmp_path / "t.txt"
    table.write_text("# sl(2/1) tensor products\nirrep:2,0 ; irrep:0,1 = 12 + 3\nirrep:1,0 ; irrep:1,0 = 5 + 3 + 1\n")
    code, _, _ = run(capsys, "tensor", "sl", "2", "1", "irrep:2,0", "irrep:0,1", "--expect", str(table))
    assert code == 0
    code, out, _ = run(capsys, "tensor", "sl", "2", "1", "irrep:1,0", "irrep:1,0", "--expect", str(table))
    assert code == 1 and "[FAIL] matches_expected" in out


def test_homology_modes(capsys):
    code, out, _ = run(capsys, "homology", "sl", "2", "1", "--double", "kac:0,1/2")
    assert code == 0 and "h1 = 1" in out
    code, out, _ = run(capsys, "homology", "sl", "2", "1", "--double", "kac:0,1/2", "--mode", "shapiro")
    assert code == 0 and "1 = 1 PASS" in out
    code, out, _ = run(capsys, "homology", "sl", "2", "1", "--double", "kac:1,1", "--mode", "diagnostics")
    assert code == 0 and "ratio 1" in out and "2 - 1 = 1" in out
    code, out, _ = run(capsys, "homology", "sl", "2", "1", "--double", "kac:1,1", "--mode", "invariant")
    assert code == 0 and "= 1" in out
    code, out, _ = run(capsys, "homology", "sl", "2", "1", "irrep:1,0", "--mode", "cohomology",
                       "--expect-h1", "1")
    assert code == 0 and "H^1 = 1" in out


def test_double_command(capsys, tmp_path):
    path = tmp_path / "w.json"
    code, out, _ = run(capsys, "double", "sl", "2", "1", "kac:0,1/3", "--param", "1", "--json", str(path))
    assert code == 0 and "dim 8" in out and "nonsplit" in out
    W = read_module(str(path))
    assert W.dim == 8
    code, out, _ = run(capsys, "double", "sl", "2", "1", "kac:0,1/3", "--param", "0")
    assert code == 0 and " split" in out and "decomposable" in out


def test_report_deterministic(capsys, tmp_path):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        main(["tensor", "sl", "2", "1", "irrep:1,0", "irrep:0,1", "--report", str(p), "--quiet"])
    docs = [json.loads(p.read_text()) for p in paths]
    for d in docs:
        d.pop("timings")
        d.pop("command")
    assert docs[0] == docs[1]


def test_spec_grammar(sl21):
    M = parse_module(sl21, "tensor(dual(kac:0,2);shift(kac_minus:1,1))")
    assert M.dim == 4 * 8
    with pytest.raises(SpecError):
        parse_module(sl21, "bogus:1")
    with pytest.raises(SpecError):
        parse_module(sl21, "tensor(kac:0,1)")


@pytest.mark.parametrize("spec", ["kac:1,1", "dual(kac:0,1/3)", "shift(irrep:1,0)", "even_hw:2,1",
                                  "tensor(kac:0,2;kac_minus:0,1)"])
def test_json_round_trip(sl21, tmp_path, spec):
    M = parse_module(sl21, spec)
    p = tmp_path / "m.json"
    save_module(M, str(p))
    M2 = read_module(str(p))
    assert modules_identical(M, M2)
    assert M2.meta.get("keys") == M.meta.get("keys")


def test_round_trip_sparse_and_sl31(sl31):
    M = parse_module(sl31, "kac:1,0@1/3")
    doc = dump_module(M)
    assert "action" in doc
    M2 = load_module(json.loads(json.dumps(doc)))
    assert modules_identical(M, M2)
    big = tensor_modules(M, dual_module(M))  # 576-dim, sparse form
    doc = dump_module(big)
    assert "action_sparse" in doc
    assert modules_identical(big, load_module(doc, verify=False))


def test_schema_errors():
    with pytest.raises(SchemaError):
        load_module({"schema_version": 99, "algebra": {"family": "sl", "params": [2, 1]}, "dim": 1})
    with pytest.raises(SchemaError):
        load_module({"algebra": {"family": "sl", "params": [2, 1]}, "dim": 1, "action": {"Z": [["0"]]}})


def test_hand_written_even_module(tmp_path):
    """Escape hatch: a hand-supplied sl(2) + CY module (spin 1/2, y = 1)."""
    doc = {"schema_version": 1, "algebra": {"family": "sl", "params": [2, 1], "part": "even"}, "dim": 2,
           "action": {"H1": [["1", "0"], ["0", "-1"]], "E12": [["0", "1"], ["0", "0"]],
                      "E21": [["0", "0"], ["1", "0"]], "Y": [["1", "0"], ["0", "1"]]}}
    p = tmp_path / "u.json"
    p.write_text(json.dumps(doc))
    U = read_module(str(p))
    assert U.dim == 2 and U.algebra.is_even()


def test_algebra_dump(sl21):
    d = dump_algebra(sl21)
    assert d["labels"][d["y_index"]] == "Y" and sorted(set(d["z_grades"])) == [-1, 0, 1]


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "superkac.cli", "algebra", "sl", "2", "1", "--quiet"],
                       capture_output=True, text=True)
    assert r.returncode == 0
