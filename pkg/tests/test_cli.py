import json
import subprocess
import sys

import pytest

from z2cohom.cli import main, parse_r_values
from z2cohom.cohomology import dumps_profile, profile_from_code, standard_profile_n2
from z2cohom.gf2 import parse_matrix
from z2cohom.classify import is_isotropic_matrix
from z2cohom.hadamard import Subspace


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_profile(path, p):
    path.write_text(dumps_profile(p))
    return str(path)


def test_parse_r_values():
    assert parse_r_values("4") == [4]
    assert parse_r_values("1-3") == [1, 2, 3]
    assert parse_r_values("1,3-4") == [1, 3, 4]
    for bad in ("x", "3-1", "0"):
        with pytest.raises(ValueError):
            parse_r_values(bad)


def test_classify_counts(capsys):
    code, out, _ = run(capsys, "classify", "--r", "4")
    assert code == 0 and json.loads(out)["count"] == 2
    code, out, _ = run(capsys, "classify", "--r", "1")
    assert json.loads(out)["count"] == 1
    code, out, _ = run(capsys, "classify", "--r", "1-5", "--format", "csv")
    rows = out.strip().splitlines()
    assert rows[0] == "r,count,published,published_kind"
    assert [r.split(",")[1] for r in rows[1:]] == ["1", "1", "1", "2", "2"]


def test_classify_budget_refusal(capsys):
    code, _, err = run(capsys, "classify", "--r", "30")
    assert code == 2 and "budget" in err


def test_classify_output_and_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("Z2COHOM_CACHE_DIR", str(tmp_path / "cache"))
    out_file = tmp_path / "r5.json"
    assert run(capsys, "classify", "--r", "5", "--output", str(out_file))[0] == 0
    first = out_file.read_text()
    assert run(capsys, "classify", "--r", "5", "--output", str(out_file), "--deterministic")[0] == 0
    assert out_file.read_text() == first
    assert len(list((tmp_path / "cache").iterdir())) == 1
    code, out, _ = run(capsys, "classify", "--r", "4", "--format", "text")
    assert out.startswith("r=4: 2 classes")


def test_generate(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--family", "A", "--l", "4")
    assert out.split() == ["100", "101", "110", "111", "011", "010", "001"]
    code, out, _ = run(capsys, "generate", "--family", "B", "--l", "4")
    M = parse_matrix(out)
    assert (M.nrows, M.ncols) == (8, 4) and is_isotropic_matrix(M)
    target = tmp_path / "c.txt"
    assert run(capsys, "generate", "--family", "C", "--s", "4", "--t", "4", "-o", str(target))[0] == 0
    M = parse_matrix(target.read_text())
    assert M.ncols == 7 and is_isotropic_matrix(M)
    assert run(capsys, "generate", "--family", "B", "--l", "5")[0] == 3
    assert run(capsys, "generate", "--family", "C", "--s", "4")[0] == 3


def test_isomorphic(capsys, tmp_path):
    a = write_profile(tmp_path / "a.json", profile_from_code(3, 2, Subspace.span([0b1111, 0b0011], 4)))
    b = write_profile(tmp_path / "b.json", profile_from_code(3, 2, Subspace.span([0b1111, 0b0101], 4)))
    code, out, _ = run(capsys, "isomorphic", a, a)
    assert code == 0 and json.loads(out)["permutation"] == [0, 1, 2, 3]
    code, out, _ = run(capsys, "isomorphic", a, b)
    assert code == 0 and json.loads(out)["equivalent"]
    s3 = write_profile(tmp_path / "s3.json", standard_profile_n2(3))
    s3b = write_profile(tmp_path / "s3b.json", standard_profile_n2(3))
    s4 = write_profile(tmp_path / "s4.json", standard_profile_n2(4))
    assert run(capsys, "isomorphic", s3, s3b)[0] == 0
    code, out, _ = run(capsys, "isomorphic", s3, s4)
    assert code == 1 and json.loads(out)["invariant_mismatch"] == "fixed-point counts differ"


def test_isomorphic_input_errors(capsys, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text("{nope")
    good = write_profile(tmp_path / "g.json", standard_profile_n2(2))
    assert run(capsys, "isomorphic", str(junk), good)[0] == 3
    doc = json.loads((tmp_path / "g.json").read_text())
    doc["betti"] = [1, 1, 1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "isomorphic", str(bad), good)
    assert code == 3 and "betti_sum" in err
    assert run(capsys, "isomorphic", str(tmp_path / "missing.json"), good)[0] == 3


def test_verify_weyl(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "weyl")
    assert code == 0 and "2 automorphisms" in out and "24 automorphisms" in out


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == 3


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "z2cohom.cli", "generate", "--family", "stacked-identity", "--r", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.split() == ["10", "01", "10", "01"]
