import json

import pytest

from hexdimer.cli import (CheckReport, UsageError, main, parse_dims,
                          parse_set, run_check)
from hexdimer.mesh import BoxDims


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zfun_text(capsys):
    code, out, _ = run(capsys, "zfun", "-d", "1,1,1", "-w", "z2z2")
    assert code == 0 and out.strip() == "1 + p"
    code, out, _ = run(capsys, "zfun", "-d", "2,1,1", "-w", "z2z2")
    assert code == 0 and out.strip() == "1 + p + p*q"
    code, out, _ = run(capsys, "zfun", "-d", "2,2,2", "-w", "count")
    assert code == 0 and out.strip() == "20"


def test_zfun_json_and_set(capsys):
    code, out, _ = run(capsys, "zfun", "-d", "2,2,2", "-w", "z2z2",
                       "--set", "q=-1,r=-1,s=-1", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["vars"] == ["p", "q", "r", "s"]
    terms = {tuple(t["exp"]): t["coeff"] for t in obj["terms"]}
    assert terms == {(0, 0, 0, 0): 1, (1, 0, 0, 0): -2, (2, 0, 0, 0): 1}


def test_zfun_methods_agree(capsys):
    _, dp, _ = run(capsys, "zfun", "-d", "2,2,1", "--method", "dp")
    _, en, _ = run(capsys, "zfun", "-d", "2,2,1", "--method", "enumerate")
    assert dp == en


def test_zfun_deterministic(capsys):
    a = run(capsys, "zfun", "-d", "3,2,2", "--format", "json")
    b = run(capsys, "zfun", "-d", "3,2,2", "--format", "json")
    assert a == b


def test_bad_flags(capsys):
    assert run(capsys, "zfun", "-d", "nope")[0] == 2
    assert run(capsys, "zfun", "-d", "1,1,1", "--set", "x=-1")[0] == 2
    assert run(capsys, "zfun", "-d", "1,1,1", "--set", "q=2")[0] == 2
    assert run(capsys, "check", "bogus")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["zfun", "-d", "1,1,1", "--method", "teleport"])
    assert exc.value.code == 2


def test_parse_helpers():
    assert parse_dims("2,3,4") == BoxDims(2, 3, 4)
    assert parse_set("q=-1,p=-p") == {"q": "-1", "p": "-p"}
    assert parse_set(None) == {}
    with pytest.raises(UsageError):
        parse_set("qrs")


def test_check_matrices(capsys):
    code, out, _ = run(capsys, "check", "matrices")
    assert code == 0 and out.startswith("PASS check=matrices")


def test_check_theorem_json(capsys):
    code, out, _ = run(capsys, "check", "theorem", "-d", "1,1,1",
                       "--format", "json")
    assert code == 0
    (rep,) = json.loads(out)
    assert rep["status"] == "pass"
    assert rep["params"]["lhs"] == "1 - 2*p + p^2"


def test_check_minus_one_values(capsys):
    code, out, _ = run(capsys, "check", "minus-one", "-d", "1,1,1",
                       "--format", "json")
    assert code == 0
    (rep,) = json.loads(out)
    assert sorted(rep["params"]["per_two_factor"]) == [-2, -1, -1]


def test_check_fibers(capsys):
    code, out, _ = run(capsys, "check", "fibers", "-d", "1,1,1",
                       "--format", "json")
    assert code == 0
    (rep,) = json.loads(out)
    assert rep["params"]["fiber_sizes"] == [1, 1, 18]


def test_check_all_small(capsys):
    code, out, _ = run(capsys, "check", "all", "--max-dims", "2,2,1",
                       "--order", "3")
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("  ")]
    assert len(lines) == 11 and all(l.startswith("PASS") for l in lines)


def test_failing_check_exits_one(capsys, monkeypatch):
    import hexdimer.cli as cli

    def broken():
        rep = CheckReport("matrices", {})
        rep.fail("synthetic failure")
        return rep

    monkeypatch.setattr(cli, "check_matrices", broken)
    code, out, _ = run(capsys, "check", "matrices")
    assert code == 1 and "FAIL" in out and "synthetic failure" in out


def test_run_check_unknown_name():
    with pytest.raises(UsageError):
        run_check("nope", None, None, None)


def test_render_matching(tmp_path, capsys):
    out_file = tmp_path / "m.svg"
    code, out, _ = run(capsys, "render", "-d", "3,3,3",
                       "--what", "matching", "-o", str(out_file))
    assert code == 0 and "27 rhombi" in out
    svg = out_file.read_text()
    assert svg.startswith("<svg") and svg.count("<polygon") == 27


def test_render_two_factor_and_squish(tmp_path, capsys):
    diag = tmp_path / "d.json"
    diag.write_text(json.dumps({"dims": [1, 1, 1], "heights": [[1]]}))
    out_file = tmp_path / "tf.svg"
    code, out, _ = run(capsys, "render", "--diagram", str(diag),
                       "--what", "twofactor", "-o", str(out_file))
    assert code == 0 and out_file.read_text().count("<polygon") == 6
    code, _, _ = run(capsys, "render", "-d", "2,2,2", "--what", "squish",
                     "-o", str(tmp_path / "s.svg"))
    assert code == 0
    # squish render needs even dims
    assert run(capsys, "render", "-d", "1,1,1", "--what", "squish",
               "-o", str(tmp_path / "x.svg"))[0] == 2


def test_render_deterministic(tmp_path, capsys):
    f1, f2 = tmp_path / "a.svg", tmp_path / "b.svg"
    run(capsys, "render", "-d", "2,2,2", "--what", "matching", "-o", str(f1))
    run(capsys, "render", "-d", "2,2,2", "--what", "matching", "-o", str(f2))
    assert f1.read_bytes() == f2.read_bytes()
