import json
import subprocess
import sys
from pathlib import Path

import pytest
from gmpy2 import mpq

from icis.cli import main

ROOT = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


def test_report_example1(capsys):
    code, out, _ = run(capsys, "report", str(ROOT / "problems/example1.germ"))
    f = fields(out)
    assert code == 0
    assert (f["mu"], f["tau"], f["nu"], f["mu_X"]) == ("5", "5", "6", "1")
    assert f["le_greuel"] == "true"


def test_monodromy_example2(capsys):
    code, out, _ = run(capsys, "monodromy", str(ROOT / "problems/example2.germ"), "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == 0
    fr = [mpq(x) for x in rep["results"]["eigenvalue_fractions"]]
    assert len(fr) == 7 and all(9 % int(q.denominator) == 0 for q in fr)


def test_milnor_smooth(capsys):
    code, out, _ = run(capsys, "milnor", str(ROOT / "problems/smooth.germ"))
    assert code == 0 and fields(out)["mu"] == "0"


def test_golden_cusp_report(capsys, monkeypatch):
    monkeypatch.chdir(ROOT)
    code, out, _ = run(capsys, "report", "problems/cusp.germ")
    assert code == 0
    assert out == (DATA / "cusp.report.txt").read_text()


@pytest.mark.parametrize("name,code,err_code", [
    ("bad_syntax.germ", 1, "PARSE"),
    ("not_icis.germ", 2, "NOT-ICIS"),
    ("unstable.germ", 3, "NON-STABILIZATION"),
])
def test_failure_corpora(capsys, name, code, err_code):
    status, out, err = run(capsys, "report", str(DATA / name), "--format", "json")
    rep = json.loads(out)
    assert status == code and rep["status"] == code
    assert rep["error"]["code"] == err_code
    assert err.startswith(f"icis: {err_code}:")


def test_parse_error_position(capsys):
    _, out, _ = run(capsys, "milnor", str(DATA / "bad_syntax.germ"))
    assert "bad_syntax.germ:6:2: implicit multiplication" in out


def test_usage_and_io_errors(capsys):
    assert main(["frobnicate", "x.germ"]) == 1
    status, out, _ = run(capsys, "milnor", str(DATA / "does_not_exist.germ"))
    assert status == 1 and "error: IO:" in out


def test_stdin_and_flags(capsys, monkeypatch):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO("[ring]\nvars = x, y\n[germ]\nx^3 + y^4\n"))
    code, out, _ = run(capsys, "bhat", "-", "--seed", "3", "--trials", "2", "--exact")
    f = fields(out)
    assert code == 0 and f["source"] == "<stdin>"
    assert f["diagnostics.field"] == "QQ"
    assert f["bhat_roots"].count("/") == 6


def test_non_generic_line_exit_code(capsys, tmp_path):
    p = tmp_path / "line.germ"
    p.write_text("[ring]\nvars = x, y, z\n[germ]\nz^2 - x*y\nx^2 + y^2 + z^2\n"
                 "[smoothing]\nalpha = 1, 2\n")
    status, out, _ = run(capsys, "smoothing", str(p))
    assert status == 2 and "NON-GENERIC" in out


def test_explicit_smoothing(capsys, tmp_path):
    p = tmp_path / "explicit.germ"
    p.write_text("[ring]\nvars = x, y, z\n[germ]\nz^2 - x*y\nx^2 + y^2 + z^2\n"
                 "[smoothing]\ntotal = z^2 - x*y\nfunction = x^2 + y^2 + z^2\n")
    status, out, _ = run(capsys, "discriminant", str(p))
    f = fields(out)
    assert status == 0 and f["smoothing_kind"] == "explicit"
    assert (f["mu_X"], f["mu_Z"], f["nu"]) == ("1", "5", "6")


def _walk(v):
    if isinstance(v, dict):
        for x in v.values():
            yield from _walk(x)
    elif isinstance(v, list):
        for x in v:
            yield from _walk(x)
    else:
        yield v


def test_json_schema_and_no_floats(capsys):
    _, out, _ = run(capsys, "report", str(ROOT / "problems/example1.germ"), "--format", "json")
    rep = json.loads(out)
    assert rep["schema"] == "icis-report/1" and rep["command"] == "report"
    assert set(rep) == {"schema", "command", "source", "ring", "germ", "results",
                        "diagnostics", "status"}
    assert not any(isinstance(v, float) for v in _walk(rep))
    for c in rep["results"]["bhat_coeffs"]:
        mpq(c)
    # lossless: the reported roots rebuild the reported coefficients
    import sympy
    s = sympy.Symbol("s")
    prod = sympy.expand(sympy.prod([s - sympy.Rational(r) for r in rep["results"]["bhat_roots"]]))
    coeffs = [sympy.Rational(c) for c in rep["results"]["bhat_coeffs"]]
    assert sympy.Poly(prod, s).all_coeffs()[::-1] == coeffs


def test_byte_identical_reports():
    cmd = [sys.executable, "-m", "icis", "report", "problems/example1.germ", "--format", "json",
           "--seed", "7"]
    a = subprocess.run(cmd, cwd=ROOT, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, cwd=ROOT, capture_output=True, check=True).stdout
    assert a == b and a


def test_process_exit_codes():
    for name, code in (("bad_syntax.germ", 1), ("not_icis.germ", 2), ("unstable.germ", 3)):
        r = subprocess.run([sys.executable, "-m", "icis", "bhat", str(DATA / name)],
                           capture_output=True)
        assert r.returncode == code
