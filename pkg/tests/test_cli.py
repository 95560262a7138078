import csv
import io
import json
import subprocess
import sys

import pytest

from trialgebra import cli
from trialgebra import verify as vf


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    @pytest.mark.parametrize(
        "expr, kind, expected",
        [
            ("(1,2,3)*(4,5,6)", "II", "(14,13,15)"),
            ("inv((2,1,4))", "II", "(0.666666666667,-0.333333333333,-1.33333333333)"),
            ("pi1((2,1,4))", "II", "1.33333333333"),
            ("pi2((2,1,4))", "II", "0.5"),
            ("dot((1,2,3),(4,5,6))", "II", "-6"),
            ("conj((1,2,3))", "II", "(1,-2,-3)"),
            ("(0,0,1)*(0,1,0)", "II", "(0,0,-1)"),
            ("(0,1,0)*(0,1,0)", "I", "(0,0,1)"),
            ("inv((2,3,5))", "III", "(0.5,-0.75,-1.25)"),
            ("2*(1,0,0)", "II", "(2,0,0)"),
            ("((1,2,3)*(4,5,6))*(1,0,0)", "II", "(14,13,15)"),
            ("(1e0, -2.5, .5) * (1,0,0)", "II", "(1,-2.5,0.5)"),
        ],
    )
    def test_values(self, expr, kind, expected, capsys):
        code, out, err = run(["eval", expr, "--kind", kind], capsys)
        assert (code, out, err) == (0, expected + "\n", "")

    def test_left_to_right(self, capsys):
        _, a, _ = run(["eval", "(1,2,3)*(4,5,6)*(0,1,7)"], capsys)
        _, b, _ = run(["eval", "((1,2,3)*(4,5,6))*(0,1,7)"], capsys)
        assert a == b

    @pytest.mark.parametrize("expr", ["(1,2", "foo((1,2,3))", "inv((1,2,3),(1,0,0))", "(1,2,3) (4,5,6)", "", "pi1(2)", "(1,x,3)"])
    def test_parse_errors(self, expr, capsys):
        code, out, err = run(["eval", expr], capsys)
        assert code == 2 and out == "" and "parse error" in err

    @pytest.mark.parametrize("expr, kind", [("inv((1,1,7))", "II"), ("pi1((1,-1,0))", "II"), ("conj((1,2,3))", "I"), ("inv((0,5,5))", "III")])
    def test_domain_errors(self, expr, kind, capsys):
        code, out, err = run(["eval", expr, "--kind", kind], capsys)
        assert code == 3 and out == "" and "domain error" in err

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["eval", "(1,0,0)", "--bogus"])
        assert exc.value.code == 2


class TestVerify:
    def test_single_suite(self, capsys):
        code, out, err = run(["verify", "algebra.associativity", "--trials", "50"], capsys)
        assert code == 0
        data = json.loads(out)
        assert [s["suite"] for s in data["suites"]] == ["algebra.associativity"]
        assert data["failures"] == 0
        assert "pass" in err

    def test_unknown_suite(self, capsys):
        code, out, err = run(["verify", "bogus.suite"], capsys)
        assert code == 2 and out == "" and "bogus.suite" in err

    def test_nothing_selected(self, capsys):
        assert run(["verify"], capsys)[0] == 2

    def test_list(self, capsys):
        code, out, _ = run(["verify", "--list"], capsys)
        assert code == 0 and "projective.geodesics" in out.split()

    def test_json_file(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code, out, _ = run(["verify", "algebra.norm", "--trials", "20", "--json", str(path)], capsys)
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["suites"][0]["suite"] == "algebra.norm"

    def test_failing_suite_exit_code(self, monkeypatch, capsys):
        def broken(ctx):
            ctx.check("always", "ref", 0.0).observe(1.0)

        monkeypatch.setitem(vf.SUITES, "demo.broken", broken)
        assert run(["verify", "demo.broken"], capsys)[0] == 1


def rows(text):
    assert "\r" not in text
    return list(csv.reader(io.StringIO(text)))


class TestSample:
    def test_geodesics(self, capsys):
        code, out, _ = run(["sample", "geodesics", "--A", "1", "--B", "0", "--range", "-2", "2", "--n", "5"], capsys)
        table = rows(out)
        assert code == 0 and table[0] == ["A", "B", "x1", "x2"] and len(table) == 6
        for r in table[1:]:
            x1, x2 = float(r[2]), float(r[3])
            assert x2 == x1 * x1 - 1

    def test_fibers_conformal(self, capsys):
        code, out, _ = run(["sample", "fibers-conformal", "--c", "0", "--n", "3"], capsys)
        table = rows(out)
        assert table[0] == ["c", "x", "y"] and len(table) == 4
        assert all(r[2] == "0.0" for r in table[1:])

    def test_fibers_projective_vertex(self, capsys):
        _, out, _ = run(["sample", "fibers-projective", "--v", "2", "--n", "3", "--range", "-2", "0"], capsys)
        table = rows(out)
        assert table[2] == ["2.0", "-1.0", "0.0"]

    def test_multiple_members(self, capsys):
        _, out, _ = run(["sample", "fibers-conformal", "--c", "1", "2", "--n", "4"], capsys)
        assert len(rows(out)) == 1 + 2 * 4

    def test_sphere(self, capsys):
        _, out, _ = run(["sample", "sphere", "--c", "0.5", "--n", "3"], capsys)
        table = rows(out)
        assert table[0] == ["u", "phi", "eps", "x0", "x1", "x2"]
        for r in table[1:]:
            x0, x1 = float(r[3]), float(r[4])
            assert abs(x0 * x0 - x1 * x1 - 1) <= 1e-12 * max(1, x0 * x0)

    def test_xmin_xmax(self, capsys):
        _, out, _ = run(["sample", "geodesics", "--xmin", "0", "--xmax", "1", "--n", "2", "--A", "0"], capsys)
        assert [r[2] for r in rows(out)[1:]] == ["0.0", "1.0"]

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "s.csv"
        code, out, _ = run(["sample", "geodesics", "--n", "2", "--out", str(path)], capsys)
        assert code == 0 and out == "" and path.read_text().startswith("A,B,x1,x2\n")

    @pytest.mark.parametrize("extra", [["--range", "2", "1"], ["--n", "1"], ["--range", "0", "0"], ["--range", "nan", "1"]])
    def test_invalid(self, extra, capsys):
        code, out, err = run(["sample", "geodesics", *extra], capsys)
        assert code == 2 and out == "" and err

    def test_unknown_family(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["sample", "circles"])
        assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "trialgebra", "eval", "(1,2,3)*(4,5,6)"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout == "(14,13,15)\n"


def test_module_exit_codes():
    proc = subprocess.run([sys.executable, "-m", "trialgebra", "verify", "bogus.suite"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
