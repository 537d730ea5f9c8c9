import io as _io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from petlab import io
from petlab.cli import build_parser, run
from petlab.counting import DensitySet
from petlab.gowers import gowers_norm
from petlab.grid import GridFunction
from petlab.increment import density_iteration, find_power_increment
from petlab.pet import linearize
from petlab.poly_config import Configuration
from petlab.polynomials import ParamPoly

SQ = {"k": 2, "coefficients": [1, 2]}
MAXIMAL_50 = [1, 3, 4, 6, 8, 9, 11, 13, 14, 16, 18, 19, 21, 23, 24, 26, 28, 29, 31, 33, 34, 36,
              38, 39, 41, 43, 44, 46, 48, 49]


@pytest.fixture
def files(tmp_path):
    cfg = tmp_path / "sq.json"
    cfg.write_text(json.dumps(SQ))
    full = tmp_path / "A.txt"
    full.write_text("#N=9\n" + "\n".join(map(str, range(1, 10))) + "\n")
    free = tmp_path / "B.txt"
    free.write_text(io.set_to_rle(DensitySet.from_members(50, MAXIMAL_50)))
    fn = tmp_path / "f.csv"
    fn.write_text("# a function\n0,1\n1,1/2\n3,-1\n")
    return tmp_path


def call(*argv):
    buf = _io.StringIO()
    code = run(list(map(str, argv)), out=buf)
    text = buf.getvalue()
    return code, text


def js(*argv):
    code, text = call(*argv)
    assert code == 0, text
    return json.loads(text)


def test_count_example(files):
    assert js("count", "--set", files / "A.txt", "--config", files / "sq.json") == {"count": 8}


def test_linearize_example(files):
    out = js("linearize", "--config", files / "sq.json", "--mode", "symbolic")
    assert out["d"] == 7 and out["r"] == 3
    assert {"a", "b", "lineage"} <= set(out["forms"][0])
    assert all(isinstance(b, str) for b in out["bad"])
    sys_ = io.linear_system_from_json(out)
    ref = linearize(Configuration.power(2, [1, 2]))
    assert sorted(map(str, sys_.coefficients())) == sorted(map(str, ref.coefficients()))
    assert sys_.lineage == ref.lineage and sys_.r == ref.r
    assert sorted(map(str, sys_.bad_conditions)) == sorted(map(str, ref.bad_conditions))


def test_linearize_concrete(files):
    out = js("linearize", "--config", files / "sq.json", "--mode", "concrete",
             "--fns", f"auto-balanced:{files / 'B.txt'}", "--H", 4)
    assert len(out["h"]) == 3 and len(out["trace"]) == 3
    assert all("/" in v for v in out["trace"][0]["correlations"].values())
    code, text = call("linearize", "--config", files / "sq.json", "--mode", "concrete",
                      "--fns", f"auto-balanced:{files / 'B.txt'}", "--H", 3)
    assert code == 1 and json.loads(text)["error"] == "EmptyParameterRange"


def test_concrete_threads_do_not_change_output(files, monkeypatch):
    argv = ("linearize", "--config", files / "sq.json", "--mode", "concrete",
            "--fns", files / "f.csv", "--N", 60, "--H", 4)
    monkeypatch.setenv("PETLAB_THREADS", "1")
    a = call(*argv)
    monkeypatch.setenv("PETLAB_THREADS", "4")
    assert call(*argv) == a
    monkeypatch.setenv("PETLAB_THREADS", "zero")
    assert call(*argv)[0] == 1


def test_verify_example():
    out = js("verify", "--suite", "vdc", "--trials", 1000, "--seed", 0)
    assert out["passed"] == 1000 and out["failed"] == 0


def test_gowers_outputs(files):
    f = files / "f.csv"
    out = js("gowers", "--fn", f, "--d", 3)
    ref = gowers_norm(io.load_function(f), 3)
    assert io.norm_from_json(out) == ref
    assert "value" not in out
    assert "value" in js("gowers", "--fn", f, "--d", 2, "--float")
    assert js("gowers", "--fn", f, "--d", 1, "--local", "0,2")["power"] == "1/4"
    sc = js("gowers", "--fn", f, "--d", 2, "--scale", 2)
    assert all(isinstance(p, str) for _, p in sc["powers"])


def test_expand_and_csv(files):
    out = js("expand", "--set", files / "A.txt", "--config", files / "sq.json")
    assert out["total"] == "8/1" and out["count"] == 8 and len(out["terms"]) == 8
    code, text = call("--format", "csv", "expand", "--set", files / "A.txt",
                      "--config", files / "sq.json")
    assert code == 0 and text.splitlines()[0] == "label,value"
    assert call("--format", "csv", "count", "--set", files / "A.txt",
                "--config", files / "sq.json")[0] == 2


def test_dioph_and_bohr():
    assert js("dioph", "min", "--alpha", "5/7", "--k", 2, "--Q", 6)["q"] == 2
    tr = js("dioph", "recur", "--alphas", "1/2,1/3", "--k", 2, "--Q", 36)
    assert tr["q"] == 2 and tr["max_distance"] == "1/3" and tr["within_budget"]
    back = io.recurrence_from_json(tr, [Fraction(1, 2), Fraction(1, 3)], 2, 36)
    assert back.q == 2 and back.inflation_holds()
    b = js("bohr", "--freqs", "1/4", "--eta", "3/10", "--N", 100, "--k", 2, "--mode", "optimal")
    assert b["step"] == 4 and b["length"] == 25 and b["verified"]
    assert io.progression_from_json(b).elements()[0] == -48
    f = js("bohr", "--freqs", "0.25", "--eta", "0.3", "--N", 100, "--k", 2, "--mode", "optimal")
    assert f["rationalized"][0] == {"input": "0.25", "value": "1/4"} and f["step"] == 4


def test_increment_and_iterate(files):
    out = js("increment", "--set", files / "B.txt", "--k", 2, "--min-len", 3)
    ref = find_power_increment(DensitySet.from_members(50, MAXIMAL_50), 2, 3)
    assert io.increment_from_json(out["increment"]) == ref
    steps = js("iterate", "--set", files / "B.txt", "--config", files / "sq.json")
    assert isinstance(steps, list) and steps[-1]["stop"] == "no increment"
    tr = io.trajectory_from_json(steps)
    assert tr.densities() == density_iteration(DensitySet.from_members(50, MAXIMAL_50),
                                               Configuration.power(2, [1, 2])).densities()


def test_probe(files):
    out = js("probe", "--config", files / "sq.json", "--N", 60, "--H", 3, "--d", 3,
             "--fns", f"auto-balanced:{files / 'B.txt'}")
    assert out["experimental"] is True and "lhs" in out and "rhs" in out


def test_usage_errors(files):
    assert call()[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("count", "--set", files / "A.txt")[0] == 2
    assert call("gowers", "--fn", files / "f.csv", "--d", 0)[0] == 2
    assert call("verify", "--suite", "nope")[0] == 2


def test_domain_errors(files, tmp_path):
    code, text = call("count", "--set", tmp_path / "missing.txt", "--config", files / "sq.json")
    assert code == 1 and json.loads(text)["error"] == "FileNotFoundError"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"k": 2, "coefficients": [1, 1]}))
    code, text = call("count", "--set", files / "A.txt", "--config", bad)
    assert code == 1 and "invalid configuration" in json.loads(text)["message"]
    code, text = call("bohr", "--freqs", "1/4", "--eta", "9/10", "--N", 10, "--k", 2)
    assert code == 1


def test_help_lists_every_flag(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "cmd")
    for name, p in sub.choices.items():
        text = p.format_help()
        for action in p._actions:
            for opt in action.option_strings:
                assert opt in text, (name, opt)


def test_determinism(files):
    argv = ("linearize", "--config", files / "sq.json")
    assert call(*argv) == call(*argv)
    assert call("verify", "--suite", "colex", "--trials", 50) == \
        call("verify", "--suite", "colex", "--trials", 50)


def test_exact_output_has_no_floats(files):
    def walk(o):
        if isinstance(o, float):
            raise AssertionError(o)
        if isinstance(o, dict):
            for v in o.values():
                walk(v)
        if isinstance(o, list):
            for v in o:
                walk(v)
    walk(js("linearize", "--config", files / "sq.json"))
    walk(js("gowers", "--fn", files / "f.csv", "--d", 3, "--scale", 2))
    walk(js("expand", "--set", files / "A.txt", "--config", files / "sq.json"))


def test_console_script(files):
    r = subprocess.run([sys.executable, "-m", "petlab.cli", "count", "--set",
                        str(files / "A.txt"), "--config", str(files / "sq.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout) == {"count": 8}


# ---------------------------------------------------------------------------
# formats

def test_set_formats():
    A = io.parse_set("#N=10\n# comment\n2\n5\n\n9\n")
    assert A.N == 10 and list(A) == [2, 5, 9]
    assert io.parse_set(io.set_to_rle(A)) == A
    assert list(io.parse_set("#N=8\n@rle 1,2,3,2\n")) == [2, 3, 7, 8]
    with pytest.raises(ValueError):
        io.parse_set("1\n2\n")
    with pytest.raises(ValueError):
        io.parse_set("#N=4\nfoo\n")


@given(st.integers(1, 80), st.data())
def test_rle_round_trip(N, data):
    A = DensitySet.from_members(N, data.draw(st.sets(st.integers(1, N))))
    assert io.parse_set(io.set_to_rle(A)) == A


@given(st.builds(GridFunction, st.integers(-20, 20),
                 st.lists(st.fractions(max_denominator=50), max_size=10)))
def test_function_csv_round_trip(f):
    assert io.parse_function_csv(io.function_to_csv(f)) == f


def test_function_csv_errors():
    with pytest.raises(ValueError, match="line 2"):
        io.parse_function_csv("1,1\n2;3\n")


def test_dumps():
    assert io.dumps({"b": Fraction(1, 3), "a": (1, 2), "c": ParamPoly.var(1)}) == \
        '{"a": [1, 2], "b": "1/3", "c": "h1"}'
    with pytest.raises(TypeError):
        io.dumps({"x": object()})
