import json
from contextlib import nullcontext
import subprocess
import sys
from fractions import Fraction as F

import pytest

from wordballs import formal_balls as FB
from wordballs import metrics as M
from wordballs import words as W
from wordballs.cli import main

SIX = ["axioms", "t1", "remarks", "balls", "yoneda", "theorem"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    return code, json.loads(out or err)


def prefix_flip(original):
    """q_b that answers 1 on the prefix branch."""
    def qb(x, y):
        if W.is_prefix(x, y):
            return F(1)
        return original(x, y)
    return qb


class TestCommands:
    def test_dist(self, capsys):
        assert run(capsys, "dist", "qb", "a", "ab")[1] == "1/4 (= 2^-1 - 2^-2)\n"
        assert run(capsys, "dist", "baire", "ab", "ac")[1] == "1/2 (= 2^-1)\n"
        assert run(capsys, "dist", "qb", "eps", "(a)^w")[1].startswith("1")
        code, d = run_json(capsys, "dist", "sym-dw", "a", "ab")
        assert code == 0 and d["value"] == "1/4"

    def test_ball_leq(self, capsys):
        assert run(capsys, "ball-leq", "qb", "(a,1/2)", "(ab,1/4)")[1].strip() == "true"
        assert run(capsys, "ball-leq", "qb", "(a,1/4)", "(b,1/8)")[1].strip() == "false"

    def test_chain_lub(self, capsys):
        code, out, _ = run(capsys, "chain-lub", "qb", "param: target=(a)^w lengths=n radii=0+1*2^-n")
        assert code == 0 and out.strip() == "((a)^w, 0)"
        code, _, err = run(capsys, "chain-lub", "baire", "param: target=(a)^w lengths=n radii=0+1*2^-n")
        assert code == 1 and err.startswith("NotAscending")

    def test_yoneda_limit(self, capsys):
        assert run(capsys, "yoneda-limit", "prefix: target=(a)^w lengths=n")[1].strip() == "(a)^w"
        code, _, err = run(capsys, "yoneda-limit", "explicit: a b")
        assert code == 1 and err.startswith("NotLeftKCauchy")

    def test_approx_chain(self, capsys):
        out = run(capsys, "approx-chain", "((a)^w,0)")[1].strip()
        assert out == "param: target=(a)^w lengths=n radii=0+2*2^-n"

    def test_way_below(self, capsys):
        code, d = run_json(capsys, "way-below", "(a,3/4)", "(a,1/2)",
                           "--chain", "param: centers=a radii=1/2+1*2^-n")
        assert code == 0
        assert "P1" in json.dumps(d) and "2" in json.dumps(d)

    def test_oracle_file(self, capsys, tmp_path):
        f = tmp_path / "anti.poset"
        f.write_text("element x\nelement y\n")
        code, d = run_json(capsys, "oracle", str(f))
        assert code == 0 and d["dcpo"] and d["continuous"]
        assert sorted(map(tuple, d["leq"])) == [("x", "x"), ("y", "y")]

    def test_oracle_diamond_file(self, capsys, tmp_path):
        f = tmp_path / "diamond.poset"
        f.write_text("element bot\nelement l\nelement r\nelement top\n"
                     "leq bot l\nleq bot r\nleq bot top\nleq l top\nleq r top\n")
        code, out, _ = run(capsys, "oracle", str(f))
        assert code == 0 and "dcpo: yes" in out and "continuous: yes" in out

    def test_oracle_order_failure_exits_1(self, capsys, tmp_path):
        f = tmp_path / "broken.poset"
        f.write_text("element x\nelement y\nelement z\nleq x y\nleq y z\n")
        code, _, err = run(capsys, "oracle", str(f))
        assert code == 1 and err.startswith("NotTransitive")

    def test_oracle_default_grid(self, capsys):
        code, d = run_json(capsys, "oracle")
        assert code == 0 and len(d["elements"]) == 12


class TestStructuredRoundTrip:
    def test_fields_parse_back(self, capsys):
        _, d = run_json(capsys, "dist", "qb", "a", "ab")
        assert M.parse_ratio(d["value"]) == M.qb(W.parse_word(d["x"]), W.parse_word(d["y"]))
        _, d = run_json(capsys, "ball-leq", "qb", "(a,1/2)", "(ab,1/4)")
        assert FB.ball_leq(M.QB, FB.parse_ball(d["b1"]), FB.parse_ball(d["b2"])) == d["verdict"]
        _, d = run_json(capsys, "chain-lub", "qb", "param: target=(a)^w lengths=n radii=0+1*2^-n")
        assert FB.lub_chain(M.QB, FB.parse_chain(d["chain"])) == FB.parse_ball(d["ball"])
        assert FB.parse_ball(d["ball"]) == FB.FormalBall(W.parse_word(d["center"]), M.parse_ratio(d["radius"]))
        _, d = run_json(capsys, "yoneda-limit", "prefix: target=(a)^w lengths=n")
        assert FB.yoneda_limit_qb(FB.parse_sequence(d["sequence"])) == W.parse_word(d["center"])
        _, d = run_json(capsys, "approx-chain", "((ab)^w,1/3)")
        assert FB.lub_chain(M.QB, FB.parse_chain(d["chain"])) == FB.parse_ball(d["ball"])
        _, d = run_json(capsys, "check", "t1")
        assert json.loads(json.dumps(d)) == d and d["suite"] == "t1"


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["dist", "qb", "a(b", "a"],
        ["dist", "qb", "a", "ab", "extra"],
        ["--alphabet", "ab", "dist", "qb", "c", "a"],
        ["ball-leq", "qb", "(a,-1)", "(a,0)"],
        ["oracle", "/nonexistent/file"],
    ])
    def test_input_errors_exit_2(self, capsys, argv):
        with pytest.raises(SystemExit) if argv[-1] == "extra" else nullcontext():
            assert main(argv) == 2

    def test_parse_error_json(self, capsys):
        code, d = run_json(capsys, "dist", "qb", "a(b", "a")
        assert code == 2 and d["error"] == "ParseError"


class TestSuites:
    @pytest.mark.parametrize("suite", SIX)
    def test_suite_passes(self, capsys, suite):
        code, out, _ = run(capsys, "check", suite)
        assert code == 0 and out.rstrip().endswith("OK")

    def test_deterministic(self, capsys):
        a = run(capsys, "--json", "check", "yoneda", "--seed", "7")[1]
        b = run(capsys, "--json", "check", "yoneda", "--seed", "7")[1]
        assert a == b and json.loads(a)["seed"] == 7

    def test_prefix_flip_mutation_is_caught(self, capsys, monkeypatch):
        monkeypatch.setattr(M, "qb", prefix_flip(M.qb))
        for suite in ("axioms", "remarks", "theorem"):
            code, d = run_json(capsys, "check", suite)
            assert code == 1 and not d["ok"], suite
            assert any(c["violations"] for c in d["checks"]), suite


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "wordballs.cli", "dist", "qb", "a", "ab"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and res.stdout.startswith("1/4")
