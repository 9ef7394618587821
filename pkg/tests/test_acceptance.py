"""Acceptance criteria, one test each, timed against its runtime limit.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from wordballs import metrics as M
from wordballs import words as W
from wordballs.suites import SUITES, RunConfig, SuiteResult

CFG = RunConfig()
RESULTS: dict[int, tuple[bool, float, str]] = {}

MUTANT = """
import sys
from fractions import Fraction
from wordballs import metrics, words
_orig = metrics.qb
def qb(x, y):
    if words.is_prefix(x, y):
        return Fraction(1)
    return _orig(x, y)
metrics.qb = qb
from wordballs.cli import main
sys.exit(main(sys.argv[1:]))
"""


def w(text: str) -> W.Word:
    return W.parse_word(text, CFG.alpha)


def failures(res: SuiteResult) -> list[str]:
    return [line for line in res.lines() if "FAIL" in line]


def criterion_1() -> list[str]:
    bad = failures(SUITES["axioms"](CFG)) + failures(SUITES["t1"](CFG))
    corpus = CFG.corpus()
    assert len(corpus) == 31 + 3
    for m in (M.DW, M.D0):
        rep = M.check_t1(m, [(w("a"), w("ab"))])
        if rep.violations != [((w("a"), w("ab")), "i'")]:
            bad.append(f"T1 witness (a, ab) not recorded for {m.name}")
    if not M.check_t1(M.QB, itertools.product(corpus, repeat=2)).ok:
        bad.append("T1 fails for qb")
    return bad


def criterion_2() -> list[str]:
    bad = []
    corpus = CFG.corpus()
    for x, y in itertools.product(corpus, repeat=2):
        if M.dist(M.D0.sym(), x, y) != M.baire(x, y):
            bad.append(f"d0^s != dB at ({x}, {y})")
    a, ab = w("a"), w("ab")
    if not (M.dist(M.DW.sym(), a, ab) == F(1, 4) and M.baire(a, ab) == F(1, 2)):
        bad.append("dw^s(a, ab) regression witness")
    return bad


def criterion_3() -> list[str]:
    bad = failures(SUITES["remarks"](CFG))
    corpus = CFG.corpus()
    eps = W.empty(CFG.alpha)
    for x, y, z in itertools.product(corpus, repeat=3):
        if W.is_strict_prefix(x, y) and W.is_strict_prefix(y, z) and not M.qb(y, z) < M.qb(x, z):
            bad.append(f"discrimination at ({x}, {y}, {z})")
    for x, y in itertools.product(corpus, repeat=2):
        if x != eps and W.is_prefix(x, y) != (M.qb(x, y) < 1):
            bad.append(f"detection at ({x}, {y})")
    if M.qb(eps, w("(a)^w")) != 1:
        bad.append("qb(eps, (a)^w) != 1")
    return bad


def criterion_4() -> list[str]:
    return failures(SUITES["balls"](CFG))


def criterion_5() -> list[str]:
    return failures(SUITES["yoneda"](CFG))


def criterion_6() -> list[str]:
    return failures(SUITES["theorem"](CFG))


def criterion_7() -> list[str]:
    return failures(SUITES["waybelow"](CFG))


def criterion_8() -> list[str]:
    return failures(SUITES["directed"](CFG))


def criterion_9() -> list[str]:
    return failures(SUITES["oracle"](CFG))


def _cli(args: list[str]) -> int:
    cmd = [sys.executable, "-m", "wordballs.cli", *args]
    return subprocess.run(cmd, capture_output=True, text=True).returncode


def criterion_10() -> list[str]:
    bad = []
    for suite in ("axioms", "t1", "remarks", "balls", "yoneda", "theorem"):
        if _cli(["check", suite]) != 0:
            bad.append(f"check {suite} did not exit 0")
    for suite in ("axioms", "remarks", "theorem"):
        cmd = [sys.executable, "-c", MUTANT, "check", suite]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        witness_lines = [ln for ln in proc.stdout.splitlines() if ln.startswith("    [")]
        if proc.returncode != 1 or not witness_lines:
            bad.append(f"mutant survived check {suite} (exit {proc.returncode})")
    return bad


CRITERIA = {
    1: (criterion_1, 60),
    2: (criterion_2, 5),
    3: (criterion_3, 30),
    4: (criterion_4, 60),
    5: (criterion_5, 60),
    6: (criterion_6, 120),
    7: (criterion_7, 120),
    8: (criterion_8, 30),
    9: (criterion_9, 60),
    10: (criterion_10, 300),
}


def evaluate(n: int) -> tuple[bool, float, str]:
    fn, limit = CRITERIA[n]
    start = time.perf_counter()
    bad = fn()
    elapsed = time.perf_counter() - start
    if elapsed >= limit:
        bad.append(f"runtime {elapsed:.1f}s exceeds {limit}s")
    detail = "; ".join(bad[:5])
    return not bad, elapsed, detail


def line(n: int, ok: bool, elapsed: float, detail: str) -> str:
    status = "PASS" if ok else "FAIL"
    text = f"{status} criterion {n} ({elapsed:.2f}s, limit {CRITERIA[n][1]}s)"
    return text + (f": {detail}" if detail else "")


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, elapsed, detail = evaluate(n)
    RESULTS[n] = (ok, elapsed, detail)
    print(line(n, ok, elapsed, detail))
    assert ok, detail


if __name__ == "__main__":
    all_ok = True
    for n in sorted(CRITERIA):
        ok, elapsed, detail = evaluate(n)
        all_ok &= ok
        print(line(n, ok, elapsed, detail), flush=True)
    sys.exit(0 if all_ok else 1)
