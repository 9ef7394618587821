from __future__ import annotations

import pytest
from hypothesis import strategies as st

from wordballs import words as W
from wordballs.suites import RunConfig

AB = W.Alphabet("ab")


def w(text: str, alphabet: W.Alphabet = W.DEFAULT_ALPHABET) -> W.Word:
    return W.parse_word(text, alphabet)


def brute_symbols(word: W.Word, n: int) -> str:
    """First ``n`` symbols by unrolling the period by hand."""
    out = list(word.prefix)
    i = 0
    while word.period and len(out) < n:
        out.append(word.period[i % len(word.period)])
        i += 1
    return "".join(out[:n])


@st.composite
def words_ab(draw, infinite: bool | None = None):
    pre = draw(st.text(alphabet="ab", max_size=5))
    inf = draw(st.booleans()) if infinite is None else infinite
    per = draw(st.text(alphabet="ab", min_size=1, max_size=4)) if inf else ""
    return W.Word(pre, per, AB)


@pytest.fixture(scope="session")
def cfg() -> RunConfig:
    return RunConfig()


@pytest.fixture(scope="session")
def corpus(cfg) -> list[W.Word]:
    return cfg.corpus()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n, *mod.RESULTS[n]))
