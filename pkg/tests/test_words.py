import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordballs import words as W
from wordballs.errors import AlphabetMismatch, IndexOutOfRange, ParseError

from conftest import AB, brute_symbols, w, words_ab

LONG = 400


def brute_equal(x: W.Word, y: W.Word) -> bool:
    if W.length(x) != W.length(y):
        return False
    return brute_symbols(x, LONG) == brute_symbols(y, LONG)


def brute_canonical(x: W.Word) -> tuple[str, str]:
    """Smallest (|u| + |v|, u, v) presentation of the same sequence, by search."""
    target = brute_symbols(x, LONG)
    best = None
    n = len(x.prefix) + len(x.period)
    for size in range(1, n + 1):
        for lu in range(size):
            lv = size - lu
            u, v = target[:lu], target[lu:lu + lv]
            cand = W.Word(u, v, x.alphabet)
            if brute_symbols(cand, LONG) == target:
                best = (u, v)
                break
        if best:
            return best
    raise AssertionError("no presentation found")


class TestLength:
    def test_examples(self):
        assert W.length(w("ab")) == 2
        assert W.length(w("eps")) == 0
        assert W.length(w("a(b)^w")) == math.inf


class TestSymbolAt:
    def test_examples(self):
        assert W.symbol_at(w("ab"), 1) == "b"
        assert W.symbol_at(w("a(bc)^w"), 4) == "c"

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            W.symbol_at(w("a"), 3)


class TestTake:
    def test_examples(self):
        assert W.take(w("(ab)^w"), 3) == w("aba")
        assert W.take(w("ab"), 5) == w("ab")
        assert W.take(w("a(bc)^w"), 0) == w("eps")
        assert W.take(w("a(bc)^w"), 0).is_finite

    @given(words_ab(), st.integers(0, 20))
    def test_length_and_prefix(self, x, n):
        t = W.take(x, n)
        assert W.length(t) == min(n, W.length(x))
        assert W.is_prefix(t, x)


class TestEquals:
    def test_examples(self):
        assert W.equals(w("(ab)^w"), W.Word("ab", "ab"))
        assert W.equals(w("ab"), w("ab"))
        assert not W.equals(w("(a)^w"), w("a"))

    def test_bound_example_against_symbolwise_oracle(self):
        x, y = w("(ab)^w"), W.Word("ab", "ab")
        assert W.equality_bound(x, y) == 2 + 2
        assert brute_equal(x, y)

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            W.equals(w("a"), W.Word("a", "", AB))

    @settings(max_examples=300)
    @given(words_ab(), words_ab())
    def test_agrees_with_symbolwise_oracle(self, x, y):
        assert W.equals(x, y) == brute_equal(x, y)
        assert (x == y) == brute_equal(x, y)

    def test_exhaustive_small_periodic(self):
        ws = [W.Word(u, v, AB) for u in ["", "a", "b", "ab", "ba"] for v in ["a", "b", "ab", "ba", "aab", "abab"]]
        for x, y in itertools.product(ws, repeat=2):
            assert W.equals(x, y) == brute_equal(x, y), (x, y)


class TestPrefix:
    def test_examples(self):
        assert W.is_prefix(w("a"), w("ab"))
        assert W.is_prefix(w("eps"), w("a(bc)^w"))
        assert not W.is_prefix(w("(a)^w"), w("aaa"))

    @given(words_ab(), words_ab())
    def test_matches_definition(self, x, y):
        if x.is_finite:
            expected = W.length(x) <= W.length(y) and brute_symbols(y, len(x.prefix)) == x.prefix
        else:
            expected = brute_equal(x, y)
        assert W.is_prefix(x, y) == expected

    @given(words_ab(), words_ab(), words_ab())
    def test_partial_order(self, x, y, z):
        assert W.is_prefix(x, x)
        if W.is_prefix(x, y) and W.is_prefix(y, x):
            assert W.equals(x, y)
        if W.is_prefix(x, y) and W.is_prefix(y, z):
            assert W.is_prefix(x, z)


class TestLcp:
    def test_examples(self):
        assert W.lcp(w("ab"), w("ac")) == w("a")
        assert W.lcp(w("ab"), w("cd")) == w("eps")
        assert W.lcp(w("(a)^w"), w("(a)^w")) == w("(a)^w")

    @settings(max_examples=300)
    @given(words_ab(), words_ab())
    def test_laws(self, x, y):
        p = W.lcp(x, y)
        assert W.is_prefix(p, x) and W.is_prefix(p, y)
        if not W.equals(x, y):
            n = len(p.prefix)
            # the next symbol differs or one word has ended
            if n < W.length(x) and n < W.length(y):
                assert W.symbol_at(x, n) != W.symbol_at(y, n)
            # every common finite prefix is below the lcp
            for k in range(n + 3):
                c = W.take(x, k)
                if W.is_prefix(c, y):
                    assert W.is_prefix(c, p)


class TestCanonicalize:
    def test_examples(self):
        c = W.canonicalize(W.Word("ab", "ab"))
        assert (c.prefix, c.period) == ("", "ab")
        c = W.canonicalize(W.Word("", "abab"))
        assert (c.prefix, c.period) == ("", "ab")
        c = W.canonicalize(W.Word("ab"))
        assert (c.prefix, c.period) == ("ab", "")

    def test_examples_against_search_oracle(self):
        assert brute_canonical(W.Word("ab", "ab")) == ("", "ab")
        assert brute_canonical(W.Word("", "abab")) == ("", "ab")

    @settings(max_examples=300)
    @given(words_ab(infinite=True))
    def test_minimal_and_equivalent(self, x):
        c = W.canonicalize(x)
        assert W.equals(c, x)
        assert (c.prefix, c.period) == brute_canonical(x)
        assert W.canonicalize(c) == c
        for i in range(20):
            assert W.symbol_at(c, i) == W.symbol_at(x, i)


class TestLiterals:
    def test_parse_examples(self):
        assert W.parse_word("eps") == W.Word("")
        p = W.parse_word("ab(cd)^w")
        assert (p.prefix, p.period) == ("ab", "cd")

    @pytest.mark.parametrize("bad", ["a(b", "a)b", "(ab)^", "()^w", "a(b)^wc", "", "(a)(b)^w"])
    def test_parse_errors(self, bad):
        with pytest.raises(ParseError) as info:
            W.parse_word(bad)
        assert info.value.position >= 0

    def test_parse_error_position(self):
        with pytest.raises(ParseError) as info:
            W.parse_word("a(b")
        assert info.value.position == 3

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            W.parse_word("abc", AB)

    @given(words_ab())
    def test_round_trip(self, x):
        text = W.format_word(x)
        assert W.parse_word(text, AB) == x
        assert W.format_word(W.parse_word(text, AB)) == text
        c = W.parse_word(text, AB)
        assert (c.prefix, c.period) == (W.canonicalize(x).prefix, W.canonicalize(x).period)

    def test_alphabet_spec(self):
        assert W.Alphabet.parse("a-c0-1").symbols == "abc01"
        with pytest.raises(ValueError):
            W.Alphabet("aa")
        with pytest.raises(ValueError):
            W.Alphabet("")
