"""Finite and eventually-periodic infinite words under the prefix order.

An infinite word is stored as ``prefix`` followed by ``period`` repeated
forever; a finite word has an empty ``period``.  Restricting infinite words
to eventually periodic ones keeps equality, prefix and longest common prefix
exactly decidable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import AlphabetMismatch, IndexOutOfRange, ParseError

#: Word lengths are ``int`` or ``math.inf``.
ExtNat = int | float
INFINITY = math.inf


@dataclass(frozen=True)
class Alphabet:
    symbols: str

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet {self.symbols!r}")
        for ch in "()^ ,":
            if ch in self.symbols:
                raise ValueError(f"reserved character {ch!r} in alphabet")

    @classmethod
    def parse(cls, spec: str) -> Alphabet:
        """Build an alphabet from a spec such as ``"a-z0-9"`` or ``"ab"``."""
        out: list[str] = []
        i = 0
        while i < len(spec):
            if i + 2 < len(spec) and spec[i + 1] == "-":
                lo, hi = ord(spec[i]), ord(spec[i + 2])
                if lo > hi:
                    raise ValueError(f"bad range {spec[i:i + 3]!r}")
                out.extend(chr(c) for c in range(lo, hi + 1))
                i += 3
            else:
                out.append(spec[i])
                i += 1
        return cls("".join(dict.fromkeys(out)))

    def __contains__(self, ch: str) -> bool:
        return ch in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)


DEFAULT_ALPHABET = Alphabet.parse("a-z0-9")


def _primitive_root(s: str) -> str:
    n = len(s)
    for p in range(1, n + 1):
        if n % p == 0 and s[:p] * (n // p) == s:
            return s[:p]
    return s


@dataclass(frozen=True, eq=False)
class Word:
    """A word over ``alphabet``: ``prefix`` then ``period`` repeated forever.

    ``Word("ab")`` is finite; ``Word("a", "bc")`` is ``a(bc)^w``.  Python
    equality and hashing compare the denoted sequences, so ``Word("ab", "ab")
    == Word("", "ab")``.  Use :func:`canonicalize` for the minimal form.
    """

    prefix: str = ""
    period: str = ""
    alphabet: Alphabet = field(default=DEFAULT_ALPHABET, repr=False)

    def __post_init__(self):
        for s in (self.prefix, self.period):
            for ch in s:
                if ch not in self.alphabet:
                    raise AlphabetMismatch(
                        f"symbol {ch!r} not in alphabet {self.alphabet.symbols!r}"
                    )

    @property
    def is_finite(self) -> bool:
        return not self.period

    @cached_property
    def _key(self) -> tuple[str, str, str]:
        c = canonicalize(self)
        return (c.prefix, c.period, self.alphabet.symbols)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r})"


def finite(s: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Word:
    return Word(s, "", alphabet)


def periodic(prefix: str, period: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Word:
    if not period:
        raise ValueError("period of an infinite word must be non-empty")
    return Word(prefix, period, alphabet)


def empty(alphabet: Alphabet = DEFAULT_ALPHABET) -> Word:
    return Word("", "", alphabet)


def _check_same(x: Word, y: Word) -> None:
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch(
            f"words over different alphabets: {x.alphabet.symbols!r} vs {y.alphabet.symbols!r}"
        )


def length(w: Word) -> ExtNat:
    return len(w.prefix) if w.is_finite else INFINITY


def symbol_at(w: Word, i: int) -> str:
    if i < 0:
        raise IndexOutOfRange(f"negative index {i}")
    if i < len(w.prefix):
        return w.prefix[i]
    if w.is_finite:
        raise IndexOutOfRange(f"index {i} out of range for word of length {len(w.prefix)}")
    return w.period[(i - len(w.prefix)) % len(w.period)]


def _first(w: Word, n: int) -> str:
    """The first ``min(n, length(w))`` symbols as a string."""
    if n <= len(w.prefix) or w.is_finite:
        return w.prefix[:n]
    k = n - len(w.prefix)
    reps = -(-k // len(w.period))
    return w.prefix + (w.period * reps)[:k]


def take(w: Word, n: int) -> Word:
    if n < 0:
        raise ValueError("prefix length must be non-negative")
    return Word(_first(w, n), "", w.alphabet)


def equality_bound(x: Word, y: Word) -> int:
    """Number of leading symbols that decides equality of two infinite words."""
    return max(len(x.prefix), len(y.prefix)) + math.lcm(len(x.period), len(y.period))


def equals(x: Word, y: Word) -> bool:
    _check_same(x, y)
    if x.is_finite != y.is_finite:
        return False
    if x.is_finite:
        return x.prefix == y.prefix
    b = equality_bound(x, y)
    return _first(x, b) == _first(y, b)


def is_prefix(x: Word, y: Word) -> bool:
    """``x`` is an initial segment of ``y`` (reflexive)."""
    _check_same(x, y)
    if not x.is_finite:
        return equals(x, y)
    n = len(x.prefix)
    if length(y) < n:
        return False
    return _first(y, n) == x.prefix


def is_strict_prefix(x: Word, y: Word) -> bool:
    return is_prefix(x, y) and not equals(x, y)


def lcp(x: Word, y: Word) -> Word:
    """Longest common prefix; for equal infinite words this is the word itself."""
    if equals(x, y):
        return x
    if x.is_finite or y.is_finite:
        bound = int(min(length(x), length(y)))
    else:
        bound = equality_bound(x, y)
    a, b = _first(x, bound), _first(y, bound)
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    return Word(a[:i], "", x.alphabet)


def canonicalize(w: Word) -> Word:
    """Minimal preperiod and primitive period denoting the same sequence."""
    if w.is_finite:
        return w
    u, v = w.prefix, _primitive_root(w.period)
    while u and u[-1] == v[-1]:
        u, v = u[:-1], v[-1] + v[:-1]
    return Word(u, v, w.alphabet)


_SEQ = r"[^()\^\s]+"
_WORD_RE = re.compile(rf"(?P<pre>{_SEQ})?\((?P<per>{_SEQ})\)\^w")


def parse_word(text: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Word:
    """Parse ``eps``, ``abc``, ``(ab)^w`` or ``ab(cd)^w``."""
    s = text.strip()
    if s == "eps":
        return Word("", "", alphabet)
    if not s:
        raise ParseError("empty word literal", text, 0)
    m = _WORD_RE.fullmatch(s)
    if m:
        pre, per = m.group("pre") or "", m.group("per")
    elif re.fullmatch(_SEQ, s):
        pre, per = s, ""
    else:
        pos = _first_bad_position(s)
        raise ParseError("malformed word literal", text, pos)
    for offset, seq in ((0, pre), (len(pre) + 1, per)):
        for i, ch in enumerate(seq):
            if ch not in alphabet:
                raise AlphabetMismatch(
                    f"symbol {ch!r} at position {offset + i} not in alphabet {alphabet.symbols!r}"
                )
    return canonicalize(Word(pre, per, alphabet))


def _first_bad_position(s: str) -> int:
    """Best-effort location of the first character that breaks the grammar."""
    open_at = s.find("(")
    if open_at < 0:
        for i, ch in enumerate(s):
            if ch in ")^ \t":
                return i
        return len(s)
    close_at = s.find(")", open_at)
    if close_at < 0:
        return len(s)
    if close_at == open_at + 1:
        return close_at
    if s[close_at:close_at + 3] != ")^w":
        return close_at + 1
    return close_at + 3


def format_word(w: Word) -> str:
    c = canonicalize(w)
    if c.is_finite:
        return c.prefix or "eps"
    return f"{c.prefix}({c.period})^w"


def all_finite_words(alphabet: Alphabet, max_len: int) -> list[Word]:
    """Every finite word of length <= ``max_len``, shortlex ordered."""
    out = [Word("", "", alphabet)]
    layer = [""]
    for _ in range(max_len):
        layer = [s + ch for s in layer for ch in alphabet.symbols]
        out.extend(Word(s, "", alphabet) for s in layer)
    return out
