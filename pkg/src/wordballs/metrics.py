"""The four distances on words, their symmetrizations, and axiom checkers.

Every value is an exact :class:`fractions.Fraction`; nothing here touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import words as W
from .words import Word

BASE_METRICS = ("baire", "dw", "d0", "qb")


def pow2_neg(e: W.ExtNat) -> Fraction:
    """``2**-e`` with ``2**-inf == 0``."""
    if e == W.INFINITY:
        return Fraction(0)
    return Fraction(1, 2 ** int(e))


def baire(x: Word, y: Word) -> Fraction:
    if W.equals(x, y):
        return Fraction(0)
    return pow2_neg(W.length(W.lcp(x, y)))


def dw(x: Word, y: Word) -> Fraction:
    return pow2_neg(W.length(W.lcp(x, y))) - pow2_neg(W.length(x))


def d0(x: Word, y: Word) -> Fraction:
    if W.is_prefix(x, y):
        return Fraction(0)
    return pow2_neg(W.length(W.lcp(x, y)))


def qb(x: Word, y: Word) -> Fraction:
    if W.is_prefix(x, y):
        return pow2_neg(W.length(x)) - pow2_neg(W.length(y))
    return Fraction(1)


@dataclass(frozen=True)
class Metric:
    """One of the base distances, optionally symmetrized by ``max``."""

    base: str
    symmetric: bool = False

    def __post_init__(self):
        if self.base not in BASE_METRICS:
            raise ValueError(f"unknown metric {self.base!r}")

    def sym(self) -> Metric:
        if self.symmetric:
            raise ValueError("symmetrization of an already symmetrized metric")
        return Metric(self.base, True)

    @property
    def name(self) -> str:
        return f"sym-{self.base}" if self.symmetric else self.base

    @classmethod
    def parse(cls, name: str) -> Metric:
        if name.startswith("sym-"):
            return cls(name[4:], True)
        return cls(name)

    def __str__(self):
        return self.name


BAIRE = Metric("baire")
DW = Metric("dw")
D0 = Metric("d0")
QB = Metric("qb")
ALL_BASE = (BAIRE, DW, D0, QB)


def _base(name: str, x: Word, y: Word) -> Fraction:
    # Resolved at call time so the module-level functions can be swapped out.
    if name == "baire":
        return baire(x, y)
    if name == "dw":
        return dw(x, y)
    if name == "d0":
        return d0(x, y)
    return qb(x, y)


def dist(m: Metric, x: Word, y: Word) -> Fraction:
    d = _base(m.base, x, y)
    if m.symmetric:
        return max(d, _base(m.base, y, x))
    return d


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def format_ratio(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_ratio(text: str) -> Fraction:
    q = Fraction(text.strip())
    if q < 0:
        raise ValueError(f"negative value {text!r}")
    return q


def dyadic_form(q: Fraction) -> str | None:
    """``2^-k`` when ``q`` is an exact power of two at most 1."""
    if q.numerator == 1 and is_dyadic(q):
        return f"2^-{q.denominator.bit_length() - 1}"
    return None


def derivation(m: Metric, x: Word, y: Word) -> list[tuple[int, W.ExtNat]]:
    """Signed exponent terms ``(sign, k)`` whose sum of ``sign * 2^-k`` is the distance.

    Returns an empty list when the value is a constant (0, or the ``q_b``
    fallback 1).
    """
    if m.symmetric:
        fwd, back = _base(m.base, x, y), _base(m.base, y, x)
        if back > fwd:
            x, y = y, x
        m = Metric(m.base)
    if m.base == "baire":
        return [] if W.equals(x, y) else [(1, W.length(W.lcp(x, y)))]
    if m.base == "dw":
        return [(1, W.length(W.lcp(x, y))), (-1, W.length(x))]
    if m.base == "d0":
        return [] if W.is_prefix(x, y) else [(1, W.length(W.lcp(x, y)))]
    if W.is_prefix(x, y):
        return [(1, W.length(x)), (-1, W.length(y))]
    return []


@dataclass
class AxiomReport:
    """Outcome of an exhaustive check: instance count and every violation."""

    checked: int = 0
    violations: list[tuple[tuple, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, witness: tuple, axiom: str) -> None:
        self.violations.append((witness, axiom))

    def merge(self, other: AxiomReport) -> AxiomReport:
        self.checked += other.checked
        self.violations.extend(other.violations)
        return self

    def sort(self) -> AxiomReport:
        self.violations.sort(key=lambda v: (v[1], tuple(str(p) for p in v[0])))
        return self


class DistanceTable:
    """Memoized ``dist`` for repeated evaluation over a fixed corpus."""

    def __init__(self, m: Metric):
        self.metric = m
        self._cache: dict[tuple[Word, Word], Fraction] = {}

    def __call__(self, x: Word, y: Word) -> Fraction:
        key = (x, y)
        d = self._cache.get(key)
        if d is None:
            d = self._cache[key] = dist(self.metric, x, y)
        return d


def check_quasi_metric_axioms(m: Metric, triples: Iterable[tuple[Word, Word, Word]]) -> AxiomReport:
    """Exact check of separation (i) and the triangle inequality (ii)."""
    d = DistanceTable(m)
    report = AxiomReport()
    seen_pairs: set[tuple[Word, Word]] = set()
    for x, y, z in triples:
        if (x, y) not in seen_pairs:
            seen_pairs.add((x, y))
            report.checked += 1
            both_zero = d(x, y) == 0 and d(y, x) == 0
            if both_zero != W.equals(x, y):
                report.add((x, y), "i")
        report.checked += 1
        if d(x, y) > d(x, z) + d(z, y):
            report.add((x, y, z), "ii")
    return report.sort()


def check_t1(m: Metric, pairs: Iterable[tuple[Word, Word]]) -> AxiomReport:
    """Exact check of ``x == y  <=>  d(x, y) == 0``."""
    report = AxiomReport()
    for x, y in pairs:
        report.checked += 1
        if (dist(m, x, y) == 0) != W.equals(x, y):
            report.add((x, y), "i'")
    return report.sort()


def check_symmetry(m: Metric, pairs: Iterable[tuple[Word, Word]]) -> AxiomReport:
    report = AxiomReport()
    for x, y in pairs:
        report.checked += 1
        if dist(m, x, y) != dist(m, y, x):
            report.add((x, y), "symmetry")
    return report.sort()
