"""Formal balls over words: order, chain lubs, Yoneda limits, way-below.

A formal ball ``(x, r)`` sits below ``(y, s)`` when ``d(x, y) <= r - s``.
Directed sets are handled only through finitely presented ascending chains:

* :class:`FiniteChain` -- an explicit list of balls;
* :class:`ParametricChain` -- balls ``(x_n, s + c * 2^-n)`` for ``n >= 0``,
  with centres ``x_n`` given by a :class:`SequencePresentation`.

Way-below in the infinite poset is answered three-valued: a certificate from
a proven sufficient pattern, a refutation from the necessary condition
``d(x, y) < r - s``, or :class:`Unknown`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from . import metrics as M
from . import words as W
from .errors import (
    MalformedPresentation,
    NotAscending,
    NotLeftKCauchy,
    ParseError,
    PreconditionViolated,
)
from .metrics import QB, AxiomReport, Metric
from .words import Word

#: Sampling horizon for ascending checks on parametric chains.
HORIZON = 64


@dataclass(frozen=True)
class FormalBall:
    center: Word
    radius: Fraction

    def __post_init__(self):
        r = Fraction(self.radius)
        if r < 0:
            raise ValueError(f"negative radius {r}")
        object.__setattr__(self, "radius", r)

    def __str__(self):
        return f"({self.center}, {M.format_ratio(self.radius)})"


# -- sequences of words -------------------------------------------------------


@dataclass(frozen=True)
class Explicit:
    """A finite list standing for an infinite sequence.

    With ``stabilized`` the last word repeats forever; otherwise the whole
    list repeats cyclically.
    """

    words: tuple[Word, ...]
    stabilized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))

    def at(self, n: int) -> Word:
        if self.stabilized:
            return self.words[min(n, len(self.words) - 1)]
        return self.words[n % len(self.words)]


@dataclass(frozen=True)
class PrefixSchedule:
    """``x_n = take(target, scale * n + offset)`` for an infinite ``target``."""

    target: Word
    scale: int = 1
    offset: int = 0

    def length_at(self, n: int) -> int:
        return self.scale * n + self.offset

    def at(self, n: int) -> Word:
        return W.take(self.target, self.length_at(n))


SequencePresentation = Union[Explicit, PrefixSchedule]


def validate_sequence(seq: SequencePresentation) -> None:
    if isinstance(seq, Explicit):
        if not seq.words:
            raise MalformedPresentation("explicit sequence must list at least one word")
        alpha = seq.words[0].alphabet
        if any(w.alphabet != alpha for w in seq.words):
            raise MalformedPresentation("explicit sequence mixes alphabets")
    elif isinstance(seq, PrefixSchedule):
        if seq.target.is_finite:
            raise MalformedPresentation("prefix schedule needs an infinite target")
        if seq.scale < 1 or seq.offset < 0:
            raise MalformedPresentation("prefix lengths must be strictly increasing and non-negative")
    else:
        raise MalformedPresentation(f"not a sequence presentation: {seq!r}")


def is_left_k_cauchy_qb(seq: SequencePresentation) -> bool:
    """Exact left K-Cauchy test in ``(words, q_b)``.

    Prefix schedules always are; a stabilized list is eventually constant;
    a cyclic list is only when all its words coincide.
    """
    validate_sequence(seq)
    if isinstance(seq, PrefixSchedule) or seq.stabilized:
        return True
    first = seq.words[0]
    return all(W.equals(first, w) for w in seq.words[1:])


def yoneda_limit_qb(seq: SequencePresentation) -> Word:
    if not is_left_k_cauchy_qb(seq):
        raise NotLeftKCauchy(f"sequence {format_sequence(seq)!r} is not left K-Cauchy for q_b")
    if isinstance(seq, PrefixSchedule):
        return seq.target
    return seq.words[-1]


def tail_limit_qb(seq: SequencePresentation, y: Word) -> Fraction:
    """``inf_n sup_{m >= n} q_b(x_m, y)`` in closed form."""
    validate_sequence(seq)
    if isinstance(seq, PrefixSchedule):
        # q_b(x_m, y) = 2^-f(m) -> 0 when y is the target; otherwise
        # eventually x_m is not a prefix of y and the value is 1.
        return Fraction(0) if W.equals(seq.target, y) else Fraction(1)
    if seq.stabilized:
        return M.qb(seq.words[-1], y)
    return max(M.qb(w, y) for w in seq.words)


def verify_yoneda_limit(seq: SequencePresentation, limit: Word, probes: Iterable[Word]) -> AxiomReport:
    if not is_left_k_cauchy_qb(seq):
        raise NotLeftKCauchy(f"sequence {format_sequence(seq)!r} is not left K-Cauchy for q_b")
    report = AxiomReport()
    for y in probes:
        report.checked += 1
        tail, direct = tail_limit_qb(seq, y), M.qb(limit, y)
        if tail != direct:
            report.add((y, tail, direct), "yoneda")
    return report


# -- chains of balls ----------------------------------------------------------


@dataclass(frozen=True)
class FiniteChain:
    balls: tuple[FormalBall, ...]

    def __post_init__(self):
        object.__setattr__(self, "balls", tuple(self.balls))


@dataclass(frozen=True)
class ParametricChain:
    """Balls ``(centers.at(n), base + coeff * 2^-n)`` for ``n = 0, 1, ...``."""

    centers: SequencePresentation
    base: Fraction
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    def radius_at(self, n: int) -> Fraction:
        return self.base + self.coeff / 2**n

    def at(self, n: int) -> FormalBall:
        return FormalBall(self.centers.at(n), self.radius_at(n))


ChainPresentation = Union[FiniteChain, ParametricChain]


def chain_elements(chain: ChainPresentation, horizon: int = HORIZON) -> Iterator[tuple[int, FormalBall]]:
    """Presented elements; a parametric chain is cut at index ``horizon``."""
    if isinstance(chain, FiniteChain):
        yield from enumerate(chain.balls)
    else:
        for n in range(horizon + 1):
            yield n, chain.at(n)


def validate_chain(m: Metric, chain: ChainPresentation, horizon: int = HORIZON) -> None:
    """Raise unless the chain is well formed and ascending (parametric: up to ``horizon``)."""
    if isinstance(chain, FiniteChain):
        if not chain.balls:
            raise MalformedPresentation("finite chain must be non-empty")
    elif isinstance(chain, ParametricChain):
        validate_sequence(chain.centers)
        if chain.coeff <= 0 or chain.base < 0:
            raise MalformedPresentation("radius rule needs base >= 0 and coeff > 0")
    else:
        raise MalformedPresentation(f"not a chain presentation: {chain!r}")
    prev = None
    for n, ball in chain_elements(chain, horizon):
        if prev is not None and not ball_leq(m, prev, ball):
            raise NotAscending(f"element {n - 1} is not below element {n}", n - 1)
        prev = ball


def ball_leq(m: Metric, b1: FormalBall, b2: FormalBall) -> bool:
    return M.dist(m, b1.center, b2.center) <= b1.radius - b2.radius


def lub_chain(m: Metric, chain: ChainPresentation) -> FormalBall:
    """Least upper bound: radius infimum and Yoneda limit of the centres."""
    if m.base not in ("qb", "baire") or m.symmetric:
        raise ValueError(f"chain lubs are provided for qb and baire only, not {m}")
    validate_chain(m, chain)
    if isinstance(chain, FiniteChain):
        return chain.balls[-1]
    try:
        center = yoneda_limit_qb(chain.centers)
    except NotLeftKCauchy as exc:
        raise MalformedPresentation(str(exc)) from exc
    return FormalBall(center, chain.base)


def _first_n(coeff: Fraction, t: Fraction) -> int:
    """Smallest ``n >= 0`` with ``coeff * 2^-n <= t`` (``t > 0``)."""
    n = 0
    while coeff > t * 2**n:
        n += 1
    return n


def _stable_index(seq: SequencePresentation, z: Word) -> int:
    """Index from which the prefix relation between ``x_n`` and ``z`` no longer changes."""
    if isinstance(seq, Explicit):
        return len(seq.words) - 1 if seq.stabilized else 0
    if W.equals(seq.target, z):
        return 0
    j = int(W.length(W.lcp(seq.target, z)))
    n = 0
    while seq.length_at(n) <= j:
        n += 1
    return n


def is_chain_upper_bound(m: Metric, chain: ChainPresentation, ball: FormalBall) -> bool:
    """Exact test that ``ball`` lies above every element of ``chain``."""
    if m.base not in ("qb", "baire") or m.symmetric:
        raise ValueError(f"exact upper-bound test is provided for qb and baire only, not {m}")
    if isinstance(chain, FiniteChain):
        return all(ball_leq(m, b, ball) for b in chain.balls)
    z, t = ball.center, ball.radius
    gap = chain.base - t
    seq = chain.centers
    if isinstance(seq, Explicit) and not seq.stabilized:
        # Every listed word recurs with radii arbitrarily close to the base.
        return all(M.dist(m, w, z) <= gap for w in seq.words)
    n0 = _stable_index(seq, z)
    if not all(ball_leq(m, chain.at(n), ball) for n in range(n0 + 1)):
        return False
    if isinstance(seq, Explicit) or not W.equals(seq.target, z):
        # Past n0 the distance is a constant kappa, and
        # kappa <= gap + c*2^-n for all large n iff kappa <= gap.
        kappa = M.dist(m, seq.words[-1] if isinstance(seq, Explicit) else seq.target, z)
        return kappa <= gap
    # Centres are prefixes of z = target: distance is 2^-f(n) for both metrics.
    if gap < 0:
        return False
    if gap == 0:
        # 2^(n - f(n)) <= c for all n; the left side is largest at n = 0.
        return Fraction(1, 2**seq.offset) <= chain.coeff
    n = n0
    while Fraction(1, 2 ** seq.length_at(n)) > gap:
        if not ball_leq(m, chain.at(n), ball):
            return False
        n += 1
    return True


def approximation_chain(b: FormalBall) -> ParametricChain:
    """Canonical ascending chain of balls way-below ``b`` with lub ``b``.

    Finite centre: ``(x, r + 2^-n)``.  Infinite centre: ``(take(x, n), r +
    2 * 2^-n)``; the doubled coefficient keeps every element strictly inside
    the necessary condition ``q_b(x_n, x) < radius - r``.
    """
    x, r = b.center, b.radius
    if x.is_finite:
        return ParametricChain(Explicit((x,), stabilized=True), r, Fraction(1))
    return ParametricChain(PrefixSchedule(x), r, Fraction(2))


# -- way-below ----------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedBelow:
    pattern: str
    via: tuple[FormalBall, FormalBall] | None = None


@dataclass(frozen=True)
class Refuted:
    distance: Fraction
    gap: Fraction


@dataclass(frozen=True)
class Unknown:
    pass


WayBelowVerdict = Union[CertifiedBelow, Refuted, Unknown]


def way_below_refute(m: Metric, b1: FormalBall, b2: FormalBall) -> WayBelowVerdict:
    d = M.dist(m, b1.center, b2.center)
    gap = b1.radius - b2.radius
    if d >= gap:
        return Refuted(d, gap)
    return Unknown()


def _direct_pattern(b1: FormalBall, b2: FormalBall) -> str | None:
    x, y = b1.center, b2.center
    if x.is_finite and y.is_finite and W.equals(x, y) and b1.radius > b2.radius:
        return "P1"
    if x.is_finite and not y.is_finite and W.is_prefix(x, y):
        n = len(x.prefix)
        if b1.radius > b2.radius + Fraction(1, 2**n):
            return "P2"
    return None


def way_below_sufficient_qb(b1: FormalBall, b2: FormalBall) -> WayBelowVerdict:
    """Certify ``b1 << b2`` for ``q_b`` from the proven patterns.

    P1: ``(x, u + v) << (x, u)`` for finite ``x`` and ``v > 0``.
    P2: ``(take(x, n), r + 2^-n + v) << (x, r)`` for infinite ``x``, ``v > 0``.
    Otherwise the order closure ``b1 <= p << q <= b2`` is searched with
    ``q = b2`` and ``p`` chosen as the loosest pattern ball.
    """
    pattern = _direct_pattern(b1, b2)
    if pattern:
        return CertifiedBelow(pattern, (b1, b2))
    w, r1 = b1.center, b1.radius
    y, s = b2.center, b2.radius
    gap = r1 - s
    if y.is_finite:
        # p = (y, s + v) with v the whole distance slack.
        v = gap - M.qb(w, y)
        if v > 0:
            p = FormalBall(y, s + v)
            return CertifiedBelow("P1-closure", (p, b2))
        return Unknown()
    if w.is_finite and W.is_prefix(w, y):
        # Any p = (take(y, n), ...) above b1 needs 2^-len(w) < gap, which is
        # exactly the direct P2 condition already tested.
        return Unknown()
    # q_b(w, take(y, n)) = 1 for every n here.
    slack = gap - 1
    if slack > 0:
        n = _first_n(Fraction(1), slack) + 1  # strict: 2^-n < slack
        p = FormalBall(W.take(y, n), s + slack)
        return CertifiedBelow("P2-closure", (p, b2))
    return Unknown()


@dataclass(frozen=True)
class WitnessFound:
    index: int
    element: FormalBall


@dataclass(frozen=True)
class NoWitness:
    scanned: int


@dataclass(frozen=True)
class NotAboveB2:
    lub: FormalBall


def witness_search_bound(b1: FormalBall, chain: ParametricChain) -> int:
    """Index ``N`` such that if some element ``u_n`` of the chain lies above
    ``b1`` (for ``q_b``), one with ``n <= N`` does.

    Write ``gap = r1 - s`` and ``q_n = q_b(w, x_n)``; the condition is
    ``q_n <= gap - c*2^-n``.  Once the prefix relation between ``w`` and
    ``x_n`` settles, ``q_n`` is either constant (monotone condition) or
    ``2^-k - 2^-f(n)``, whose behaviour is read off the affine ``f``.
    """
    w, gap, c = b1.center, b1.radius - chain.base, chain.coeff
    seq = chain.centers
    if isinstance(seq, Explicit):
        qs = [M.qb(w, x) for x in seq.words]
        if seq.stabilized:
            n0 = len(seq.words) - 1
            q = qs[-1]
            return max(n0, _first_n(c, gap - q)) if q < gap else n0
        period = len(seq.words)
        q = min(qs)
        return (_first_n(c, gap - q) if q < gap else 0) + period
    if not w.is_finite:
        return _first_n(c, gap - 1) if gap > 1 else 0
    k = len(w.prefix)
    n0 = 0
    while seq.length_at(n0) < k:
        n0 += 1
    if not W.is_prefix(w, seq.target):
        return max(n0, _first_n(c, gap - 1)) if gap > 1 else n0
    low = Fraction(1, 2**k) - gap
    if low < 0:
        return max(n0, _first_n(c, -low))
    if seq.scale == 1:
        # (2^-offset - c) * 2^-n >= low is hardest for large n: best at n0.
        return n0
    # A witness needs 2^-f(n) >= c * 2^-n, which fails from some n on.
    n = 0
    while Fraction(1, 2 ** ((seq.scale - 1) * n + seq.offset)) >= c:
        n += 1
    return max(n0, n)


def way_below_witness_check(b1: FormalBall, b2: FormalBall, chain: ChainPresentation):
    """Look for an element of ``chain`` above ``b1``, given ``b2 <= lub(chain)``."""
    top = lub_chain(QB, chain)
    if not ball_leq(QB, b2, top):
        return NotAboveB2(top)
    return find_witness(b1, chain)


def find_witness(b1: FormalBall, chain: ChainPresentation):
    """First element of an already validated chain lying above ``b1``."""
    horizon = witness_search_bound(b1, chain) if isinstance(chain, ParametricChain) else 0
    scanned = 0
    for n, u in chain_elements(chain, horizon):
        scanned += 1
        if ball_leq(QB, b1, u):
            return WitnessFound(n, u)
    return NoWitness(scanned)


@dataclass(frozen=True)
class UpperBoundInDownset:
    bound: FormalBall | None


@dataclass(frozen=True)
class DirectednessFail:
    pair: tuple[FormalBall, FormalBall]


def downset_directedness_check(b: FormalBall, elems: Iterable[FormalBall], max_k: int = 10_000):
    """Common upper bound, itself certified below ``b``, for certified elements.

    Finite centre: ``(x, r + eps)`` with ``eps`` half the smallest slack.
    Infinite centre: the first element of ``approximation_chain(b)`` above
    all of them.
    """
    elems = list(elems)
    for e in elems:
        if not isinstance(way_below_sufficient_qb(e, b), CertifiedBelow):
            raise PreconditionViolated(f"{e} is not certified way-below {b}")
    if not elems:
        return UpperBoundInDownset(None)
    x, r = b.center, b.radius
    if x.is_finite:
        eps = min(e.radius - r - M.qb(e.center, x) for e in elems) / 2
        candidates: Iterable[FormalBall] = [FormalBall(x, r + eps)] if eps > 0 else []
    else:
        chain = approximation_chain(b)
        candidates = (chain.at(k) for k in range(max_k))
    for bound in candidates:
        if all(ball_leq(QB, e, bound) for e in elems):
            if isinstance(way_below_sufficient_qb(bound, b), CertifiedBelow):
                return UpperBoundInDownset(bound)
    pair = (elems[0], elems[-1])
    return DirectednessFail(pair)


# -- literals -----------------------------------------------------------------

_BALL_RE = re.compile(r"\(\s*(?P<w>[^,\s]+)\s*,\s*(?P<r>[^()\s,]+)\s*\)")
_AFFINE_RE = re.compile(r"(?:(?P<a>\d+)\*?)?n(?:\+(?P<b>\d+))?")
_RADII_RE = re.compile(r"(?:(?P<s>[0-9/]+)\+)?(?:(?P<c>[0-9/]+)\*)?2\^-n")


def parse_ball(text: str, alphabet: W.Alphabet = W.DEFAULT_ALPHABET) -> FormalBall:
    m = _BALL_RE.fullmatch(text.strip())
    if not m:
        raise ParseError("malformed ball literal, expected (word, p/q)", text, 0)
    try:
        r = M.parse_ratio(m.group("r"))
    except (ValueError, ZeroDivisionError):
        raise ParseError("malformed radius", text, m.start("r")) from None
    return FormalBall(W.parse_word(m.group("w"), alphabet), r)


def format_ball(b: FormalBall) -> str:
    return str(b)


def _parse_fields(body: str, text: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for tok in body.split():
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}", text, text.find(tok))
        fields[key] = value
    return fields


def _parse_lengths(spec: str, text: str) -> tuple[int, int]:
    m = _AFFINE_RE.fullmatch(spec)
    if not m:
        raise ParseError("lengths must look like a*n+b", text, text.find(spec))
    return int(m.group("a") or 1), int(m.group("b") or 0)


def _format_lengths(seq: PrefixSchedule) -> str:
    s = "n" if seq.scale == 1 else f"{seq.scale}*n"
    return s + (f"+{seq.offset}" if seq.offset else "")


def parse_sequence(text: str, alphabet: W.Alphabet = W.DEFAULT_ALPHABET) -> SequencePresentation:
    """``explicit: w1 w2 ...`` (trailing ``...`` = last word repeats, else the
    list cycles) or ``prefix: target=<word> lengths=a*n+b``."""
    kind, sep, body = text.partition(":")
    kind = kind.strip()
    if not sep:
        raise ParseError("missing ':' after sequence kind", text, len(text))
    if kind == "explicit":
        toks = body.split()
        stabilized = bool(toks) and toks[-1] == "..."
        if stabilized:
            toks = toks[:-1]
        if not toks:
            raise ParseError("explicit sequence needs at least one word", text, len(text))
        return Explicit(tuple(W.parse_word(t, alphabet) for t in toks), stabilized)
    if kind == "prefix":
        fields = _parse_fields(body, text)
        if "target" not in fields:
            raise ParseError("prefix schedule needs target=", text, len(kind))
        a, b = _parse_lengths(fields.get("lengths", "n"), text)
        return PrefixSchedule(W.parse_word(fields["target"], alphabet), a, b)
    raise ParseError(f"unknown sequence kind {kind!r}", text, 0)


def format_sequence(seq: SequencePresentation) -> str:
    if isinstance(seq, Explicit):
        tail = " ..." if seq.stabilized else ""
        return "explicit: " + " ".join(str(w) for w in seq.words) + tail
    return f"prefix: target={seq.target} lengths={_format_lengths(seq)}"


def parse_chain(text: str, alphabet: W.Alphabet = W.DEFAULT_ALPHABET) -> ChainPresentation:
    """``finite: (w1,r1) (w2,r2) ...`` or
    ``param: target=<word> lengths=n radii=s+c*2^-n`` or
    ``param: centers=w1,w2 radii=s+c*2^-n`` (last centre repeats)."""
    kind, sep, body = text.partition(":")
    kind = kind.strip()
    if not sep:
        raise ParseError("missing ':' after chain kind", text, len(text))
    if kind == "finite":
        balls = []
        pos = 0
        for m in _BALL_RE.finditer(body):
            if body[pos:m.start()].strip():
                raise ParseError("unexpected text between balls", text, len(kind) + 1 + pos)
            balls.append(parse_ball(m.group(0), alphabet))
            pos = m.end()
        if body[pos:].strip() or not balls:
            raise ParseError("malformed finite chain", text, len(kind) + 1 + pos)
        return FiniteChain(tuple(balls))
    if kind != "param":
        raise ParseError(f"unknown chain kind {kind!r}", text, 0)
    fields = _parse_fields(body, text)
    rm = _RADII_RE.fullmatch(fields.get("radii", ""))
    if not rm:
        raise ParseError("radii must look like s+c*2^-n", text, text.find("radii"))
    try:
        s = M.parse_ratio(rm.group("s") or "0")
        c = M.parse_ratio(rm.group("c") or "1")
    except (ValueError, ZeroDivisionError):
        raise ParseError("malformed radius rule", text, text.find("radii")) from None
    if "target" in fields:
        a, b = _parse_lengths(fields.get("lengths", "n"), text)
        centers: SequencePresentation = PrefixSchedule(W.parse_word(fields["target"], alphabet), a, b)
    elif "centers" in fields or "center" in fields:
        toks = fields.get("centers", fields.get("center", "")).split(",")
        centers = Explicit(tuple(W.parse_word(t, alphabet) for t in toks), True)
    else:
        raise ParseError("param chain needs target= or centers=", text, len(kind))
    return ParametricChain(centers, s, c)


def format_chain(chain: ChainPresentation) -> str:
    if isinstance(chain, FiniteChain):
        return "finite: " + " ".join(str(b) for b in chain.balls)
    radii = f"radii={M.format_ratio(chain.base)}+{M.format_ratio(chain.coeff)}*2^-n"
    seq = chain.centers
    if isinstance(seq, PrefixSchedule):
        return f"param: target={seq.target} lengths={_format_lengths(seq)} {radii}"
    if not seq.stabilized:
        raise ValueError("cyclic centre lists have no chain literal")
    return "param: centers=" + ",".join(str(w) for w in seq.words) + f" {radii}"
