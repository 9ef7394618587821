"""Brute-force order theory on small explicit posets.

Definitions are evaluated literally by enumerating every directed subset, so
this module is deliberately naive.  Subsets are ``int`` bitmasks over element
indices internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from . import formal_balls as FB
from .errors import NotAntisymmetric, NotReflexive, NotTransitive, ParseError, TooLarge
from .metrics import Metric
from .words import Word

MAX_ENUM = 12


@dataclass(frozen=True, eq=False)
class FinitePoset:
    elements: tuple
    leq: frozenset

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def up(self) -> tuple[int, ...]:
        """``up[i]`` is the bitmask of indices ``j`` with ``i <= j``."""
        masks = [0] * len(self.elements)
        for a, b in self.leq:
            masks[self.index[a]] |= 1 << self.index[b]
        return tuple(masks)

    def le(self, a, b) -> bool:
        return (a, b) in self.leq

    def __len__(self):
        return len(self.elements)


def validate_poset(elements: Iterable[Hashable], pairs: Iterable[tuple]) -> FinitePoset:
    elems = tuple(dict.fromkeys(elements))
    rel = frozenset(pairs)
    known = set(elems)
    for a, b in rel:
        if a not in known or b not in known:
            raise ValueError(f"pair ({a!r}, {b!r}) mentions an unknown element")
    for a in elems:
        if (a, a) not in rel:
            raise NotReflexive("missing reflexive pair", (a, a))
    for a, b in sorted(rel, key=repr):
        if a != b and (b, a) in rel:
            raise NotAntisymmetric("mutually related distinct elements", (a, b))
    succ: dict = {a: set() for a in elems}
    for a, b in rel:
        succ[a].add(b)
    for a in elems:
        for b in succ[a]:
            for c in succ[b]:
                if c not in succ[a]:
                    raise NotTransitive("transitivity fails", (a, b, c))
    return FinitePoset(elems, rel)


def _members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _check_size(P: FinitePoset, bound: int) -> None:
    if len(P) > bound:
        raise TooLarge(f"poset has {len(P)} elements, enumeration bound is {bound}")


def _directed_masks(P: FinitePoset, bound: int = MAX_ENUM) -> list[int]:
    _check_size(P, bound)
    up = P.up
    out = []
    for mask in range(1, 1 << len(P)):
        idx = _members(mask)
        if all(up[i] & up[j] & mask for k, i in enumerate(idx) for j in idx[k + 1:]):
            out.append(mask)
    return out


def directed_subsets(P: FinitePoset, bound: int = MAX_ENUM) -> list[frozenset]:
    """Every non-empty subset in which each pair has an upper bound inside it."""
    return [frozenset(P.elements[i] for i in _members(m)) for m in _directed_masks(P, bound)]


def _lub_index(P: FinitePoset, mask: int) -> int | None:
    upper = (1 << len(P)) - 1
    for i in _members(mask):
        upper &= P.up[i]
    for u in _members(upper):
        if upper & ~P.up[u] == 0:
            return u
    return None


def lub(P: FinitePoset, subset: Iterable) -> Hashable | None:
    mask = 0
    for e in subset:
        mask |= 1 << P.index[e]
    if not mask:
        raise ValueError("lub of the empty subset is not defined here")
    i = _lub_index(P, mask)
    return None if i is None else P.elements[i]


def is_dcpo(P: FinitePoset, bound: int = MAX_ENUM) -> bool:
    return all(_lub_index(P, m) is not None for m in _directed_masks(P, bound))


def _way_below_matrix(P: FinitePoset, bound: int) -> list[int]:
    """``rows[x]``: bitmask of ``y`` with ``x << y``."""
    directed = [(m, _lub_index(P, m)) for m in _directed_masks(P, bound)]
    n = len(P)
    rows = [0] * n
    for x in range(n):
        for y in range(n):
            ok = True
            for mask, top in directed:
                if top is None or not (P.up[y] >> top) & 1:
                    continue
                # some u in D with x <= u
                if not P.up[x] & mask:
                    ok = False
                    break
            if ok:
                rows[x] |= 1 << y
    return rows


def way_below(P: FinitePoset, x, y, bound: int = MAX_ENUM) -> bool:
    rows = _way_below_matrix(P, bound)
    return bool((rows[P.index[x]] >> P.index[y]) & 1)


def way_below_table(P: FinitePoset, bound: int = MAX_ENUM) -> set[tuple]:
    rows = _way_below_matrix(P, bound)
    return {
        (P.elements[x], P.elements[y])
        for x in range(len(P))
        for y in _members(rows[x])
    }


def is_continuous(P: FinitePoset, bound: int = MAX_ENUM) -> bool:
    """Each ``dd x`` is directed with least upper bound ``x``."""
    rows = _way_below_matrix(P, bound)
    directed = set(_directed_masks(P, bound))
    for x in range(len(P)):
        below = 0
        for y in range(len(P)):
            if (rows[y] >> x) & 1:
                below |= 1 << y
        if below not in directed or _lub_index(P, below) != x:
            return False
    return True


def sample_ball_poset(
    m: Metric,
    words: Sequence[Word],
    radii: Sequence[Fraction],
    bound: int = 4096,
) -> FinitePoset:
    """The grid ``words x radii`` under the formal-ball order for ``m``."""
    balls = [FB.FormalBall(w, r) for w in dict.fromkeys(words) for r in dict.fromkeys(radii)]
    if len(balls) > bound:
        raise TooLarge(f"{len(balls)} balls exceed the bound {bound}")
    pairs = [(a, b) for a in balls for b in balls if FB.ball_leq(m, a, b)]
    return validate_poset(balls, pairs)


def parse_poset(text: str) -> FinitePoset:
    """Read ``element <label>`` / ``leq <a> <b>`` lines; reflexive pairs are added."""
    elements: list[str] = []
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "element" and len(parts) == 2:
            elements.append(parts[1])
        elif parts[0] == "leq" and len(parts) == 3:
            pairs.append((parts[1], parts[2]))
        else:
            raise ParseError(f"line {lineno}: expected 'element <label>' or 'leq <a> <b>'", raw, 0)
    known = set(elements)
    for a, b in pairs:
        for e in (a, b):
            if e not in known:
                raise ParseError(f"undeclared element {e!r}", f"leq {a} {b}", 0)
    pairs.extend((e, e) for e in elements)
    return validate_poset(elements, pairs)


def format_poset(P: FinitePoset) -> str:
    lines = [f"element {e}" for e in P.elements]
    lines += [f"leq {a} {b}" for a in P.elements for b in P.elements if a != b and P.le(a, b)]
    return "\n".join(lines) + "\n"
