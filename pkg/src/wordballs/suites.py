"""Exhaustive and seeded property suites run by ``wordballs check``."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import domain_oracle as O
from . import formal_balls as FB
from . import metrics as M
from . import words as W
from .errors import WordBallsError
from .metrics import QB, AxiomReport, Metric
from .words import Word

GRID_RADII = tuple(Fraction(x) for x in ("0", "1/8", "1/4", "1/2", "3/4", "1"))
ORACLE_RADII = tuple(Fraction(x) for x in ("0", "1/4", "1/2", "1"))


@dataclass
class RunConfig:
    alphabet: str = "ab"
    max_len: int = 4
    extra: tuple[str, ...] | None = None
    metrics: tuple[Metric, ...] = M.ALL_BASE
    seed: int = 0

    @property
    def alpha(self) -> W.Alphabet:
        return W.Alphabet.parse(self.alphabet)

    def corpus(self) -> list[Word]:
        alpha = self.alpha
        words = W.all_finite_words(alpha, self.max_len)
        if self.extra is None:
            periods = [s for s in alpha.symbols]
            if len(alpha) >= 2:
                periods.append(alpha.symbols[:2])
            extra = [W.periodic("", p, alpha) for p in periods]
        else:
            extra = [W.parse_word(t, alpha) for t in self.extra]
        return list(dict.fromkeys(words + extra))

    def grid(self) -> list[FB.FormalBall]:
        return [FB.FormalBall(w, r) for w in self.corpus() for r in GRID_RADII]


@dataclass
class Check:
    name: str
    report: AxiomReport
    note: str = ""


@dataclass
class SuiteResult:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.report.ok for c in self.checks)

    def add(self, name: str, report: AxiomReport, note: str = "") -> AxiomReport:
        self.checks.append(Check(name, report, note))
        return report

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "checked": c.report.checked,
                    "ok": c.report.ok,
                    "note": c.note,
                    "violations": [
                        {"axiom": ax, "witness": [_show(p) for p in wit]}
                        for wit, ax in c.report.violations
                    ],
                }
                for c in self.checks
            ],
        }

    def lines(self) -> list[str]:
        out = [f"suite {self.suite} (seed {self.seed})"]
        for c in self.checks:
            status = "PASS" if c.report.ok else "FAIL"
            tail = f" -- {c.note}" if c.note else ""
            out.append(f"  {status} {c.name}: {c.report.checked} checked, "
                       f"{len(c.report.violations)} violations{tail}")
            for wit, ax in c.report.violations:
                out.append(f"    [{ax}] " + " ".join(_show(p) for p in wit))
        out.append("OK" if self.ok else "FAILED")
        return out


def _show(p) -> str:
    if isinstance(p, Fraction):
        return M.format_ratio(p)
    return str(p)


def _guard(report: AxiomReport, witness: tuple, fn: Callable[[], bool], axiom: str) -> None:
    """Count one instance; record a violation on False or on a library error."""
    report.checked += 1
    try:
        ok = fn()
    except WordBallsError as exc:
        report.add(witness + (type(exc).__name__,), axiom)
        return
    if not ok:
        report.add(witness, axiom)


# -- suites -------------------------------------------------------------------


def suite_axioms(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("axioms", cfg.seed)
    corpus = cfg.corpus()
    triples = list(itertools.product(corpus, repeat=3))
    for m in cfg.metrics:
        res.add(f"quasi-metric {m}", M.check_quasi_metric_axioms(m, triples))
    if any(m.base == "baire" for m in cfg.metrics):
        res.add("symmetry baire", M.check_symmetry(M.BAIRE, itertools.product(corpus, repeat=2)))
    return res


def _witness_pair(alpha: W.Alphabet) -> tuple[Word, Word]:
    a = alpha.symbols[0]
    b = alpha.symbols[1] if len(alpha) > 1 else a
    return W.finite(a, alpha), W.finite(a + b, alpha)


def suite_t1(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("t1", cfg.seed)
    pairs = list(itertools.product(cfg.corpus(), repeat=2))
    res.add("T1 qb", M.check_t1(QB, pairs))
    x, y = _witness_pair(cfg.alpha)
    for m in (M.DW, M.D0):
        found = M.check_t1(m, pairs)
        expected = AxiomReport(checked=1)
        if ((x, y), "i'") not in found.violations:
            expected.add((x, y), "expected-T1-failure")
        res.add(f"T1 fails for {m}", expected,
                note=f"{len(found.violations)} counterexamples incl. ({x}, {y})")
    return res


def suite_remarks(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("remarks", cfg.seed)
    corpus = cfg.corpus()
    alpha = cfg.alpha
    pairs = list(itertools.product(corpus, repeat=2))

    rep = res.add("sym-d0 equals baire", AxiomReport())
    for x, y in pairs:
        _guard(rep, (x, y), lambda: M.dist(M.D0.sym(), x, y) == M.baire(x, y), "sym-d0")

    x, y = _witness_pair(alpha)
    rep = res.add("sym-dw differs from baire", AxiomReport(),
                  note=f"sym-dw({x},{y})={M.format_ratio(M.dist(M.DW.sym(), x, y))}, "
                       f"baire={M.format_ratio(M.baire(x, y))}")
    _guard(rep, (x, y), lambda: M.dist(M.DW.sym(), x, y) != M.baire(x, y), "sym-dw")
    if alpha.symbols[:1] == "a" and "b" in alpha:
        _guard(rep, (x, y), lambda: M.dist(M.DW.sym(), x, y) == Fraction(1, 4)
               and M.baire(x, y) == Fraction(1, 2), "sym-dw-values")

    rep = res.add("qb discrimination", AxiomReport())
    chains = [
        (x, y, z)
        for x, y, z in itertools.product(corpus, repeat=3)
        if W.is_strict_prefix(x, y) and W.is_strict_prefix(y, z)
    ]
    for x, y, z in chains:
        _guard(rep, (x, y, z), lambda: M.qb(y, z) < M.qb(x, z), "discrimination")

    rep = res.add("qb prefix detection", AxiomReport())
    eps = W.empty(alpha)
    for x, y in pairs:
        if x != eps:
            _guard(rep, (x, y), lambda: W.is_prefix(x, y) == (M.qb(x, y) < 1), "detection")

    rep = res.add("qb empty-word edge case", AxiomReport())
    omega = W.periodic("", alpha.symbols[0], alpha)
    _guard(rep, (eps, omega), lambda: M.qb(eps, omega) == 1, "phi-edge")

    rep = res.add("dyadic range", AxiomReport())
    for m in M.ALL_BASE:
        for x, y in pairs:
            def in_range(m=m, x=x, y=y):
                d = M.dist(m, x, y)
                return 0 <= d <= 1 and M.is_dyadic(d)
            _guard(rep, (m, x, y), in_range, "range")
    return res


def leq_rows(m: Metric, balls: list[FB.FormalBall]) -> list[int]:
    d = M.DistanceTable(m)
    rows = []
    for a in balls:
        row = 0
        for j, b in enumerate(balls):
            if d(a.center, b.center) <= a.radius - b.radius:
                row |= 1 << j
        rows.append(row)
    return rows


def check_ball_order(m: Metric, balls: list[FB.FormalBall]) -> AxiomReport:
    """Reflexivity, antisymmetry, transitivity and radius monotonicity."""
    rows = leq_rows(m, balls)
    rep = AxiomReport()
    n = len(balls)
    for i in range(n):
        rep.checked += 1
        if not (rows[i] >> i) & 1:
            rep.add((balls[i],), "reflexive")
    for i in range(n):
        for j in range(n):
            if not (rows[i] >> j) & 1:
                continue
            rep.checked += 3
            if i != j and (rows[j] >> i) & 1 and balls[i] != balls[j]:
                rep.add((balls[i], balls[j]), "antisymmetric")
            # i <= j implies up(j) is contained in up(i)
            if rows[j] & ~rows[i]:
                k = (rows[j] & ~rows[i]).bit_length() - 1
                rep.add((balls[i], balls[j], balls[k]), "transitive")
            if balls[i].radius < balls[j].radius:
                rep.add((balls[i], balls[j]), "monotone-radius")
    return rep.sort()


def suite_balls(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("balls", cfg.seed)
    res.add("qb ball order on grid", check_ball_order(QB, cfg.grid()))
    return res


def horizon_tail(seq: FB.SequencePresentation, y: Word, horizon: int = FB.HORIZON) -> Fraction:
    """``min_{n <= H/2} max_{n <= m <= H} q_b(x_m, y)`` by direct evaluation."""
    vals = [M.qb(seq.at(m), y) for m in range(horizon + 1)]
    best = None
    for n in range(horizon // 2 + 1):
        v = max(vals[n:])
        best = v if best is None else min(best, v)
    return best


def horizon_slack(seq: FB.SequencePresentation, horizon: int = FB.HORIZON) -> Fraction:
    """Largest gap allowed between the horizon value and the exact limit."""
    if isinstance(seq, FB.PrefixSchedule):
        return Fraction(1, 2 ** seq.length_at(horizon // 2))
    return Fraction(0)


def _random_word(rng: random.Random, alpha: W.Alphabet, infinite: bool) -> Word:
    pre = "".join(rng.choice(alpha.symbols) for _ in range(rng.randint(0, 3)))
    if not infinite:
        return W.finite(pre, alpha)
    per = "".join(rng.choice(alpha.symbols) for _ in range(rng.randint(1, 3)))
    return W.periodic(pre, per, alpha)


def cauchy_presentations(cfg: RunConfig, count: int = 120) -> list[FB.SequencePresentation]:
    """Seeded left K-Cauchy presentations, alternating the two limit cases."""
    rng = random.Random(cfg.seed)
    alpha = cfg.alpha
    out: list[FB.SequencePresentation] = []
    for i in range(count):
        kind = i % 3
        if kind == 0:
            # arbitrary head, then an ascending prefix run that stabilizes
            head = [_random_word(rng, alpha, rng.random() < 0.2) for _ in range(rng.randint(0, 3))]
            top = _random_word(rng, alpha, rng.random() < 0.3)
            cuts = sorted(rng.sample(range(6), rng.randint(1, 3)))
            run = [W.take(top, k) for k in cuts] + [top]
            out.append(FB.Explicit(tuple(head + run), stabilized=True))
        elif kind == 1:
            w = _random_word(rng, alpha, rng.random() < 0.5)
            out.append(FB.Explicit((w,) * rng.randint(1, 3), stabilized=rng.random() < 0.5))
        else:
            target = _random_word(rng, alpha, True)
            out.append(FB.PrefixSchedule(target, rng.randint(1, 3), rng.randint(0, 3)))
    return out


def yoneda_probes(limit: Word, corpus: list[Word], alpha: W.Alphabet) -> list[Word]:
    probes = [limit]
    top = int(min(W.length(limit), 6))
    probes += [W.take(limit, k) for k in range(top + 1)]
    probes += [w for w in corpus if not W.is_prefix(w, limit)][:8]
    others = [w for w in corpus if not w.is_finite and w != limit]
    if others:
        probes.append(others[0])
    probes.append(W.periodic(alpha.symbols[-1] * 2, alpha.symbols[0], alpha))
    return list(dict.fromkeys(probes))


def suite_yoneda(cfg: RunConfig, count: int = 120) -> SuiteResult:
    res = SuiteResult("yoneda", cfg.seed)
    corpus = cfg.corpus()
    alpha = cfg.alpha
    law = res.add("yoneda limit law", AxiomReport())
    oracle = res.add("horizon-64 tail oracle", AxiomReport())
    unique = res.add("yoneda uniqueness", AxiomReport())
    cases = {"case1": 0, "case2": 0}
    for seq in cauchy_presentations(cfg, count):
        cases["case2" if isinstance(seq, FB.PrefixSchedule) else "case1"] += 1
        label = FB.format_sequence(seq)
        try:
            limit = FB.yoneda_limit_qb(seq)
        except WordBallsError as exc:
            law.checked += 1
            law.add((label, type(exc).__name__), "yoneda")
            continue
        probes = yoneda_probes(limit, corpus, alpha)
        rep = FB.verify_yoneda_limit(seq, limit, probes)
        law.checked += rep.checked
        for wit, ax in rep.violations:
            law.add((label,) + wit, ax)
        for y in probes:
            def agrees(y=y):
                gap = abs(horizon_tail(seq, y) - FB.tail_limit_qb(seq, y))
                return gap <= horizon_slack(seq)
            _guard(oracle, (label, y), agrees, "horizon")
        rival = next(w for w in corpus if w != limit)
        _guard(unique, (label, rival),
               lambda: not FB.verify_yoneda_limit(seq, rival, [limit, rival]).ok, "unique")
    res.checks[0].note = f"{cases['case1']} case-1 and {cases['case2']} case-2 presentations"
    return res


def suite_theorem(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("theorem", cfg.seed)
    grid = cfg.grid()
    trip = res.add("lub(approximation_chain(b)) == b", AxiomReport())
    below = res.add("chain elements certified way-below b", AxiomReport())
    least = res.add("lub least among grid competitors", AxiomReport())
    for b in grid:
        chain = FB.approximation_chain(b)
        try:
            top = FB.lub_chain(QB, chain)
        except WordBallsError as exc:
            trip.checked += 1
            trip.add((b, type(exc).__name__), "round-trip")
            continue
        _guard(trip, (b,), lambda: top == b, "round-trip")
        for n, e in FB.chain_elements(chain, FB.HORIZON):
            _guard(below, (b, n),
                   lambda: isinstance(FB.way_below_sufficient_qb(e, b), FB.CertifiedBelow), "certified")
        for c in grid:
            def is_least(c=c):
                return not FB.is_chain_upper_bound(QB, chain, c) or FB.ball_leq(QB, top, c)
            _guard(least, (b, c), is_least, "least")
    return res


def witness_chains(b2: FB.FormalBall) -> list[FB.ChainPresentation]:
    """Ascending chains with lub above ``b2`` (invalid candidates are dropped later)."""
    y, s = b2.center, b2.radius
    alpha = y.alphabet
    one = Fraction(1)
    chains: list[FB.ChainPresentation] = [FB.approximation_chain(b2)]
    for c in ("1/8", "1/4", "1/2", "1", "2", "3", "5"):
        chains.append(FB.ParametricChain(FB.Explicit((y,)), s, Fraction(c)))
    chains.append(FB.FiniteChain((b2,)))
    chains.append(FB.FiniteChain((FB.FormalBall(y, s + 1), b2)))
    chains.append(FB.FiniteChain((FB.FormalBall(y, s + 2), FB.FormalBall(y, s + 1), b2)))
    if s > 0:
        chains.append(FB.ParametricChain(FB.Explicit((y,)), s / 2, one))
    if y.is_finite:
        for ch in alpha.symbols[:2]:
            z = W.finite(y.prefix + ch, alpha)
            t = s - M.qb(y, z)
            if t >= 0:
                chains.append(FB.ParametricChain(FB.Explicit((z,)), t, one))
                chains.append(FB.ParametricChain(FB.Explicit((y, z)), t, Fraction(2)))
    else:
        for a, off, c in ((1, 0, "1"), (1, 0, "2"), (1, 1, "1"), (2, 0, "2"), (1, 2, "1/2"), (3, 1, "1")):
            chains.append(FB.ParametricChain(FB.PrefixSchedule(y, a, off), s, Fraction(c)))
    return chains


def suite_waybelow(cfg: RunConfig, min_chains: int = 10) -> SuiteResult:
    res = SuiteResult("waybelow", cfg.seed)
    grid = cfg.grid()
    consistent = res.add("certified and refuted never coincide", AxiomReport())
    witnessed = res.add("certified pairs have witnesses", AxiomReport())
    coverage = res.add("chain families per certified pair", AxiomReport())
    prepared: dict[FB.FormalBall, list[FB.ChainPresentation]] = {}
    for b2 in grid:
        good = []
        for chain in witness_chains(b2):
            try:
                top = FB.lub_chain(QB, chain)
            except WordBallsError:
                continue
            if FB.ball_leq(QB, b2, top):
                good.append(chain)
        prepared[b2] = good
    patterns: dict[str, int] = {}
    for b1 in grid:
        for b2 in grid:
            cert = FB.way_below_sufficient_qb(b1, b2)
            consistent.checked += 1
            certified = isinstance(cert, FB.CertifiedBelow)
            if certified and isinstance(FB.way_below_refute(QB, b1, b2), FB.Refuted):
                consistent.add((b1, b2), "refuted")
            if not certified:
                continue
            patterns[cert.pattern] = patterns.get(cert.pattern, 0) + 1
            chains = prepared[b2]
            coverage.checked += 1
            if len(chains) < min_chains:
                coverage.add((b2, len(chains)), "too-few-chains")
            for chain in chains:
                witnessed.checked += 1
                if not isinstance(FB.find_witness(b1, chain), FB.WitnessFound):
                    witnessed.add((b1, b2, FB.format_chain(chain)), "witness")
    pat = res.add("pattern coverage", AxiomReport(checked=2),
                  note=", ".join(f"{k}={v}" for k, v in sorted(patterns.items())))
    for name in ("P1", "P2"):
        if patterns.get(name, 0) < 25:
            pat.add((name, patterns.get(name, 0)), "coverage")
    return res


def directedness_balls(grid: list[FB.FormalBall], count: int = 20) -> list[FB.FormalBall]:
    finite = [b for b in grid if b.center.is_finite]
    infinite = [b for b in grid if not b.center.is_finite]
    k_inf = min(len(infinite), count // 4)
    pick_inf = infinite[:: max(1, len(infinite) // max(k_inf, 1))][:k_inf]
    k_fin = count - len(pick_inf)
    pick_fin = finite[:: max(1, len(finite) // k_fin)][:k_fin]
    return pick_fin + pick_inf


def suite_directed(cfg: RunConfig, count: int = 20) -> SuiteResult:
    res = SuiteResult("directed", cfg.seed)
    grid = cfg.grid()
    rep = res.add("down-sets directed", AxiomReport())
    targets = directedness_balls(grid, count)
    for b in targets:
        approx = [FB.approximation_chain(b).at(n) for n in range(6)]
        elems = [e for e in list(dict.fromkeys(grid + approx))
                 if isinstance(FB.way_below_sufficient_qb(e, b), FB.CertifiedBelow)]
        for e1, e2 in itertools.combinations_with_replacement(elems, 2):
            def ok(e1=e1, e2=e2):
                v = FB.downset_directedness_check(b, [e1, e2])
                if not isinstance(v, FB.UpperBoundInDownset) or v.bound is None:
                    return False
                u = v.bound
                return (FB.ball_leq(QB, e1, u) and FB.ball_leq(QB, e2, u)
                        and isinstance(FB.way_below_sufficient_qb(u, b), FB.CertifiedBelow))
            _guard(rep, (b, e1, e2), ok, "directed")
    n_inf = sum(1 for b in targets if not b.center.is_finite)
    rep_cov = res.add("target coverage", AxiomReport(checked=1),
                      note=f"{len(targets)} balls, {n_inf} with infinite centres")
    if n_inf == 0 or n_inf == len(targets):
        rep_cov.add((len(targets), n_inf), "coverage")
    return res


def standard_posets(seed: int, random_count: int = 12) -> dict[str, O.FinitePoset]:
    def chain(n):
        xs = [f"c{i}" for i in range(n)]
        return O.validate_poset(xs, [(xs[i], xs[j]) for i in range(n) for j in range(i, n)])

    def antichain(n):
        xs = [f"a{i}" for i in range(n)]
        return O.validate_poset(xs, [(x, x) for x in xs])

    posets = {
        "chain2": chain(2), "chain5": chain(5), "chain12": chain(12),
        "antichain2": antichain(2), "antichain6": antichain(6),
        "diamond": O.validate_poset(
            ["bot", "l", "r", "top"],
            [(x, x) for x in ("bot", "l", "r", "top")]
            + [("bot", "l"), ("bot", "r"), ("bot", "top"), ("l", "top"), ("r", "top")]),
    }
    rng = random.Random(seed)
    for k in range(random_count):
        n = rng.randint(1, 12)
        rel = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3}
        rel |= {(i, i) for i in range(n)}
        changed = True
        while changed:
            extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
            changed = bool(extra)
            rel |= extra
        posets[f"random{k}"] = O.validate_poset(range(n), rel)
    return posets


def suite_oracle(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("oracle", cfg.seed)
    wb = res.add("way-below equals leq", AxiomReport())
    cont = res.add("continuous and dcpo", AxiomReport())
    for name, P in standard_posets(cfg.seed).items():
        _guard(wb, (name,), lambda: O.way_below_table(P) == set(P.leq), "way-below")
        _guard(cont, (name,), lambda: O.is_dcpo(P) and O.is_continuous(P), "continuous")
    samples = res.add("ball grids are posets", AxiomReport())
    alpha = cfg.alpha
    words = [W.empty(alpha), W.finite(alpha.symbols[0], alpha), W.finite(alpha.symbols[:2], alpha)]
    for m in M.ALL_BASE:
        _guard(samples, (m, "oracle-grid"),
               lambda: len(O.sample_ball_poset(m, words, ORACLE_RADII)) == 12, "poset")
        _guard(samples, (m, "full-grid"),
               lambda: bool(O.sample_ball_poset(m, cfg.corpus(), GRID_RADII)), "poset")
    P = O.sample_ball_poset(QB, words, ORACLE_RADII)
    _guard(wb, ("qb ball grid",), lambda: O.way_below_table(P) == set(P.leq), "way-below")
    return res


SUITES: dict[str, Callable[[RunConfig], SuiteResult]] = {
    "axioms": suite_axioms,
    "t1": suite_t1,
    "remarks": suite_remarks,
    "balls": suite_balls,
    "yoneda": suite_yoneda,
    "theorem": suite_theorem,
    "waybelow": suite_waybelow,
    "directed": suite_directed,
    "oracle": suite_oracle,
}
