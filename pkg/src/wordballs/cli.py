"""Command-line front end.

Exit status: 0 success, 1 property or contract violation, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import domain_oracle as O
from . import formal_balls as FB
from . import metrics as M
from . import suites as S
from . import words as W
from .errors import AlphabetMismatch, ParseError, TooLarge, WordBallsError

METRIC_CHOICES = ("baire", "dw", "d0", "qb", "sym-baire", "sym-dw", "sym-d0", "sym-qb")
INPUT_ERRORS = (ParseError, AlphabetMismatch, TooLarge)


class _Fail(Exception):
    """Carries an exit status out of a command handler."""

    def __init__(self, status: int, payload: dict, text: str):
        self.status, self.payload, self.text = status, payload, text


def format_distance(m: M.Metric, x: W.Word, y: W.Word) -> tuple[Fraction, str, str | None]:
    value = M.dist(m, x, y)
    terms = [(sign, k) for sign, k in M.derivation(m, x, y) if k != W.INFINITY]
    expr = None
    if value != 0 and terms and not (len(terms) == 1 and terms[0] == (1, 0)):
        expr = ""
        for i, (sign, k) in enumerate(terms):
            op = ("- " if sign < 0 else "+ ") if i else ("-" if sign < 0 else "")
            expr += (" " if i else "") + f"{op}2^-{int(k)}"
    text = M.format_ratio(value) + (f" (= {expr})" if expr else "")
    return value, text, expr


def _verdict_dict(v) -> dict:
    if isinstance(v, FB.CertifiedBelow):
        d = {"verdict": "CertifiedBelow", "pattern": v.pattern}
        if v.via:
            d["via"] = [str(v.via[0]), str(v.via[1])]
        return d
    if isinstance(v, FB.Refuted):
        return {"verdict": "Refuted", "distance": M.format_ratio(v.distance), "gap": M.format_ratio(v.gap)}
    return {"verdict": "Unknown"}


def _verdict_text(v) -> str:
    if isinstance(v, FB.CertifiedBelow):
        return f"CertifiedBelow({v.pattern})"
    if isinstance(v, FB.Refuted):
        return f"Refuted(d={M.format_ratio(v.distance)}, r-s={M.format_ratio(v.gap)})"
    return "Unknown"


def cmd_dist(args) -> tuple[dict, str]:
    m = M.Metric.parse(args.metric)
    x, y = W.parse_word(args.x, args.alpha), W.parse_word(args.y, args.alpha)
    value, text, expr = format_distance(m, x, y)
    payload = {
        "metric": m.name, "x": str(x), "y": str(y),
        "value": M.format_ratio(value), "dyadic": M.dyadic_form(value), "derivation": expr,
    }
    return payload, text


def cmd_ball_leq(args) -> tuple[dict, str]:
    m = M.Metric.parse(args.metric)
    b1, b2 = FB.parse_ball(args.b1, args.alpha), FB.parse_ball(args.b2, args.alpha)
    verdict = FB.ball_leq(m, b1, b2)
    return {"metric": m.name, "b1": str(b1), "b2": str(b2), "verdict": verdict}, str(verdict).lower()


def cmd_chain_lub(args) -> tuple[dict, str]:
    m = M.Metric.parse(args.metric)
    chain = FB.parse_chain(args.chain, args.alpha)
    top = FB.lub_chain(m, chain)
    payload = {"metric": m.name, "chain": FB.format_chain(chain),
               "center": str(top.center), "radius": M.format_ratio(top.radius), "ball": str(top)}
    return payload, str(top)


def cmd_yoneda_limit(args) -> tuple[dict, str]:
    seq = FB.parse_sequence(args.sequence, args.alpha)
    limit = FB.yoneda_limit_qb(seq)
    return {"sequence": FB.format_sequence(seq), "center": str(limit)}, str(limit)


def cmd_approx_chain(args) -> tuple[dict, str]:
    b = FB.parse_ball(args.ball, args.alpha)
    chain = FB.approximation_chain(b)
    text = FB.format_chain(chain)
    return {"ball": str(b), "chain": text}, text


def cmd_way_below(args) -> tuple[dict, str]:
    b1, b2 = FB.parse_ball(args.b1, args.alpha), FB.parse_ball(args.b2, args.alpha)
    refute = FB.way_below_refute(M.QB, b1, b2)
    suff = FB.way_below_sufficient_qb(b1, b2)
    payload = {"b1": str(b1), "b2": str(b2), "refute": _verdict_dict(refute), "sufficient": _verdict_dict(suff)}
    lines = [f"refutation: {_verdict_text(refute)}", f"patterns: {_verdict_text(suff)}"]
    if args.chain:
        chain = FB.parse_chain(args.chain, args.alpha)
        w = FB.way_below_witness_check(b1, b2, chain)
        if isinstance(w, FB.WitnessFound):
            payload["witness"] = {"verdict": "WitnessFound", "index": w.index, "element": str(w.element)}
            lines.append(f"witness: WitnessFound(n={w.index}, {w.element})")
        elif isinstance(w, FB.NoWitness):
            payload["witness"] = {"verdict": "NoWitness", "scanned": w.scanned}
            lines.append(f"witness: NoWitness (scanned {w.scanned})")
        else:
            payload["witness"] = {"verdict": "NotAboveB2", "lub": str(w.lub)}
            lines.append(f"witness: NotAboveB2 (lub {w.lub})")
    return payload, "\n".join(lines)


def cmd_check(args) -> tuple[dict, str]:
    metrics = tuple(M.Metric.parse(n) for n in args.metric) if args.metric else M.ALL_BASE
    cfg = S.RunConfig(alphabet=args.alphabet or "ab", max_len=args.max_len,
                      extra=tuple(args.extra) if args.extra else None,
                      metrics=metrics, seed=args.seed)
    names = list(S.SUITES) if args.suite == "all" else [args.suite]
    results = [S.SUITES[n](cfg) for n in names]
    payload = results[0].to_dict() if len(results) == 1 else {
        "suite": "all", "seed": cfg.seed, "ok": all(r.ok for r in results),
        "suites": [r.to_dict() for r in results]}
    text = "\n".join(line for r in results for line in r.lines())
    if not all(r.ok for r in results):
        raise _Fail(1, payload, text)
    return payload, text


def cmd_oracle(args) -> tuple[dict, str]:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            P = O.parse_poset(fh.read())
        source = args.file
    else:
        m = M.Metric.parse(args.grid_metric)
        ws = [W.parse_word(t, args.alpha) for t in args.words.split(",")]
        rs = [M.parse_ratio(t) for t in args.radii.split(",")]
        P = O.sample_ball_poset(m, ws, rs)
        source = f"{m} grid"
    dcpo, cont = O.is_dcpo(P), O.is_continuous(P)
    wb = O.way_below_table(P)
    names = [str(e) for e in P.elements]
    leq = sorted([str(a), str(b)] for a, b in P.leq)
    wb_list = sorted([str(a), str(b)] for a, b in wb)
    payload = {"source": source, "elements": names, "valid": True, "dcpo": dcpo,
               "continuous": cont, "leq": leq, "way_below": wb_list,
               "way_below_equals_leq": wb == set(P.leq)}
    lines = [f"order: valid ({len(names)} elements)",
             f"dcpo: {'yes' if dcpo else 'no'}, continuous: {'yes' if cont else 'no'}",
             f"way-below equals leq: {'yes' if wb == set(P.leq) else 'no'}",
             "way-below table:"]
    lines += [f"  {a} << {b}" for a, b in wb_list]
    return payload, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wordballs", description=__doc__)
    p.add_argument("--alphabet", default=None, help="alphabet spec such as a-z0-9 or ab")
    p.add_argument("--json", action="store_true", help="emit one JSON object")
    # Repeated on every subcommand; SUPPRESS keeps a flag given before the
    # subcommand from being reset.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dist", parents=[common], help="exact distance between two words")
    sp.add_argument("metric", choices=METRIC_CHOICES)
    sp.add_argument("x")
    sp.add_argument("y")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("ball-leq", parents=[common], help="compare two formal balls")
    sp.add_argument("metric", choices=METRIC_CHOICES)
    sp.add_argument("b1")
    sp.add_argument("b2")
    sp.set_defaults(func=cmd_ball_leq)

    sp = sub.add_parser("chain-lub", parents=[common], help="least upper bound of a presented chain")
    sp.add_argument("metric", choices=("qb", "baire"))
    sp.add_argument("chain")
    sp.set_defaults(func=cmd_chain_lub)

    sp = sub.add_parser("yoneda-limit", parents=[common], help="Yoneda limit of a q_b sequence")
    sp.add_argument("sequence")
    sp.set_defaults(func=cmd_yoneda_limit)

    sp = sub.add_parser("approx-chain", parents=[common], help="canonical approximating chain of a ball")
    sp.add_argument("ball")
    sp.set_defaults(func=cmd_approx_chain)

    sp = sub.add_parser("way-below", parents=[common], help="way-below verdicts for q_b balls")
    sp.add_argument("b1")
    sp.add_argument("b2")
    sp.add_argument("--chain", help="directed set to search for a witness")
    sp.set_defaults(func=cmd_way_below)

    sp = sub.add_parser("check", parents=[common], help="run a property suite")
    sp.add_argument("suite", choices=list(S.SUITES) + ["all"])
    sp.add_argument("--metric", action="append", choices=METRIC_CHOICES)
    sp.add_argument("--max-len", type=int, default=4)
    sp.add_argument("--extra", nargs="*", help="infinite words added to the corpus")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("oracle", parents=[common], help="brute-force finite poset oracle")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--grid-metric", default="qb", choices=METRIC_CHOICES)
    sp.add_argument("--words", default="eps,a,ab")
    sp.add_argument("--radii", default="0,1/4,1/2,1")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.alpha = W.Alphabet.parse(args.alphabet) if args.alphabet else W.DEFAULT_ALPHABET
    status = 0
    try:
        payload, text = args.func(args)
    except _Fail as f:
        status, payload, text = f.status, f.payload, f.text
    except (WordBallsError, OSError, ValueError) as exc:
        contract = isinstance(exc, WordBallsError) and not isinstance(exc, INPUT_ERRORS)
        status = 1 if contract else 2
        name = type(exc).__name__
        payload, text = {"error": name, "message": str(exc)}, f"{name}: {exc}"
        if not args.json:
            print(text, file=sys.stderr)
            return status
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
