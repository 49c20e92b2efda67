"""Command-line entry point.

Output is JSON lines by default, or a table with ``--pretty``. Exit codes:
0 success, 1 a theorem equivalence or lemma failed unexpectedly, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import perm
from .catalog import group_72, group_72_relations, resolve
from .criteria import (
    LEMMAS,
    CheckReport,
    alt5_value_set_readings,
    check_corollary_A,
    check_theorem_delta,
    check_theorem_gamma,
    frobenius_p_nilpotent,
    lemma_check,
    power_word_counterexample,
    satisfies_P,
    satisfies_P_on_set,
)
from .harness import SweepConfig, default_config, run_sweep
from .perm import GroupError
from .structure import (
    abelian_invariants,
    derived_series,
    is_p_nilpotent,
    is_p_nilpotent_by_core,
    lower_central_series,
    lower_central_term,
    p_prime_core,
    prime_divisors,
)
from .words import parse_word, verbal_subgroup, word_name, word_values

log = logging.getLogger("pnilp")


def _emit(rows: list[dict], pretty: bool) -> None:
    if not pretty:
        for row in rows:
            print(json.dumps(row, sort_keys=False))
        return
    if not rows:
        print("(no results)")
        return
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
    print("  ".join("-" * w for w in widths))
    for row in cells:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)))


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _report_rows(reports: list[CheckReport], pretty: bool) -> list[dict]:
    if not pretty:
        return [r.to_json() for r in reports]
    rows = []
    for r in reports:
        d = r.to_json()
        rows.append({
            "check": d["check"], "group": d["group"], "word": d["word"], "k": d["k"], "p": d["p"],
            "status": r.status(), "mismatch": d["mismatch"], "witness": d["witness"], "info": d["info"],
        })
    return rows


def _group(spec: str):
    G = resolve(spec)
    if G.name is None:
        G.name = spec
    return G


def _primes(G, p):
    return prime_divisors(G.order()) if p is None else [p]


def cmd_order(args) -> int:
    G = _group(args.group)
    _emit([{"group": G.name, "degree": G.degree, "order": G.order()}], args.pretty)
    return 0


def cmd_series(args) -> int:
    G = _group(args.group)
    rows = []
    if args.kind in ("lower", "both"):
        rows.append({"group": G.name, **lower_central_series(G).to_json()})
    if args.kind in ("derived", "both"):
        rows.append({"group": G.name, **derived_series(G).to_json()})
    if args.pretty:
        rows = [{"group": r["group"], "kind": r["kind"], "orders": r["orders"]} for r in rows]
    _emit(rows, args.pretty)
    return 0


def cmd_values(args) -> int:
    G = _group(args.group)
    w = parse_word(args.word)
    V = word_values(G, w)
    row = {
        "group": G.name,
        "word": word_name(w),
        "size": len(V),
        "verbal_subgroup_order": verbal_subgroup(G, w).order(),
    }
    if args.list:
        row["values"] = [str(v) for v in V]
    _emit([row], args.pretty)
    return 0


def cmd_check_p(args) -> int:
    G = _group(args.group)
    reports = [satisfies_P(G, parse_word(args.word), p) for p in _primes(G, args.p)]
    _emit(_report_rows(reports, args.pretty), args.pretty)
    return 0


def cmd_pnilp(args) -> int:
    G = _group(args.group)
    rows = []
    for p in _primes(G, args.p):
        frob = frobenius_p_nilpotent(G, p)
        rows.append({
            "group": G.name,
            "p": p,
            "p_nilpotent": is_p_nilpotent(G, p),
            "by_core": is_p_nilpotent_by_core(G, p),
            "frobenius": frob.holds,
            "o_p_prime_order": p_prime_core(G, p).order(),
        })
    _emit(rows, args.pretty)
    agree = all(r["p_nilpotent"] == r["by_core"] == r["frobenius"] for r in rows)
    return 0 if agree else 1


def _theorem(args, fn, default_ks) -> int:
    G = _group(args.group)
    ks = [args.k] if args.k is not None else default_ks
    reports = [fn(G, k, p) for k in ks for p in _primes(G, args.p)]
    _emit(_report_rows(reports, args.pretty), args.pretty)
    return 1 if any(r.mismatch for r in reports) else 0


def cmd_theorem_a(args) -> int:
    return _theorem(args, check_theorem_gamma, [1, 2, 3])


def cmd_theorem_b(args) -> int:
    return _theorem(args, check_theorem_delta, [2, 3])


def cmd_corollary(args) -> int:
    G = _group(args.group)
    reports = [check_corollary_A(G, p) for p in _primes(G, args.p)]
    _emit(_report_rows(reports, args.pretty), args.pretty)
    return 1 if any(r.mismatch for r in reports) else 0


def cmd_frobenius(args) -> int:
    G = _group(args.group)
    reports = [frobenius_p_nilpotent(G, p) for p in _primes(G, args.p)]
    _emit(_report_rows(reports, args.pretty), args.pretty)
    return 1 if any(r.mismatch for r in reports) else 0


def cmd_lemmas(args) -> int:
    G = _group(args.group)
    names = [args.name] if args.name else list(LEMMAS)
    word = parse_word(args.word) if args.word else None
    reports = []
    for name in names:
        if name == "delta_focal":
            qs = [args.q] if args.q else prime_divisors(G.order())
            reports += [lemma_check(name, G, k=args.k, q=q) for q in qs]
        else:
            reports += [lemma_check(name, G, k=args.k, p=p, word=word) for p in _primes(G, args.p)]
    _emit(_report_rows(reports, args.pretty), args.pretty)
    return 1 if any(r.mismatch for r in reports) else 0


def cmd_counterexamples(args) -> int:
    reports = power_word_counterexample()
    for reading, V in alt5_value_set_readings().items():
        for p in (2, 3, 5):
            r = satisfies_P_on_set(V, p)
            r.check = "alt5_value_set"
            r.info = {"reading": reading, "size": len(V)}
            reports.append(r)
    G = group_72()
    for k in (2, 3):
        r = satisfies_P(G, parse_word(f"gamma:{k}"), 3)
        r.check = "group_72"
        r.info = {
            "order": G.order(),
            "gamma_3_invariants": abelian_invariants(lower_central_term(G, 3)),
            "relations_hold": all(group_72_relations(G).values()),
        }
        reports.append(r)
    _emit(_report_rows(reports, args.pretty), args.pretty)
    return 1 if any(r.mismatch for r in reports) else 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig.load(args.config) if args.config else default_config()
    result = run_sweep(cfg, workers=args.workers)
    _emit(_report_rows(result.reports, args.pretty), args.pretty)
    summary = {"summary": result.summary, "exit_code": result.exit_code}
    if args.pretty:
        print()
        print(json.dumps(summary))
    else:
        print(json.dumps(summary))
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="print a table instead of JSON lines")
    common.add_argument("--enum-cap", type=int, help="maximum group order to enumerate (env PNILP_ENUM_CAP)")
    common.add_argument("--tuple-cap", type=int, help="maximum tuples for generic words (env PNILP_TUPLE_CAP)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="pnilp",
        description="p-nilpotency of verbal subgroups in finite permutation groups.",
        epilog="Groups: a catalog name (C6, S4, A5, G72, SL(2,5), ...), a constructor expression "
        "such as 'direct_product(symmetric(3), cyclic(2))', or a group JSON file. "
        "Words: grammar text like '[x1,x2,x3]' or x1^15, or gamma:k, delta:k, pow:n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("order", cmd_order, "order and degree of a group")
    sp.add_argument("group")

    sp = add("series", cmd_series, "lower central and derived series")
    sp.add_argument("group")
    sp.add_argument("--kind", choices=("lower", "derived", "both"), default="both")

    sp = add("values", cmd_values, "the value set G_w of a word")
    sp.add_argument("group")
    sp.add_argument("word")
    sp.add_argument("--list", action="store_true", help="list the values in cycle notation")

    sp = add("check-p", cmd_check_p, "property P(w, p)")
    sp.add_argument("group")
    sp.add_argument("word")
    sp.add_argument("p", type=int, nargs="?", help="prime (default: every prime dividing |G|)")

    sp = add("pnilp", cmd_pnilp, "p-nilpotency by three independent methods")
    sp.add_argument("group")
    sp.add_argument("p", type=int, nargs="?")

    for name, fn, help_ in (
        ("theorem-a", cmd_theorem_a, "gamma_k(G) p-nilpotent iff P(gamma_k, p)"),
        ("theorem-b", cmd_theorem_b, "G^(k) p-nilpotent iff P(delta_k, p), soluble G"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("group")
        sp.add_argument("--k", type=int)
        sp.add_argument("--p", type=int)

    sp = add("corollary", cmd_corollary, "all-pairs order condition against p-nilpotency")
    sp.add_argument("group")
    sp.add_argument("--p", type=int)

    sp = add("frobenius", cmd_frobenius, "Frobenius normal p-complement criterion")
    sp.add_argument("group")
    sp.add_argument("p", type=int, nargs="?")

    sp = add("lemmas", cmd_lemmas, "executable lemma checks (hypotheses gated)")
    sp.add_argument("group")
    sp.add_argument("--name", choices=LEMMAS)
    sp.add_argument("--k", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--word")

    add("counterexamples", cmd_counterexamples, "power-word and Alt(5) counterexamples, order-72 example")

    sp = add("sweep", cmd_sweep, "run a sweep config (default: the shipped catalog sweep)")
    sp.add_argument("--config", help="sweep config JSON")
    sp.add_argument("--workers", type=int, help="parallel worker processes")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.enum_cap:
        perm.limits.enum_cap = args.enum_cap
    if args.tuple_cap:
        perm.limits.tuple_cap = args.tuple_cap
    try:
        return args.fn(args)
    except GroupError as exc:
        print(f"pnilp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
