"""Command line front end: ``gkforge <command> [options]``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
All output is deterministic for a fixed configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .construction import ConstructionState, build, verify_seven
from .decomposition import dims_row, split_points, verify_absorption, verify_direct_sum, verify_recursion, q_of, QN_BOUND
from .fields import GF, Rationals
from .ideal import (
    EOracle,
    e_membership,
    growth_table,
    gk_estimate,
    nonnilpotence_witness,
    quotient_dim,
    sufficient_space,
    verify_ideal,
    window_exponent,
)
from .nil import enumerate_elements, verify_bwifi
from .poly import Poly, parse_poly
from .reports import Report
from .schedule import Schedule, ScheduleError
from .subspace import random_element
from .words import words_of_degree

SUITES = ("thm2", "lemma5", "lemma6", "thm7", "ideal", "thm8", "bwifi", "all")


class UsageError(Exception):
    pass


def _parse_field(text: str):
    if text in ("q", "Q", "rationals"):
        return Rationals()
    kind, _, p = text.partition(":")
    if kind != "gf":
        raise UsageError(f"unknown field {text!r} (use gf:<p> or q)")
    try:
        return GF(int(p or 2))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_range(text: str) -> tuple[int, int]:
    a, sep, b = text.partition("..")
    try:
        lo, hi = (int(a), int(b)) if sep else (int(a), int(a))
    except ValueError:
        raise UsageError(f"bad range {text!r} (use a..b)") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return lo, hi


def _schedule(args) -> Schedule:
    if args.schedule:
        path = Path(args.schedule)
        if not path.exists():
            raise UsageError(f"schedule file not found: {path}")
        data = json.loads(path.read_text())
    else:
        data = {}
    if args.field:
        data["field"] = _parse_field(args.field).to_json()
    if args.onset is not None:
        data["onset"] = args.onset
    if args.z_set is not None:
        data["z_set"] = [int(v) for v in args.z_set.split(",") if v]
    if args.f_provider:
        data["f_provider"] = args.f_provider
    try:
        return Schedule.from_json(data)
    except (ScheduleError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _state(args, max_pow: int) -> ConstructionState:
    if getattr(args, "state", None):
        path = Path(args.state)
        if not path.exists():
            raise UsageError(f"state file not found: {path}")
        return ConstructionState.from_json(json.loads(path.read_text()))
    return build(_schedule(args), max_pow)


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=1) + "\n")
        return
    if not rows:
        return
    keys = list(rows[0])
    sep = "," if fmt == "csv" else "\t"
    out.write(sep.join(keys) + "\n")
    for r in rows:
        out.write(sep.join(str(r[k]).lower() if isinstance(r[k], bool) else str(r[k]) for k in keys) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_build(args, out) -> int:
    state = _state(args, args.max_power)
    data = state.to_json()
    text = json.dumps(data, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
        out.write(f"built levels 0..{state.max_pow}: " + ", ".join(f"{n}:{c}" for n, c in state.provenance) + "\n")
    else:
        out.write(text + "\n")
    return 0


def cmd_dims(args, out) -> int:
    lo, hi = _parse_range(args.n_range)
    if args.what == "decomposition":
        state = _state(args, max(args.max_power, hi.bit_length() - 1))
        rows = [dims_row(state, j) for j in range(lo, hi + 1)]
    else:
        state = _state(args, max(args.max_power, window_exponent(hi) + 1))
        rows = []
        acc = 0
        for n in range(1, hi + 1):
            d = quotient_dim(state, n)
            acc += d
            if n >= lo:
                rows.append({"n": n, "d": d, "D": acc})
    _emit_rows(rows, args.format, out)
    return 0


def cmd_member(args, out) -> int:
    try:
        r = parse_poly(args.element, _schedule(args).field)
    except (SyntaxError, ValueError) as exc:
        raise UsageError(f"cannot parse element: {exc}") from None
    if "" in r.terms:
        raise UsageError("elements must have zero constant term")
    top = max(r.degrees) if r.terms else 1
    state = _state(args, max(args.max_power, window_exponent(top) + 1))
    ok, wit = e_membership(state, r)
    out.write("IN E\n" if ok else "NOT IN E\n")
    if wit is not None and args.witness:
        out.write(json.dumps(wit.to_json(), sort_keys=True) + "\n")
    return 0


def cmd_growth(args, out) -> int:
    state = _state(args, max(args.max_power, window_exponent(args.max_degree) + 1))
    rep = growth_table(state, args.max_degree)
    if args.format == "csv":
        out.write(rep.csv())
    elif args.format == "json":
        out.write(json.dumps(rep.to_json(), indent=1) + "\n")
    else:
        for n, d, D, ok in rep.rows:
            out.write(f"n={n} d={d} D={D} bound_ok={ok}\n")
    slope = gk_estimate(rep)
    if args.format != "csv":
        out.write(f"# fitted slope {float(slope):.4f}; desk-scale pre-window regime, the asymptotic bound 20 is not testable here\n")
    return 0


def cmd_witness(args, out) -> int:
    if not args.non_nilpotent:
        raise UsageError("witness needs --non-nilpotent")
    state = _state(args, max(args.max_power, args.m + 2))
    word, pieces = nonnilpotence_witness(state, args.m)
    out.write(json.dumps({"m": args.m, "word": word, "factors": pieces}, sort_keys=True) + "\n")
    return 0


def cmd_enumerate(args, out) -> int:
    field = _schedule(args).field
    items = enumerate_elements(args.count, field)
    rows = [e.to_json() for e in items]
    _emit_rows(rows, args.format, out)
    return 0


# -- verification suites ----------------------------------------------------


def suite_thm2(args) -> list[Report]:
    reports = []
    top = min(5, args.max_power)
    state = build(_schedule(args), top + 1)
    for n in range(top + 1):
        reports.append(verify_seven(state, n))
    scaled = build(Schedule.scaled_default(onset=args.scaled_onset, seed=args.seed), 5)
    for n in range(5):
        reports.append(verify_seven(scaled, n))
    cases = {c for _, c in scaled.provenance}
    prov = Report("provenance of the scaled build", labels=[scaled.schedule.label])
    prov.add("case1 fired", "case1" in cases, ", ".join(f"{n}:{c}" for n, c in scaled.provenance))
    prov.add("case2 fired", "case2" in cases)
    prov.add("case3 fired", bool(cases & {"case3", "case3-z"}))
    reports.append(prov)
    return reports


def _decomp_state(args) -> ConstructionState:
    return build(_schedule(args), max(args.max_power, args.max_degree.bit_length()))


def suite_lemma5(args) -> list[Report]:
    state = _decomp_state(args)
    reports = [verify_direct_sum(state, j) for j in range(1, args.max_degree + 1)]
    qb = Report("dim Q(n) bound")
    bad = [n for n in range(1, args.max_degree + 1) if q_of(state, n).dim > QN_BOUND(n)]
    qb.add("dim Q(n) <= 3^17 n^9", not bad, f"n <= {args.max_degree}", bad or None)
    return reports + [qb]


def suite_lemma6(args) -> list[Report]:
    state = _decomp_state(args)
    return [verify_recursion(state, j, t) for j in range(1, args.max_degree) for t in split_points(j)]


def suite_thm7(args) -> list[Report]:
    state = _decomp_state(args)
    return [verify_absorption(state, j, t) for j in range(1, args.max_degree) for t in range(1, args.max_degree - j + 1)]


def suite_ideal(args) -> list[Report]:
    top = min(8, args.max_degree)
    state = build(_schedule(args), max(args.max_power, window_exponent(max(args.max_degree, top + 1)) + 1))
    reports = [verify_ideal(state, n) for n in range(1, top + 1)]
    o = EOracle(state)
    F = state.field
    eq = Report("membership routes agree on words")
    for n in range(1, min(6, args.max_degree) + 1):
        m = window_exponent(n)
        dense = o.dense_window(m) if 2 ** (m + 2) <= 8 else None
        mism = None
        for w in words_of_degree(n):
            f = Poly.word(w, F)
            a = o.generator(f, n)[0]
            b = o.fast(f, n)[0] if o.fast_available(n) else a
            c = o.dense(f, n, dense)[0] if dense is not None else a
            if not a == b == c:
                mism = w
                break
        eq.add(f"degree {n}", mism is None, "generator, factor" + (", dense" if dense is not None else ""), mism)
    reports.append(eq)
    qt = Report("quotient dimensions")
    paths_agree = all(
        quotient_dim(state, n, "generator") == (quotient_dim(state, n, "fast") if o.fast_available(n) else quotient_dim(state, n, "generator"))
        for n in range(1, args.max_degree + 1)
    )
    qt.add("factor and generator tables agree", paths_agree, f"n <= {args.max_degree}")
    g = growth_table(state, args.max_degree)
    qt.add("d(n) <= 3^34 n^18 (n+1)", all(r[3] for r in g.rows), f"n <= {args.max_degree}")
    reports.append(qt)
    wr = Report("non-nilpotence witnesses")
    for m in range(1, min(4, state.max_pow - 1) + 1):
        try:
            word, pieces = nonnilpotence_witness(state, m)
            ok = "".join(pieces) == word and all(p in state.level(1).words for p in pieces)
            wr.add(f"m={m}", ok, f"{word} = " + "·".join(pieces))
        except AssertionError as exc:
            wr.add(f"m={m}", False, str(exc))
    reports.append(wr)
    return reports


def suite_thm8(args) -> list[Report]:
    state = _decomp_state(args)
    rep = Report("sufficient condition implies membership", labels=[state.schedule.label])
    rng = np.random.default_rng(args.seed)
    for n in range(1, min(6, args.max_degree) + 1):
        space = sufficient_space(state, n)
        bad = None
        for _ in range(args.samples):
            r = random_element(space, rng, terms=4)
            if not r:
                continue
            if not e_membership(state, r)[0]:
                bad = r
                break
        rep.add(f"degree {n}", bad is None, f"{args.samples} random elements", bad)
    return [rep]


def suite_bwifi(args) -> list[Report]:
    onset = args.onset if args.onset is not None else args.scaled_onset
    sch = Schedule.scaled_default(onset=onset, seed=args.seed)
    sch = Schedule(sch.field, sch.onset, frozenset({args.i}), sch.provider_spec)
    state = build(sch, args.max_m)
    return [verify_bwifi(state, args.i, args.max_m, seed=args.seed)]


SUITE_FUNCS = {
    "thm2": suite_thm2,
    "lemma5": suite_lemma5,
    "lemma6": suite_lemma6,
    "thm7": suite_thm7,
    "ideal": suite_ideal,
    "thm8": suite_thm8,
    "bwifi": suite_bwifi,
}


def cmd_verify(args, out) -> int:
    names = list(SUITE_FUNCS) if args.suite == "all" else [args.suite]
    reports: list[tuple[str, Report]] = []
    for name in names:
        try:
            for rep in SUITE_FUNCS[name](args):
                reports.append((name, rep))
        except ScheduleError as exc:
            raise UsageError(str(exc)) from None
    ok = all(rep.passed for _, rep in reports)
    if args.format == "json":
        out.write(json.dumps({"passed": ok, "reports": [dict(rep.to_json(), suite=name) for name, rep in reports]}, sort_keys=True, indent=1) + "\n")
    else:
        for name, rep in reports:
            out.write(f"[{name}] " + "\n".join(rep.lines()) + "\n")
        total = sum(len(rep.checks) for _, rep in reports)
        failed = sum(len(rep.failures()) for _, rep in reports)
        out.write(f"{'PASS' if ok else 'FAIL'}: {total - failed}/{total} checks passed\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schedule", help="schedule JSON file")
    common.add_argument("--field", help="gf:<p> or q (default gf:2)")
    common.add_argument("--onset", type=int, help="window onset of the main schedule")
    common.add_argument("--z-set", help="comma separated window indices that consume an F")
    common.add_argument("--f-provider", help="none | random:<seed> | file:<path>")
    common.add_argument("--state", help="load a saved construction instead of building")
    common.add_argument("--max-power", type=int, default=6, help="levels to build (degrees up to 2^P)")

    p = argparse.ArgumentParser(prog="gkforge", description="Graded subspace construction and verification.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build a construction state")
    b.add_argument("--out", help="write the state JSON here")
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("dims", parents=[common], help="dimension tables")
    d.add_argument("--what", choices=("decomposition", "quotient"), default="quotient")
    d.add_argument("--n-range", default="1..16")
    d.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    d.set_defaults(func=cmd_dims)

    m = sub.add_parser("member", parents=[common], help="membership in E")
    m.add_argument("--element", required=True)
    m.add_argument("--witness", action="store_true")
    m.set_defaults(func=cmd_member)

    g = sub.add_parser("growth", parents=[common], help="quotient growth table")
    g.add_argument("--max-degree", type=int, default=16)
    g.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    g.set_defaults(func=cmd_growth)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--max-degree", type=int, default=16)
    v.add_argument("--scaled-onset", type=int, default=2, help="onset of the scaled schedule")
    v.add_argument("--i", type=int, default=2, help="window index for the bwifi suite")
    v.add_argument("--max-m", type=int, default=6, help="largest m+1 for the bwifi suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=200, help="random elements per degree (thm8)")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("witness", parents=[common], help="non-nilpotence witness")
    w.add_argument("--non-nilpotent", action="store_true")
    w.add_argument("--m", type=int, required=True)
    w.set_defaults(func=cmd_witness)

    e = sub.add_parser("enumerate", parents=[common], help="list f_i with their indices")
    e.add_argument("--count", type=int, default=10)
    e.add_argument("--format", choices=("csv", "json", "text"), default="json")
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    args = parser.parse_args(argv)
    for name in ("max_power", "max_degree", "count", "max_m", "m", "samples"):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 0:
            parser.error(f"--{name.replace('_', '-')} must be non-negative")
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"gkforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
