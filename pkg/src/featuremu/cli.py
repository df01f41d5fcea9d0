"""Command-line front end.

Exit codes: 0 holds / all pass, 1 fails, 2 usage or parse error,
3 internal soundness alarm (two evaluation routes that must agree did not).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields

from .features import (
    ModelMismatchError,
    format_family,
    format_product,
    parse_family,
    parse_fexpr,
    parse_product,
    sat_products,
)
from .harness import PROPERTIES, GenBounds, check_property
from .logic import (
    MULF,
    MULPF,
    Ruby,
    format_formula,
    is_negation_free,
    modal_depth,
    nnf,
    nnf_family,
    parse_formula,
)
from .logic.fo import format_fo
from .logic.syntax import subformulas
from .models import format_lts, parse_fts, project
from .semantics import FixpointStats, ProductEvaluator, sat_family, sat_lts, sat_product
from .semantics.family import FamilyEvaluator
from .translate import fm as to_product_formula
from .translate import ruby_lift, sm, to_fo

HOLDS, FAILS, USAGE, ALARM = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_model(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_fts(fh.read())


def _formula_text(args) -> str:
    if args.formula_file:
        with open(args.formula_file, encoding="utf-8") as fh:
            return fh.read()
    if args.formula is None:
        raise UsageError("give --formula or --formula-file")
    # --formula also accepts a path to a formula file
    if os.path.isfile(args.formula):
        with open(args.formula, encoding="utf-8") as fh:
            return fh.read()
    return args.formula


def _formula(args, dialect: str):
    return parse_formula(_formula_text(args), dialect)


def _product(f, text: str):
    p = parse_product(text)
    f.fm.product_index(p)
    return p


def _family(f, args):
    if args.family is not None and args.family_expr is not None:
        raise UsageError("give either --family or --family-expr, not both")
    if args.family_expr is not None:
        chi = parse_fexpr(args.family_expr)
        f.fm.check_fexpr(chi)
        P = sat_products(chi, f.fm)
    elif args.family is not None:
        P = parse_family(args.family)
        for p in P:
            f.fm.product_index(p)
    else:
        raise UsageError("give --family or --family-expr")
    if not P:
        print("warning: the selected family is empty", file=sys.stderr)
    return P


def _print_stats(phi, stats: FixpointStats) -> None:
    d = stats.as_dict()
    print(
        f"modal depth {modal_depth(phi)}; fixpoints {d['fixpoints']} (lfp {d['lfp']}, gfp {d['gfp']}); "
        f"iterations {d['iterations']} (max {d['max_iterations']}); chain violations {d['violations']}"
    )


# -- commands ----------------------------------------------------------------


def cmd_check_product(args) -> int:
    f = _read_model(args.model)
    phi = _formula(args, MULF)
    p = _product(f, args.product)
    stats = FixpointStats()
    holds = sat_product(f, p, phi, stats)
    print("HOLDS" if holds else "FAILS")
    if args.witness_set:
        pe = ProductEvaluator(f, stats)
        pairs = pe.to_pairs(pe.eval(phi, {}))
        for s in f.states:
            members = [format_product(q, f.fm) for q in f.fm.products if (s, q) in pairs]
            print(f"  {s}: {' '.join(members) if members else '-'}")
    if args.stats:
        _print_stats(phi, stats)
    return HOLDS if holds else FAILS


def cmd_check_family(args) -> int:
    f = _read_model(args.model)
    phi = _formula(args, MULPF)
    P = _family(f, args)
    stats = FixpointStats()
    holds = sat_family(f, P, phi, stats)
    print(f"{'HOLDS' if holds else 'FAILS'} for family {format_family(P, f.fm)}")
    code = HOLDS if holds else FAILS
    if args.witness_set:
        fe = FamilyEvaluator(f, stats)
        rows = fe.eval(phi, {})
        for s, row in zip(f.states, rows):
            fams = [format_family(f.fm.ordered(m), f.fm) for m in range(1 << len(f.fm.products)) if row >> m & 1]
            print(f"  {s}: {' '.join(fams) if fams else '-'}")
    if args.per_product:
        psi = to_product_formula(phi)
        every = True
        for p in f.fm.ordered(f.fm.mask_of(P)):
            v = sat_product(f, p, psi, stats)
            every &= v
            print(f"  {format_product(p, f.fm):<12} {'HOLDS' if v else 'FAILS'} (product reading)")
        if holds and not every and is_negation_free(phi):
            print("soundness alarm: family holds but some product fails the product reading", file=sys.stderr)
            code = ALARM
    if args.stats:
        _print_stats(phi, stats)
    return code


def cmd_check_all_products(args) -> int:
    f = _read_model(args.model)
    phi = _formula(args, MULF)
    stats = FixpointStats()
    rows, alarm = [], False
    for p in f.fm.products:
        direct = sat_product(f, p, phi, stats)
        via = sat_lts(project(f, p), sm(phi, p), stats)
        alarm |= direct != via
        rows.append((format_product(p, f.fm), direct, via))
    width = max(12, *(len(r[0]) + 2 for r in rows)) if rows else 12
    print(f"{'product':<{width}}{'direct':<8}{'projected':<10}")
    for name, direct, via in rows:
        flag = "" if direct == via else "  DISAGREE"
        print(f"{name:<{width}}{'holds' if direct else 'fails':<8}{'holds' if via else 'fails':<10}{flag}")
    n_hold = sum(r[1] for r in rows)
    print(f"{n_hold}/{len(rows)} products satisfy the formula")
    if args.stats:
        _print_stats(phi, stats)
    if alarm:
        print("soundness alarm: direct and projected verdicts disagree", file=sys.stderr)
        return ALARM
    return HOLDS if n_hold == len(rows) else FAILS


def cmd_project(args) -> int:
    f = _read_model(args.model)
    sys.stdout.write(format_lts(project(f, _product(f, args.product))))
    return HOLDS


def cmd_translate(args) -> int:
    mode = args.mode
    if mode == "sm":
        if args.product is None:
            raise UsageError("sm needs --product")
        phi = _formula(args, MULF)
        if args.model:
            p = _product(_read_model(args.model), args.product)
        else:
            p = parse_product(args.product)
        print(format_formula(sm(phi, p)))
    elif mode == "fm":
        print(format_formula(to_product_formula(_formula(args, MULPF))))
    elif mode == "ruby-lift":
        print(format_formula(ruby_lift(_formula(args, MULF))))
    elif mode == "nnf":
        # either dialect: the family rules apply as soon as a ruby occurs
        phi = parse_formula(_formula_text(args), MULPF, check_dialect=False)
        has_ruby = any(isinstance(q, Ruby) for q in subformulas(phi))
        print(format_formula(nnf_family(phi) if has_ruby else nnf(phi)))
    elif mode == "to-fo":
        if not args.model:
            raise UsageError("to-fo needs --model to resolve the family")
        f = _read_model(args.model)
        phi = nnf_family(_formula(args, MULPF))
        P = _family(f, args)
        print(format_fo(to_fo(P, phi, label=args.label), unicode=not args.ascii))
    return HOLDS


def cmd_campaign(args) -> int:
    overrides = {k.name: getattr(args, k.name) for k in fields(GenBounds) if getattr(args, k.name, None) is not None}
    b = GenBounds(**overrides)
    report = check_property(args.property, args.n, b, jobs=args.jobs)
    print(report.to_text())
    if args.jsonl:
        report.write_jsonl(args.jsonl)
    return HOLDS if report.passed else FAILS


# -- argument parsing --------------------------------------------------------


def _formula_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--formula", help="formula text, or a path to a formula file")
    p.add_argument("--formula-file", help="read the formula from this file")


def _family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help='explicit family, e.g. "{{E},{C,E}}"')
    p.add_argument("--family-expr", help="family of all products satisfying a feature expression")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="featuremu", description="Model checking of featured transition systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-product", help="check a feature formula for one product")
    p.add_argument("--model", required=True)
    _formula_flags(p)
    p.add_argument("--product", required=True, help='e.g. "{C,D}"')
    p.add_argument("--witness-set", action="store_true", help="print the full state-product denotation")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_check_product)

    p = sub.add_parser("check-family", help="check a family formula for a family of products")
    p.add_argument("--model", required=True)
    _formula_flags(p)
    _family_flags(p)
    p.add_argument("--per-product", action="store_true", help="also check every member under the product reading")
    p.add_argument("--witness-set", action="store_true", help="print the families satisfying the formula per state")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_check_family)

    p = sub.add_parser("check-all-products", help="check a feature formula for every product of the universe")
    p.add_argument("--model", required=True)
    _formula_flags(p)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_check_all_products)

    p = sub.add_parser("project", help="print the projection of a model onto one product")
    p.add_argument("--model", required=True)
    p.add_argument("--product", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("translate", help="apply a formula translation")
    p.add_argument("mode", choices=("sm", "fm", "ruby-lift", "nnf", "to-fo"))
    p.add_argument("--model")
    _formula_flags(p)
    p.add_argument("--product")
    _family_flags(p)
    p.add_argument("--label", default="P", help="name printed for the family constant (to-fo)")
    p.add_argument("--ascii", action="store_true", help="ASCII operators for to-fo output")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("campaign", help="run a randomized property campaign")
    p.add_argument("property", choices=sorted(PROPERTIES))
    p.add_argument("-n", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-states", type=int)
    p.add_argument("--max-features", type=int)
    p.add_argument("--max-actions", type=int)
    p.add_argument("--max-formula-depth", type=int)
    p.add_argument("--fixpoint-probability", type=float)
    p.add_argument("--negation-free", action="store_const", const=True)
    p.add_argument("--box-only", action="store_const", const=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--jsonl", help="write one JSON record per instance to this file")
    p.set_defaults(func=cmd_campaign)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        ap.error(str(e))
    except (ValueError, KeyError, OSError, ModelMismatchError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
