"""Command line driver: ``g2moduli <command> ...``.

Exit codes: 0 success, 1 mismatch in ``reproduce``, 2 usage or parse error,
3 catalog validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .catalog import SCHEMA_VERSION, CatalogError, get_entry, load_catalog
from .exactla import as_rational
from .g2 import DEFAULT_EPSILON, DEFAULT_MAX_COEFF, DEFAULT_SEED, DEFAULT_TRIALS, principal_orbit_search
from .liealg import LieAlgebra, betti, derivation_space, nilpotency_step
from .notation import ParseError, parse_form, render_form
from .reproduce import reproduce

SEED_ENV = "G2MODULI_SEED"

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CATALOG = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be a non-negative integer, got {raw!r}") from None
    if seed < 0:
        raise UsageError(f"{SEED_ENV} must be a non-negative integer, got {raw!r}")
    return seed


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _entry(catalog, name):
    try:
        return get_entry(catalog, name)
    except KeyError:
        raise UsageError(f"unknown entry {name!r}; try 'list'") from None


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def cmd_list(args, catalog) -> int:
    for e in catalog:
        kinds = ",".join(k for k, has in (("closed", e.has_closed), ("coclosed", e.has_coclosed)) if has)
        print(f"{e.name:<16} {e.label:<16} tables={','.join(e.tables):<10} {kinds or '-'}")
    return EXIT_OK


def cmd_info(args, catalog) -> int:
    e = _entry(catalog, args.name)
    print(f"name: {e.name}")
    print(f"label: {e.label}")
    if e.salamon is None:
        print(f"unavailable: {e.unavailable}")
    else:
        g = e.algebra
        print(f"salamon: {g.salamon()}")
        print(f"nilpotency step: {nilpotency_step(g)}")
        print(f"dim Der: {derivation_space(g).dim}")
        print("betti: " + " ".join(str(betti(g, k)) for k in range(g.dim + 1)))
    for kind in ("closed", "coclosed"):
        if (e.has_closed if kind == "closed" else e.has_coclosed):
            print(f"{kind} form: {render_form(e.form(kind))}")
    if e.published_perturbation:
        print(f"published perturbation ({e.perturbation_kind}): {render_form(e.perturbation())}")
    for q, exp in e.expected.items():
        rel = " (upper bound)" if exp.relation == "le" else ""
        print(f"expected {q}: {exp.value}{rel}  [{exp.source}]")
    return EXIT_OK


def cmd_betti(args, catalog) -> int:
    e = _entry(catalog, args.name)
    if e.salamon is None:
        raise UsageError(f"{e.name}: structure equations unavailable")
    g = e.algebra
    if args.k is not None:
        if not 0 <= args.k <= g.dim:
            raise UsageError(f"degree must be in 0..{g.dim}")
        print(betti(g, args.k))
    else:
        for k in range(g.dim + 1):
            print(f"b{k} = {betti(g, k)}")
    return EXIT_OK


def _run_search(args, catalog, use_published: bool) -> int:
    e = _entry(catalog, args.name)
    has = e.has_closed if args.kind == "closed" else e.has_coclosed
    if not has:
        raise UsageError(f"{e.name} has no {args.kind} reference form")
    g = e.algebra
    perts = []
    if use_published and e.published_perturbation and e.perturbation_kind == args.kind:
        perts.append(e.perturbation())
    seed = args.seed if args.seed is not None else default_seed()
    try:
        report = principal_orbit_search(g, e.form(args.kind), epsilon=args.eps, max_coeff=args.max_coeff,
                                        trials=args.trials, seed=seed, perturbations=perts, name=e.name)
    except ValueError as exc:
        raise UsageError(f"{e.name}: {exc}") from None
    if args.json:
        _emit_json({"schema_version": SCHEMA_VERSION, "seed": seed, **report.to_dict()})
        return EXIT_OK
    d = report.to_dict()
    print(f"{e.name} ({args.kind})")
    print(f"  dim V              {report.dim_V}")
    print(f"  dim Aut            {report.dim_aut}")
    print(f"  stab (given)       {report.stab_given}")
    print(f"  stab (best found)  {report.stab_best}")
    print(f"  moduli dim         {report.moduli_dim}")
    print(f"  upper bound only   {'yes' if report.is_upper_bound_only else 'no'}")
    if report.best_perturbation is not None:
        print(f"  best perturbation  {d['best_perturbation']}  (eps={d['epsilon']}, {report.perturbation_source})")
    print(f"  trials run         {report.trials_run}")
    return EXIT_OK


def cmd_compute(args, catalog) -> int:
    return _run_search(args, catalog, use_published=True)


def cmd_search(args, catalog) -> int:
    return _run_search(args, catalog, use_published=not args.no_published)


def cmd_parse(args, catalog) -> int:
    if args.salamon is not None:
        g = LieAlgebra.from_string(args.salamon)
        print(g.salamon())
        step = nilpotency_step(g)
        print(f"nilpotency step: {step if step is not None else 'not nilpotent'}")
        print(f"dim Der: {derivation_space(g).dim}")
    else:
        print(render_form(parse_form(args.form, args.dim)))
    return EXIT_OK


def cmd_reproduce(args, catalog) -> int:
    entries = catalog
    if args.only:
        names = [n.strip() for n in args.only.split(",") if n.strip()]
        entries = [_entry(catalog, n) for n in names]
    seed = args.seed if args.seed is not None else default_seed()
    report = reproduce(entries, seed=seed, trials=args.trials, jobs=args.jobs)
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(report.to_text())
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="g2moduli", description="Moduli of invariant G2-structures on 7-dimensional Lie algebras.")
    p.add_argument("--catalog", metavar="PATH", help="catalog JSON to use instead of the shipped one")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list catalog entries").set_defaults(func=cmd_list)

    s = sub.add_parser("info", help="show one entry")
    s.add_argument("name")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("betti", help="Betti numbers of an entry")
    s.add_argument("name")
    s.add_argument("k", nargs="?", type=int)
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("parse", help="parse and re-render an expression")
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--salamon", metavar="EXPR")
    grp.add_argument("--form", metavar="EXPR")
    s.add_argument("--dim", type=_non_negative, default=7, help="ambient dimension for --form (default 7)")
    s.set_defaults(func=cmd_parse)

    for name, func, helptext in (("compute", cmd_compute, "moduli dimension with default search settings"),
                                 ("search", cmd_search, "principal-orbit search with explicit settings")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("name")
        s.add_argument("--kind", choices=("closed", "coclosed"), required=True)
        s.add_argument("--eps", type=_rational, default=DEFAULT_EPSILON)
        s.add_argument("--max-coeff", type=_non_negative, default=DEFAULT_MAX_COEFF)
        s.add_argument("--trials", type=_non_negative, default=DEFAULT_TRIALS)
        s.add_argument("--seed", type=_non_negative, default=None, help=f"default: ${SEED_ENV} or {DEFAULT_SEED}")
        s.add_argument("--json", action="store_true")
        if name == "search":
            s.add_argument("--no-published", action="store_true", help="skip the published perturbation")
        s.set_defaults(func=func)

    s = sub.add_parser("reproduce", help="recompute every expected catalog value")
    s.add_argument("--json", action="store_true")
    s.add_argument("--only", metavar="A,B,C")
    s.add_argument("--jobs", type=_non_negative, default=1)
    s.add_argument("--trials", type=_non_negative, default=DEFAULT_TRIALS)
    s.add_argument("--seed", type=_non_negative, default=None)
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "eps", None) == 0:
        parser.error("--eps must be nonzero")
    try:
        catalog = load_catalog(args.catalog)
        return args.func(args, catalog)
    except CatalogError as e:
        print(f"catalog error: {e}", file=sys.stderr)
        return EXIT_CATALOG
    except ParseError as e:
        print(f"parse error: {e.pretty()}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
