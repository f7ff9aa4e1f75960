"""Command-line entry point: `lattangle <command> ...`, JSON-lines reports by default."""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .algebra import Cyclo, OrderCapExceeded, RootOfUnity, parse_poly, set_order_cap
from .angles import INF, AngleConfig, ConfigError, TauValue, eliminant, tau_recover, verify_angle
from .transcribed import checksums, load

EXIT_OK, EXIT_EXPECT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _roots(text: str) -> tuple[RootOfUnity, ...]:
    try:
        return tuple(RootOfUnity.parse(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad root list {text!r}: {exc}") from exc


def _fractions(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational list {text!r}") from exc


def _config(args) -> AngleConfig:
    cfg = AngleConfig(args.case, _fractions(args.params), _roots(args.roots))
    if not cfg.is_valid():
        raise UsageError("; ".join(cfg.issues()))
    return cfg


def _tau(args) -> Cyclo:
    """tau as report JSON, or as a polynomial in z = exp(2 pi i / order)."""
    text = args.tau.strip()
    try:
        if text.startswith("{"):
            tau = TauValue.from_json(json.loads(text))
            if tau.kind != "explicitCyclo":
                raise UsageError("angles needs an explicit cyclotomic tau")
            return tau.value
        poly = parse_poly(text, ("z",))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad --tau: {exc}") from exc
    return Cyclo.coerce(poly.eval({"z": Cyclo.root(1, args.order)}))


# ---------------------------------------------------------------------------
# commands; each returns (results, expectation) where expectation is None or a bool


def cmd_solve_unit(args):
    from .uniteq import UnitRelation, brute_solve, cj_bound, cj_solve, records_as_set

    if args.relation:
        try:
            rel = UnitRelation.from_json(json.loads(args.relation))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad relation: {exc}") from exc
    else:
        rel = UnitRelation.linear(_fractions(args.coeffs))
    bound = args.bound or cj_bound(rel.k)
    out = {"relation": rel.to_json(), "bound": bound}
    if args.method in ("cj", "both"):
        cj = cj_solve(rel, bound, galois_reduce=args.galois)
        out["solutions"] = [r.to_json() for r in cj]
    if args.method in ("brute", "both"):
        br = brute_solve(rel, bound, galois_reduce=args.galois)
        out["bruteSolutions" if args.method == "both" else "solutions"] = [r.to_json() for r in br]
    if args.method == "both":
        agree = records_as_set(cj) == records_as_set(br)
        out["agree"] = agree
        return out, agree
    return out, None


def cmd_eliminant(args):
    cfg = _config(args)
    value = eliminant(cfg)
    out = {"config": cfg.to_json(), "value": value.to_json(), "isZero": value.is_zero(), "tau": None}
    if value.is_zero():
        try:
            out["tau"] = tau_recover(cfg).to_json()
        except (ConfigError, ArithmeticError):
            pass
    return out, None


def _verify_pair(args):
    try:
        tau = TauValue.from_json(json.loads(args.tau))
        b0, b1 = (None if t.strip().lower() in ("inf", "none") else Fraction(t) for t in args.pair.split(","))
        mu = RootOfUnity.parse(args.musq)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --tau/--pair/--musq: {exc}") from exc
    ok = verify_angle(tau, b0, b1, mu)
    return {"tau": tau.to_json(), "pair": [None if b0 is None else str(b0), str(b1)],
            "muSq": mu.to_json(), "holds": ok}, ok


def cmd_verify(args):
    if args.tau is not None:
        if args.pair is None or args.musq is None:
            raise UsageError("--tau needs --pair and --musq")
        return _verify_pair(args)
    if args.case is None or args.params is None or args.roots is None:
        raise UsageError("give --case/--params/--roots or --tau/--pair/--musq")
    cfg = _config(args)
    zero = eliminant(cfg).is_zero()
    out = {"config": cfg.to_json(), "eliminantZero": zero}
    if not zero:
        return out, False
    tau = tau_recover(cfg)
    out["tau"] = tau.to_json()
    roots = cfg.roots if not tau.conjugated else tuple(r.inverse() for r in cfg.roots)
    p = cfg.params
    if cfg.caseId == "C222":
        pairs = [(INF, 0, roots[0]), (p[0], p[1], roots[1]), (p[2], p[3], roots[2])]
    elif cfg.caseId == "C4":
        pairs = [(INF, 0, roots[0]), (INF, p[0], roots[1]), (INF, p[1], roots[2])]
    else:
        pairs = [(INF, 0, roots[0]), (INF, p[0], roots[1]), (p[1], p[2], roots[2])]
    checks = [verify_angle(tau, b0, b1, m) for b0, b1, m in pairs]
    out["angles"] = [{"pair": [None if b0 is INF else str(b0), str(b1)], "muSq": m.to_json(), "ok": ok}
                     for (b0, b1, m), ok in zip(pairs, checks)]
    return out, all(checks)


def cmd_angles(args):
    from .spaces import SpaceSpec, cm_catalog, field_roots_of_unity, find_rational_angles, symmetry_predicates

    if args.cm is not None:
        return cm_catalog(args.cm).to_json(), None
    if args.tau is None:
        raise UsageError("give --tau or --cm")
    try:
        space = SpaceSpec.of(_tau(args))
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    mus = None
    if args.max_order is not None:
        mus = [r for r in field_roots_of_unity(space.explicit()) if r.den <= args.max_order and not r.is_one()]
    out = {"tau": space.tau.to_json(), "angles": [r.to_json() for r in find_rational_angles(space, mus)]}
    out["symmetry"] = symmetry_predicates(space).to_json()
    return out, None


def cmd_search(args):
    from .classify import orbit_key, parse_orders, search_case4, summarize_case4

    if args.what != "case4":
        raise UsageError("only `search case4` is available")
    try:
        sols = search_case4(parse_orders(args.orders), jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    summary = summarize_case4(sols)
    out = {"orders": args.orders, "summary": summary, "solutions": [s.to_json() for s in sols]}
    if not args.expect:
        return out, None
    exp = load("expectations.json")["search_case4"].get(args.orders)
    if exp is None:
        raise UsageError(f"no bundled expectation for orders {args.orders!r}")
    ok = summary["counts"]["other"] == exp["other"]
    ok = ok and summary["dodecagonalClasses"] == exp["dodecagonalClasses"]
    if "dodecagonal" in exp:
        ok = ok and summary["counts"]["dodecagonal"] == exp["dodecagonal"]
    if "orbits" in exp:
        ok = ok and len({orbit_key(s) for s in sols if s.cls == "dodecagonal"}) == exp["orbits"]
    return out, ok


def cmd_report(args):
    from . import classify

    if args.what == "dodecagonal":
        out = classify.dodecagonal_report()
        return out, out["ok"] if args.expect else None
    if args.what == "table":
        rows = classify.classification_table()
        return {"rows": rows}, (len(rows) == load("expectations.json")["table_rows"]) if args.expect else None
    if args.what == "fivetuple":
        bound = args.bound or 24
        sols = classify.fivetuple_search(bound)
        m = load("expectations.json")["fivetuple"]["theta0OrdersDivide"]
        ok = all(m % s.theta0.den == 0 for s in sols)
        return {"bound": bound, "solutions": [s.to_json() for s in sols], "ok": ok}, ok if args.expect else None
    try:
        sup = classify.superrect_extra_angles(args.bound or 30)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    dod = classify.dodecagonal_extra_angles()
    ok = sup["ok"] and dod["ok"]
    return {"superrectangular": sup, "dodecagonal": dod, "ok": ok}, ok if args.expect else None


def cmd_coset(args):
    from .coset import SolutionPoint, certify, family_search, gamma_decompose, verify_families

    if args.solution is None and args.case is None:
        out = verify_families(samples=args.samples, seed=args.seed)
        return out, out["ok"] if args.expect else None
    try:
        if args.solution is not None:
            cfg = SolutionPoint.from_json(json.loads(args.solution)).cfg
        else:
            cfg = _config(args)
        sol = SolutionPoint.of(cfg)
        if args.prime is not None:
            gammas = gamma_decompose(sol, args.prime, args.power)
            return {"solution": sol.to_json(), "p": args.prime, "m": args.power,
                    "gammas": [g.to_json() for g in gammas],
                    "allZero": all(g.is_zero() for g in gammas)}, None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    cert = certify(sol)
    cert["families"] = [fw.to_json()["w"] for fw in family_search(sol)]
    return cert, None


def cmd_constants(args):
    from .algebra import factorize
    from .coset import constants

    c = constants()
    out = {k: str(v) for k, v in c.items()}
    out["factorizations"] = {k: [[p, e] for p, e in factorize(v)] for k, v in c.items()}
    if not args.expect:
        return out, None
    exp = load("expectations.json")["constants"]
    return out, all(out[k] == exp[k] for k in exp)


def cmd_ec(args):
    from .examples import ec_sweep

    try:
        recs = ec_sweep(args.multiples, verify=args.verify)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    valid = [r for r in recs if r["quadruple"]["valid"]]
    phis = [r["phi"] for r in valid]
    ok = len(set(phis)) == len(phis)
    if args.verify:
        ok = ok and all(r["report"]["ok"] for r in valid)
    degenerate = [r["multiple"] for r in recs if not r["quadruple"]["valid"]]
    ok = ok and degenerate == load("expectations.json")["ec"]["degenerateMultiples"]
    out = {"multiples": recs, "valid": len(valid), "phiDistinct": len(set(phis)) == len(phis)}
    return out, ok if args.expect else None


def cmd_genus5(args):
    from .examples import genus5_verify

    out = genus5_verify()
    return out, out["ok"] if args.expect else None


def cmd_surface(args):
    from .surface import defined_over_q_closed, defined_over_q_ratios, estar

    roots = _roots(args.roots)
    if len(roots) != 3 or any(r.is_one() for r in roots):
        raise UsageError("need three roots different from 1")
    out = {"roots": [r.to_json() for r in roots]}
    ok = True
    if args.check in ("identity", "all"):
        res = estar(*roots)
        out["estar"] = res.to_json()
        ok = ok and res.scaling_ok
    if args.check in ("defq", "all"):
        closed, ratios = defined_over_q_closed(*roots), defined_over_q_ratios(*roots)
        out["definedOverQ"] = {"closedForm": closed, "coefficientRatios": ratios}
        ok = ok and closed == ratios
    return out, ok if args.expect else None


# ---------------------------------------------------------------------------
# parser


def _add_config_args(p, required: bool = True):
    p.add_argument("--case", choices=("C4", "C32", "C222"), required=required)
    p.add_argument("--params", required=required, help="comma-separated rationals")
    p.add_argument("--roots", required=required, help="squared angles as k/n,k/n,k/n")


def build_parser() -> argparse.ArgumentParser:
    def output_args(p, default):
        p.add_argument("--format", choices=("json", "text"), default=default or "json")
        p.add_argument("--expect", choices=("paper",), default=default,
                       help="compare with the bundled expectations; exit 1 on mismatch")

    # accepted before or after the subcommand; the subcommand's value wins
    common = argparse.ArgumentParser(add_help=False)
    output_args(common, argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="lattangle", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    output_args(parser, None)
    sub = parser.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("solve-unit", help="solve a linear relation among roots of unity")
    p.add_argument("--coeffs", help="comma-separated rationals; the first root is fixed to 1")
    p.add_argument("--relation", help="relation as JSON")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--method", choices=("cj", "brute", "both"), default="cj")
    p.add_argument("--galois", "--galois-reduce", dest="galois", action="store_true")
    p.set_defaults(func=cmd_solve_unit)

    p = sub.add_parser("eliminant", help="evaluate an eliminant at a configuration")
    _add_config_args(p)
    p.set_defaults(func=cmd_eliminant)

    p = sub.add_parser("verify", help="check a configuration, or a single angle of a given tau")
    _add_config_args(p, required=False)
    p.add_argument("--tau", help="tau as JSON (the format emitted in reports)")
    p.add_argument("--pair", help="b0,b1 for the pair (tau+b0, tau+b1); inf means the vector 1")
    p.add_argument("--musq", help="squared angle k/n")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("angles", help="rational angles of <1, tau>")
    p.add_argument("--tau", help="tau as JSON, or a polynomial in z, the primitive root of --order")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--max-order", type=int, default=None, help="only squared angles of order <= N")
    p.add_argument("--cm", type=int, default=None, help="catalog for Q(sqrt(-d))")
    p.set_defaults(func=cmd_angles)

    p = sub.add_parser("search", help="exhaustive search")
    p.add_argument("what", choices=("case4",))
    p.add_argument("--orders", default="div:30")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("report", help="fixed verification reports")
    p.add_argument("what", choices=("dodecagonal", "table", "fivetuple", "extra-angles"))
    p.add_argument("--bound", type=int, default=None,
                   help="order bound (fivetuple: 24, extra-angles: 30)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("coset", help="certify a solution or verify the two infinite families")
    _add_config_args(p, required=False)
    p.add_argument("--solution", help="solution point as JSON {case, params, roots}")
    p.add_argument("--prime", type=int, default=None)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_coset)

    p = sub.add_parser("constants", help="exact bound constants")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("ec", help="elliptic family of quadruples")
    p.add_argument("--multiples", type=int, default=6)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_ec)

    p = sub.add_parser("genus5", help="genus-5 configuration checks")
    p.set_defaults(func=cmd_genus5)

    p = sub.add_parser("surface", help="resultant surface checks for fixed squared angles")
    p.add_argument("--roots", required=True, help="kx/nx,ky/ny,kz/nz")
    p.add_argument("--check", choices=("identity", "defq", "all"), default="all")
    p.set_defaults(func=cmd_surface)
    return parser


# ---------------------------------------------------------------------------
# output


def _is_root(obj) -> bool:
    return isinstance(obj, dict) and set(obj) == {"num", "den"}


def _flat(obj) -> bool:
    return isinstance(obj, list) and all(not isinstance(v, (dict, list)) or _is_root(v) for v in obj)


def render_text(obj, indent: int = 0) -> list[str]:
    """Readable rendering; squared angles k/n are shown as the amplitude k/n pi."""
    pad = "  " * indent
    if _is_root(obj):
        return [f"{pad}{obj['num']}/{obj['den']} pi"]
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if _is_root(v) or not isinstance(v, (dict, list)) or _flat(v):
                lines.append(f"{pad}{k}: {render_text(v)[0].strip()}")
            else:
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
        return lines
    if isinstance(obj, list):
        if _flat(obj):
            return [pad + "[" + ", ".join(render_text(v)[0].strip() for v in obj) + "]"]
        lines = []
        for v in obj:
            sub = render_text(v, indent + 1)
            lines.append(pad + "- " + sub[0].strip())
            lines.extend(sub[1:])
        return lines
    return [pad + ("null" if obj is None else str(obj))]


def make_report(argv, args, results, expectation) -> dict:
    return {
        "command": list(argv),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
        "checksums": checksums(),
        "results": results,
        "expectation": None if expectation is None else {"mode": args.expect or "builtin", "pass": expectation},
    }


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cap = os.environ.get("LATTANGLE_ORDER_CAP")
        if cap:
            set_order_cap(int(cap))
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        results, expectation = args.func(args)
    except (UsageError, ConfigError, OrderCapExceeded, ValueError) as exc:
        print(f"lattangle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = make_report(argv, args, results, expectation)
    if args.format == "text":
        print("\n".join(render_text(report)))
    else:
        print(json.dumps(report, sort_keys=True))
    return EXIT_EXPECT if expectation is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
