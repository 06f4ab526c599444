"""Command-line front end.

    akcurves classify --at 0,0 "y^2 - x^5"
    akcurves chain --m 0 --point "[1:1;1:-1]" --n 7 "<C>" "<S>"
    akcurves verify-table --json

Exit status: 0 when every check passes, 1 on a failed verification, 2 on
usage or parse errors.
"""

import argparse
import json
import math
import sys
import time
from typing import List, Optional

from . import catalog
from .field import FieldError
from .hirzebruch import FmPoint, divisor_to_poly, fm_curve, poly_to_divisor
from .links import (apply_link, make_configuration, make_link, singular_chain, transversal_chain,
                    verify_trace)
from .parse import ParseError, parse_point, parse_poly
from .plane import classify_singularity, has_bidegree, intersection_multiplicity, minimal_b


class UsageError(Exception):
    pass


def _number(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _polys(args, count: int, at_least: Optional[int] = None) -> List[str]:
    texts = list(args.poly)
    if args.file:
        with open(args.file) as fh:
            texts += [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    lo = count if at_least is None else at_least
    if not lo <= len(texts) <= count:
        want = count if at_least is None else f"{at_least} to {count}"
        raise UsageError(f"{args.command} takes {want} polynomial(s), got {len(texts)}")
    return texts


def _point(args, required: bool = True):
    if args.point is None:
        if required:
            raise UsageError("--point is required")
        return None
    if args.m is None:
        raise UsageError("--point needs --m")
    c = parse_point(args.point, args.field)
    if len(c) != 4:
        raise UsageError("--point takes [x0:x1;y0:y1]")
    return FmPoint(*c, args.m)


def _need_m(args) -> int:
    if args.m is None:
        raise UsageError(f"{args.command} needs --m")
    return args.m


# -- verbs -----------------------------------------------------------------------

def cmd_classify(args):
    (text,) = _polys(args, 1)
    F = parse_poly(text, args.field)
    at = parse_point(args.at, args.field) if args.at else None
    rep = classify_singularity(F, at)
    return [dict(rep.to_dict(), polynomial=str(F))], True


def cmd_intersect(args):
    f, g = _polys(args, 2)
    F, G = parse_poly(f, args.field), parse_poly(g, args.field)
    at = parse_point(args.at, args.field) if args.at else None
    return [{"intersection": _number(intersection_multiplicity(F, G, at))}], True


def cmd_bidegree(args):
    (text,) = _polys(args, 1)
    F = parse_poly(text, args.field, ("x", "y"))
    a = F.degree_in(0)
    out = {"a": a, "minimal_b": minimal_b(F, a)}
    ok = True
    if args.b is not None:
        ok = has_bidegree(F, a, args.b)
        out["b"] = args.b
        out["has_bidegree"] = ok
    return [out], ok


def cmd_homogenize(args):
    (text,) = _polys(args, 1)
    C = poly_to_divisor(parse_poly(text, args.field, ("x", "y")), _need_m(args), args.a)
    return [C.to_dict()], True


def cmd_dehomogenize(args):
    (text,) = _polys(args, 1)
    C = fm_curve(text, _need_m(args), args.field)
    return [{"polynomial": str(divisor_to_poly(C))}], True


def cmd_link(args):
    (text,) = _polys(args, 1)
    C = fm_curve(text, _need_m(args), args.field)
    L = make_link(args.m, _point(args))
    D = apply_link(L, C)
    back = apply_link(L.inverse(), D)
    return [dict(L.to_dict(), curve=D.to_dict(), inverse_restores=back.same_as(C))], True


def cmd_chain(args):
    texts = _polys(args, 2, at_least=1)
    m = _need_m(args)
    C = fm_curve(texts[0], m, args.field)
    S = fm_curve(texts[1], m, args.field) if len(texts) > 1 else None
    cfg = make_configuration(C, _point(args), S)
    run = singular_chain if args.singular else transversal_chain
    trace = run(cfg, args.n, strict=False)
    audit = verify_trace(trace)
    out = trace.to_dict()
    out["audit"] = audit
    out["final_curve"] = trace.final.C.to_dict()
    return [out], trace.ok() and audit["ok"]


def cmd_witness(args):
    if len(args.poly) != 2:
        raise UsageError("witness takes the bidegree as two integers: A B")
    try:
        a, b = (int(v) for v in args.poly)
    except ValueError:
        raise UsageError("witness takes the bidegree as two integers: A B")
    entry = catalog.witness(a, b)
    out = entry.manifest()
    out.update(polynomial=str(entry.polynomial), singularity=entry.report.to_dict(),
               stages={name: ok for name, ok in entry.stages})
    if entry.trace is not None:
        out["initial_info"] = entry.initial.info.as_list()
        out["final_info"] = entry.trace.final.info.as_list()
    return [out], entry.k == entry.expected_k


def cmd_bounds(args):
    rows = [args.b] if args.b is not None else list(range(3, 13))
    return [catalog.bounds(3, b).to_dict() for b in rows], True


def cmd_verify_table(args):
    rows = [args.b] if args.b is not None else list(range(3, 13))
    results = [catalog.verify_table_row(b) for b in rows]
    return results, all(r["pass"] for r in results)


def cmd_identities(args):
    results = catalog.identity_suite()
    return results, all(r["equal"] for r in results)


VERBS = {
    "classify": cmd_classify,
    "intersect": cmd_intersect,
    "bidegree": cmd_bidegree,
    "homogenize": cmd_homogenize,
    "dehomogenize": cmd_dehomogenize,
    "link": cmd_link,
    "chain": cmd_chain,
    "witness": cmd_witness,
    "bounds": cmd_bounds,
    "verify-table": cmd_verify_table,
    "identities": cmd_identities,
}


# -- rendering ---------------------------------------------------------------------

def _render_text(command: str, results: list, ok: bool) -> str:
    lines = []
    if command == "verify-table":
        lines.append(f"{'b':>3}  {'k':>4}  {'expected':>8}  status")
        for r in results:
            lines.append(f"{r['b']:>3}  {str(r['k']):>4}  {r['expected_k']:>8}  "
                         f"{'PASS' if r['pass'] else 'FAIL'}")
            for st in r["stages"]:
                if not st["ok"]:
                    lines.append(f"       failed stage: {st['stage']} {st['detail']}")
        lines.append("N(3,b): " + " ".join(str(r["k"]) for r in results))
    elif command == "bounds":
        cols = ("b", "genus_bound", "reducible_bound", "knot_bound", "combined_upper", "known_value",
                "alpha_ratio")
        lines.append("  ".join(cols))
        for r in results:
            lines.append("  ".join(str("-" if r[c] is None else r[c]).rjust(len(c)) for c in cols))
    elif command == "chain":
        r = results[0]
        lines.append(f"{r['kind']} chain, initial {r['initial']}")
        for i, st in enumerate(r["steps"], 1):
            bad = [k for k, v in st["checks"].items() if not v]
            lines.append(f"{i:>3} {st['link']['direction']:<4} F_{st['link']['source_m']} -> "
                         f"F_{st['link']['target_m']}  predicted {st['predicted']}  actual {st['actual']}"
                         + (f"  FAILED {bad}" if bad else ""))
        lines.append(f"final {r['final']}: {r['final_curve']['equation']}")
        lines.append(f"audit: {'ok' if r['audit']['ok'] else r['audit']['first_mismatch']}")
    elif command == "identities":
        for r in results:
            lines.append(f"{r['name']:<24} {'equal' if r['equal'] else 'UNEQUAL'}")
            if not r["equal"]:
                lines.append(f"    lhs: {r['lhs']}")
                lines.append(f"    rhs: {r['rhs']}")
    else:
        for r in results:
            for key in sorted(r):
                lines.append(f"{key}: {json.dumps(r[key], sort_keys=True, default=str)}"
                             if isinstance(r[key], (dict, list)) else f"{key}: {r[key]}")
    lines.append("PASS" if ok else "FAIL")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="akcurves", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(VERBS))
    ap.add_argument("poly", nargs="*", help="polynomials (or the bidegree for 'witness')")
    ap.add_argument("--field", type=int, default=0, choices=(0, -1, -3),
                    help="0 for Q, -1 for Q(i), -3 for Q(w) with w^2 = -3")
    ap.add_argument("--at", help="point for classify/intersect, e.g. 0,0")
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--a", type=int, help="homogenize: x-degree a (default deg_x)")
    ap.add_argument("--b", type=int)
    ap.add_argument("--n", type=int, default=1, help="chain length")
    ap.add_argument("--m", type=int, help="Hirzebruch index")
    ap.add_argument("--point", help="point of F_m as [x0:x1;y0:y1]")
    ap.add_argument("--singular", action="store_true", help="chain: center links at s")
    ap.add_argument("--file", help="read polynomials from a file, one per line")
    ap.add_argument("--timing", action="store_true")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    start = time.perf_counter()
    try:
        results, ok = VERBS[args.command](args)
    except (ParseError, FieldError, UsageError, catalog.CatalogError) as exc:
        msg = exc.args[0] if isinstance(exc, catalog.CatalogError) else str(exc)
        print(f"akcurves {args.command}: error: {msg}", file=sys.stderr)
        return 2
    except (ValueError, AssertionError) as exc:
        print(f"akcurves {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    inputs = {k: v for k, v in vars(args).items()
              if k not in ("command", "json", "timing") and v not in (None, False)}
    if args.json:
        doc = {"command": args.command, "inputs": inputs, "results": results, "pass": bool(ok)}
        if args.timing:
            doc["seconds"] = round(time.perf_counter() - start, 3)
        print(json.dumps(doc, sort_keys=True, indent=2, default=str))
    else:
        print(_render_text(args.command, results, ok))
        if args.timing:
            print(f"elapsed: {time.perf_counter() - start:.3f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
