"""Command-line front end.

Exit codes: 0 success, 1 an identity check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext

from . import enumeration as en
from .batch import CHARACTERS, default_jobs
from .enumeration import CeilingExceeded, GroupSpec
from .genfun import StatBinding, twisted_genfun
from .identities import (
    REGISTRY, distribution, get, search_descent_major_A, search_descent_neg_major_B,
    verify_id, verify_rank,
)
from .perms import (
    ParseError, SignedPerm, descent_set_A, descent_set_B, descent_set_D, neg_set,
    parse_element,
)
from .poly import MultiPoly
from .stats import StatName, all_stats

GUARDRAIL = 1_000_000


class UsageError(Exception):
    pass


def _set_text(S) -> str:
    return "{" + ",".join(map(str, sorted(S))) + "}"


def _int_set(text: str) -> frozenset:
    text = text.strip().strip("{}")
    if not text:
        return frozenset()
    try:
        return frozenset(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_stats(args) -> int:
    try:
        x = parse_element(args.element, args.family)
    except ParseError as exc:
        raise UsageError(f"cannot parse element: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    stats = all_stats(x)
    rows = [(s.value, stats[s.value]) for s in StatName if s.value in stats]
    if isinstance(x, SignedPerm):
        rows.append(("Des", _set_text(descent_set_B(x))))
        rows.append(("Neg", _set_text(neg_set(x))))
        if x.in_D and x.n >= 2:
            rows.append(("DesD", _set_text(descent_set_D(x))))
    else:
        rows.append(("Des", _set_text(descent_set_A(x))))
    if args.json:
        print(json.dumps({"element": str(x), **{k: v for k, v in rows}}))
        return 0
    width = max(len(k) for k, _ in rows)
    print(f"element  {x}")
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    return 0


def _parse_filters(items) -> dict:
    """neg=1,3  neg-parity=0  neg-odd=1  neg-even=2  sign=3:-  abs=1:5  domino  non-domino  abs-odes=0  abs-edes=0."""
    kw: dict = {}
    signs, mags = {}, {}
    for item in items or ():
        key, _, val = item.partition("=")
        key = key.strip()
        if key == "domino":
            kw["domino"] = True
        elif key == "non-domino":
            kw["domino"] = False
        elif key == "neg":
            kw["neg"] = _int_set(val)
        elif key == "neg-odd":
            kw["neg_odd"] = _int_set(val)
        elif key == "neg-even":
            kw["neg_even"] = _int_set(val)
        elif key == "neg-parity":
            kw["neg_parity"] = int(val)
        elif key in ("sign", "abs"):
            pos, _, v = val.partition(":")
            try:
                if key == "sign":
                    signs[int(pos)] = {"+": 1, "-": -1}[v.strip()]
                else:
                    mags[int(pos)] = int(v)
            except (KeyError, ValueError):
                raise UsageError(f"bad filter {item!r}; use sign=POS:+ or abs=POS:VALUE") from None
        elif key in ("abs-odes", "abs-edes") and val.strip() == "0":
            kw["abs_descent_free"] = "o" if key == "abs-odes" else "e"
        else:
            raise UsageError(f"unknown filter {item!r}")
    if signs:
        kw["signs"] = tuple(signs.items())
    if mags:
        kw["magnitudes"] = tuple(mags.items())
    return kw


def _guard(spec: GroupSpec) -> None:
    if spec.order > GUARDRAIL:
        print(f"# sweeping up to {spec.order:,} elements of {spec.family}_{spec.n}", file=sys.stderr)


def cmd_genfun(args) -> int:
    try:
        spec = GroupSpec(args.family, args.n, quotient=_int_set(args.quotient or ""),
                         force=args.force, **_parse_filters(args.filter))
        binding = StatBinding.parse(args.stats or "")
    except CeilingExceeded as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _guard(spec)
    try:
        poly = twisted_genfun(spec, args.char, binding, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(json.dumps({"polynomial": str(poly), "terms": poly.to_json()}))
    else:
        print(poly)
    return 0


def _print_failure(report) -> None:
    print(f"  lhs: {report.lhs}")
    print(f"  rhs: {report.rhs}")


def _run_verify(ids, args) -> int:
    reports = []
    status = 0
    ctx = en.ceilings_lifted() if args.force else nullcontext()
    with ctx:
        for identity_id in ids:
            spec = get(identity_id)
            if args.n is not None and not spec.valid(args.n):
                raise UsageError(f"rank {args.n} is outside the domain of {identity_id}")
            try:
                if args.n is not None:
                    stream = verify_rank(identity_id, args.n, args.jobs)
                else:
                    stream = verify_id(identity_id, args.n_max, args.jobs)
                for report in stream:
                    reports.append(report)
                    print(report.line(), flush=True)
                    if not report.equal:
                        _print_failure(report)
                        status = 1
            except CeilingExceeded as exc:
                raise UsageError(str(exc)) from None
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=1)
            fh.write("\n")
    passed = sum(r.equal for r in reports)
    print(f"{passed}/{len(reports)} reports equal")
    return status


def cmd_verify(args) -> int:
    if args.all:
        if args.identity:
            raise UsageError("give an identity id or --all, not both")
        return _run_verify(list(REGISTRY), args)
    if not args.identity:
        raise UsageError("give an identity id or --all")
    if args.identity not in REGISTRY:
        raise UsageError(f"unknown identity {args.identity!r}; see `oddmaj list`")
    return _run_verify([args.identity], args)


def cmd_verify_all(args) -> int:
    args.all, args.identity = True, None
    return cmd_verify(args)


SEARCH_FAMILY = {"descent-major": "A", "descent-neg-major": "B"}


def _target(kind: str, n: int, text: str, without_zero: bool) -> MultiPoly:
    family = SEARCH_FAMILY[kind]
    keyword = {"oddlen": "oddlenA" if family == "A" else "oddlenB"}.get(text, text)
    if keyword in StatName.__members__:
        try:
            return distribution(family, n, keyword, include_zero=not without_zero)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        return MultiPoly.parse(text)
    except ValueError:
        raise UsageError(f"target {text!r} is neither a statistic name nor a polynomial") from None


def cmd_search(args) -> int:
    target = _target(args.kind, args.n, args.target, args.without_zero)
    try:
        if args.kind == "descent-major":
            hit = search_descent_major_A(args.n, target)
            text = None if hit is None else "j=(" + ",".join(map(str, hit)) + ")"
        else:
            hit = search_descent_neg_major_B(args.n, target)
            text = None if hit is None else (
                "j=(" + ",".join(map(str, hit[0])) + ") k=(" + ",".join(map(str, hit[1])) + ")")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"# target {target}", file=sys.stderr)
    if args.kind == "descent-major":
        print("# weighting: sum of j_i over descent positions i in [n-1]", file=sys.stderr)
    else:
        print("# weighting: sum of j_i over descent positions i in [0, n-1]"
              " plus k_i over negative positions i in [n]", file=sys.stderr)
        if args.target in ("oddlen", "oddlenB"):
            rng = "[+-n]" if args.without_zero else "[+-n] with the index 0"
            print(f"# odd length counted on {rng}", file=sys.stderr)
    print("NONE" if text is None else text)
    return 0


def cmd_overpartitions(args) -> int:
    if args.poly:
        if args.length is None:
            raise UsageError("--poly needs --length")
        print(en.overpartition_poly(args.max_part, args.length))
        return 0
    try:
        stream = en.overpartitions(args.max_part, length=args.length, max_length=args.max_length,
                                   weight=args.weight, max_weight=args.max_weight)
        count = 0
        for lam in stream:
            print(lam)
            count += 1
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"# {count} overpartitions", file=sys.stderr)
    return 0


def cmd_list(args) -> int:
    for spec in REGISTRY.values():
        ranks = ",".join(map(str, spec.ranks))
        print(f"{spec.id}  [{spec.family}; {spec.rank_label} in {ranks}; {spec.check_mode}]")
        print(f"    {spec.formula}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oddmaj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="all statistics of one element")
    p.add_argument("element", help='element literal, e.g. "[-2,5,3,1,-4]" or 81725634')
    p.add_argument("--family", choices=("A", "B", "D"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("genfun", help="twisted generating function over a group or subset")
    p.add_argument("--family", choices=("A", "B", "D"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--quotient", help="J as a comma list (type A)")
    p.add_argument("--char", choices=CHARACTERS, default="trivial")
    p.add_argument("--stats", default="", help="bindings stat:var, comma separated")
    p.add_argument("--filter", action="append", help="repeatable; see the README for the filter syntax")
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.add_argument("--force", action="store_true", help="lift the rank ceilings")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_genfun)

    for name, func in (("verify", cmd_verify), ("verify-all", cmd_verify_all)):
        p = sub.add_parser(name, help="check registered identities")
        if name == "verify":
            p.add_argument("identity", nargs="?")
            p.add_argument("--all", action="store_true")
        p.add_argument("--n", type=int, help="a single rank")
        p.add_argument("--n-max", type=int, help="largest rank to check")
        p.add_argument("--jobs", type=int, default=default_jobs())
        p.add_argument("--json", metavar="PATH")
        p.add_argument("--force", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("search", help="search for descent-based weightings matching a distribution")
    p.add_argument("kind", choices=tuple(SEARCH_FAMILY))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", required=True, help="statistic name (oddlen, maj, fmaj, ...) or a polynomial in x")
    p.add_argument("--without-zero", action="store_true",
                   help="odd length of B_n counted on [+-n] without the index 0")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("overpartitions", help="list overpartitions or print P_{n,m}")
    p.add_argument("--max-part", type=int, required=True)
    p.add_argument("--length", type=int)
    p.add_argument("--max-length", type=int)
    p.add_argument("--weight", type=int)
    p.add_argument("--max-weight", type=int)
    p.add_argument("--poly", action="store_true", help="print sum q^|lambda| for the given --length")
    p.set_defaults(func=cmd_overpartitions)

    p = sub.add_parser("list", help="list registered identities")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
