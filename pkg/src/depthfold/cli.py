"""Command line front end: ``depthfold {build,eval,regions,verify,render}``.

Exit codes: 0 success, 1 failed check or unreadable input, 2 bad arguments,
3 region budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import construction, io, render, verification
from .errors import ConstructionError, DomainError, RegionBudgetExceeded
from .geometry import TOL
from .network import classify, collapse, evaluate_pre_sign, max_width, param_count
from .regions import MAX_REGIONS, enumerate_regions, region_upper_bound

SUITES = ("zero-error", "lemma2", "linearity", "bounds")


def _m_arg(text):
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"m must be an integer, got {text!r}")
    if not 1 <= m <= construction.MAX_M:
        raise argparse.ArgumentTypeError(f"m must lie in [1, {construction.MAX_M}], got {m}")
    return m


def _fail(msg, code=1):
    print(f"depthfold: {msg}", file=sys.stderr)
    return code


def cmd_build(args) -> int:
    try:
        staged = construction.build_network(args.m)
    except ConstructionError as e:
        return _fail(str(e))
    net = collapse(staged)
    if args.out:
        io.save_network(staged if args.staged else net, args.out)
    if not args.quiet:
        print(f"m={args.m} hidden_layers={net.depth} max_width={max_width(net)} params={param_count(net)}")
    return 0


def _load(path):
    try:
        return io.load_network(path), None
    except io.NetworkFormatError as e:
        return None, _fail(str(e))


def cmd_eval(args) -> int:
    net, err = _load(args.net)
    if err is not None:
        return err
    p = (args.x, args.y)
    cls = classify(net, p)
    print(f"class={cls:+d} pre_sign={evaluate_pre_sign(net, p)!r}")
    return 0


def cmd_regions(args) -> int:
    net, err = _load(args.net)
    if err is not None:
        return err
    try:
        d = enumerate_regions(net, tuple(args.bbox), tol=args.tolerance, max_regions=args.max_regions)
    except RegionBudgetExceeded as e:
        return _fail(str(e), 3)
    except DomainError as e:
        return _fail(str(e), 2)
    w, depth = max_width(net), net.depth
    bound = region_upper_bound(w, depth) if w and depth else 1
    print(f"regions={len(d)} bound={bound}")
    if args.out and not args.count_only:
        io.save_decomposition(d, args.out)
    return 0


def _suite_reports(args, net):
    wanted = SUITES if args.suite == "all" else (args.suite,)
    m, tol = args.m, args.tolerance
    reports = []
    decomposition = None
    if {"lemma2", "linearity"} & set(wanted):
        decomposition = enumerate_regions(net, tol=tol)
    if "zero-error" in wanted:
        reports.append(verification.verify_zero_error(net, m, args.samples, args.seed, args.margin, tol))
    if "lemma2" in wanted:
        reports.append(verification.verify_lemma2(m, args.epsilon, decomposition, tol))
    if "linearity" in wanted:
        reports.append(verification.verify_piecewise_linearity(net, decomposition, 9, args.seed))
    if "bounds" in wanted:
        ms = list(range(1, max(30, m) + 1))
        reports += [verification.verify_bound_consistency(ms, d) for d in range(1, 5)]
    return reports


def cmd_verify(args) -> int:
    if args.net:
        net, err = _load(args.net)
        if err is not None:
            return err
    else:
        net = collapse(construction.build_network(args.m))
    try:
        reports = _suite_reports(args, net)
    except RegionBudgetExceeded as e:
        return _fail(str(e), 3)
    ok = all(r.passed for r in reports)
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=1))
    elif not args.quiet:
        for r in reports:
            detail = " ".join(f"{k}={v}" for k, v in r.details.items())
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.claim:<22} {detail}")
    return 0 if ok else 1


def cmd_render(args) -> int:
    try:
        spec = render.RenderSpec(args.target, args.m, args.n, args.width, args.height, args.seed)
    except DomainError as e:
        return _fail(str(e), 2)
    try:
        render.write_svg(spec, args.out)
    except OSError as e:
        return _fail(f"cannot write {args.out}: {e}")
    if not args.quiet:
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="depthfold", description=__doc__.splitlines()[0])
    p.add_argument("--tolerance", type=float, default=TOL, help="geometric tolerance (default 1e-9)")
    p.add_argument("--quiet", action="store_true", help="suppress summary lines")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct the folding network for f_m")
    b.add_argument("m", type=_m_arg)
    form = b.add_mutually_exclusive_group()
    form.add_argument("--staged", action="store_true", help="write stages as well as the collapsed form")
    form.add_argument("--collapsed", action="store_true", help="write the collapsed MLP only (default)")
    b.add_argument("--out", metavar="FILE")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("eval", help="classify one point")
    e.add_argument("--net", required=True, metavar="FILE")
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--y", type=float, required=True)
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("regions", help="enumerate linear response regions")
    r.add_argument("--net", required=True, metavar="FILE")
    r.add_argument("--bbox", type=float, nargs=4, default=[-2.0, -2.0, 2.0, 2.0], metavar=("X0", "Y0", "X1", "Y1"))
    r.add_argument("--out", metavar="FILE")
    r.add_argument("--count-only", action="store_true")
    r.add_argument("--max-regions", type=int, default=MAX_REGIONS)
    r.set_defaults(func=cmd_regions)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--m", type=_m_arg, required=True)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.add_argument("--net", metavar="FILE", help="check this network instead of the constructed one")
    v.add_argument("--samples", type=int, default=10**5)
    v.add_argument("--margin", type=float, default=1e-6)
    v.add_argument("--epsilon", type=float, default=None)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("render", help="write an SVG figure")
    g.add_argument("--target", choices=[t.value for t in render.RenderTarget], required=True)
    g.add_argument("--m", type=_m_arg)
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--out", required=True, metavar="FILE")
    g.add_argument("--width", type=int, default=480)
    g.add_argument("--height", type=int, default=480)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
