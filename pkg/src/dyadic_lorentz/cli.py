"""Command line front end.

    dyadic-lorentz norm f.json --p 2 --q 1
    dyadic-lorentz rearrange f.json
    dyadic-lorentz cz f.json --height 1
    dyadic-lorentz haar --k 0 --j 0 --level 3
    dyadic-lorentz apply f.json --coeffs a.json
    dyadic-lorentz verify cz --seed 7 --cases 1000 --out cz.json

Exit status: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .cz import KERNELS, apply_kernel, cz_decompose, kernel_by_name, verify_cz
from .dyadic_ops import CoeffMatrix, DyadicInterval, haar, martingale_diff, maximal_s
from .lorentz import lorentz_norm
from .report import dumps_reports
from .stepfn import StepFunction, rearrange
from .suites import SUITES, SuiteConfig, run_suite


class InputError(Exception):
    pass


def _load_function(path: str) -> StepFunction:
    try:
        obj = json.loads(Path(path).read_text())
        return StepFunction.from_json(obj)
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"cannot read step function from {path}: {exc}") from None


def _number(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _option(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def _emit(args, obj) -> None:
    text = dumps_reports(obj) if isinstance(obj, dict) else obj
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_norm(args) -> int:
    f = _load_function(args.file)
    q = args.p if args.q is None else args.q
    try:
        value = lorentz_norm(f, args.p, q)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, {"p": args.p, "q": q, "value": value})
    return 0


def cmd_rearrange(args) -> int:
    prof = rearrange(_load_function(args.file))
    _emit(args, {"breakpoints": prof.breakpoints.tolist(), "values": prof.values.tolist()})
    return 0


def cmd_cz(args) -> int:
    f = _load_function(args.file)
    try:
        dec = cz_decompose(f, args.height)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = verify_cz(f, dec)
    _emit(args, {"decomposition": dec.to_json(), "report": report.to_json()})
    return 0 if report else 1


def cmd_haar(args) -> int:
    try:
        h = haar(DyadicInterval(args.k, args.j), args.m, args.level)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, h.to_json())
    return 0


def cmd_apply(args) -> int:
    f = _load_function(args.file)
    try:
        if args.coeffs:
            out = maximal_s(f, CoeffMatrix.from_json(Path(args.coeffs).read_text()))
        elif args.diff is not None:
            out = martingale_diff(f, args.diff)
        else:
            out = StepFunction(f.m, f.level, apply_kernel(kernel_by_name(args.kernel), f))
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(str(exc)) from None
    _emit(args, out.to_json())
    return 0


def cmd_verify(args) -> int:
    cfg = SuiteConfig(args.suite, seed=args.seed, cases=args.cases, level=args.level, m=args.m,
                      out=args.out, format=args.format, options=dict(args.set or []))
    return run_suite(cfg)


# Applied after parsing: set_defaults would rewrite the shared parent actions,
# and the subparser would then clobber flags given before the subcommand.
GLOBAL_DEFAULTS = {"seed": 0, "cases": 100, "level": 10, "m": 0, "out": None, "format": "json"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--cases", type=int, default=argparse.SUPPRESS)
    common.add_argument("--level", type=int, default=argparse.SUPPRESS)
    common.add_argument("--m", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="dyadic-lorentz", parents=[common],
                                     description="Dyadic step-function analysis and verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="Lorentz quasi-norm of a function")
    p.add_argument("file")
    p.add_argument("--p", type=_number, required=True)
    p.add_argument("--q", type=_number, default=None, help="defaults to p (the L^p norm)")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("rearrange", parents=[common], help="decreasing rearrangement")
    p.add_argument("file")
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("cz", parents=[common], help="Calderon-Zygmund decomposition")
    p.add_argument("file")
    p.add_argument("--height", type=float, required=True)
    p.set_defaults(func=cmd_cz)

    p = sub.add_parser("haar", parents=[common], help="Haar function of a dyadic interval")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("apply", parents=[common], help="apply S, D_k or a kernel operator")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--coeffs", help="coefficient table JSON for the maximal operator S")
    g.add_argument("--diff", type=int, help="martingale difference scale k")
    g.add_argument("--kernel", choices=sorted(KERNELS))
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=list(SUITES))
    p.add_argument("--set", type=_option, action="append", metavar="KEY=VALUE",
                   help="suite option, e.g. N=3 for the counterexample suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
