"""Command-line front end.

Every subcommand prints a JSON report on stdout.  Exit status: 0 success,
1 a check failed, 2 usage error, 3 a quadrature missed its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .errors import AccuracyError, DomainError, RangeError
from .index_core import HartogsExponent, least_exponent, reduce_exponent, witness_monomial
from .kernel import ratio_diagnostic
from .moments import (
    ModPower,
    adjoint_antiholo_constant,
    boundary_power_eigenvalue,
    mod_power_eigenvalue,
    monomial_norm_sq,
    parse_symbol,
)
from .quad import lp_divergence_scan
from .ranges import (
    INF,
    FullRange,
    PRange,
    as_fraction,
    bergman_range,
    smoothing_outcome,
    toeplitz_mod_power_range,
    unbounded_thresholds,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_ACCURACY = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# report serialization


def rational(x) -> str:
    """Exact ``num/den`` (or integer) string; infinity is ``inf``."""
    if x is INF:
        return "inf"
    return str(as_fraction(x))


def real(value: float, abs_error: float = 0.0) -> Dict[str, str]:
    return {"value": repr(float(value)), "abs_error": repr(float(abs_error))}


def prange(r: PRange) -> Dict[str, Any]:
    return {
        "lower": rational(r.lower),
        "upper": rational(r.upper),
        "lower_open": r.lower_open,
        "upper_open": r.upper_open,
        "text": str(r),
    }


def make_report(command: str, inputs: Dict[str, Any], outputs: Dict[str, Any],
                checks: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
    return {"command": command, "inputs": inputs, "outputs": outputs, "checks": checks or []}


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def check(name: str, passed: bool, detail: str, tolerance: str = "", measured: str = "") -> Dict[str, Any]:
    return {"name": name, "pass": bool(passed), "detail": detail, "tolerance": tolerance, "measured": measured}


# --------------------------------------------------------------------------
# argument parsing


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a decimal or fraction")


def _symbol(text: str):
    try:
        return parse_symbol(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _pair(text: str):
    parts = text.split(",")
    try:
        a, b = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a1,a2', got {text!r}")
    return (a, b)


def _cap(text: str) -> int:
    v = _positive_int(text)
    if v < 4:
        raise argparse.ArgumentTypeError(f"cap must be at least 4, got {v}")
    return v


def _exp_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartogs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ranges", help="exact L^p ranges and thresholds")
    _exp_args(p)
    p.add_argument("--symbol", type=_symbol, default=None, help="mod:<a> or boundary:<eta>")
    p.add_argument("--p", type=_fraction, default=None)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=["fast", "full"], default="full")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("scan", help="L^p divergence scans of the adjoint witness image")
    _exp_args(p)
    p.add_argument("--symbol", type=_symbol, default=ModPower(0))
    p.add_argument("--p", type=_fraction, nargs="+", required=True)
    p.add_argument("--eps-levels", type=_positive_int, default=16)
    p.add_argument("--out", default="scan.csv")

    p = sub.add_parser("kernel", help="truncated kernel versus its estimate")
    _exp_args(p)
    p.add_argument("--samples", type=_positive_int, default=200)
    p.add_argument("--cap", type=_cap, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("norm", help="squared norm of a monomial")
    _exp_args(p)
    p.add_argument("--alpha", type=_pair, required=True, help="a1,a2")

    p = sub.add_parser("eigen", help="Toeplitz eigenvalue at a monomial")
    _exp_args(p)
    p.add_argument("--symbol", type=_symbol, required=True)
    p.add_argument("--beta", type=_pair, required=True, help="b1,b2")

    p = sub.add_parser("witness", help="witness monomial and least exponent")
    _exp_args(p)
    return parser


def _exponent(args) -> HartogsExponent:
    return reduce_exponent(args.m, args.n)


def _exp_inputs(args, exp: HartogsExponent) -> Dict[str, Any]:
    return {"m": str(args.m), "n": str(args.n), "gamma": rational(exp.gamma)}


# --------------------------------------------------------------------------
# commands


def cmd_ranges(args):
    exp = _exponent(args)
    sym = args.symbol if args.symbol is not None else ModPower(0)
    inputs = _exp_inputs(args, exp)
    inputs["symbol"] = str(sym)
    if args.p is not None:
        inputs["p"] = rational(args.p)
    th = unbounded_thresholds(exp, sym)
    out: Dict[str, Any] = {
        "bergman_range": prange(bergman_range(exp)),
        "unbounded_thresholds": {
            "adjoint_p_star": rational(th.adjoint_p_star),
            "operator_upper": rational(th.operator_upper),
        },
    }
    if isinstance(sym, ModPower):
        r = toeplitz_mod_power_range(exp, sym.a)
        out["toeplitz_mod_power_range"] = prange(r)
        if args.p is not None:
            out["p_in_range"] = args.p in r
    elif args.p is not None:
        try:
            so = smoothing_outcome(exp, sym.eta, args.p)
        except RangeError as exc:
            out["smoothing_outcome"] = {"kind": "unbounded", "reason": str(exc)}
        else:
            body: Dict[str, Any] = {
                "M": rational(so.M),
                "L": rational(so.L),
                "threshold_eta": rational(so.threshold_eta),
            }
            if isinstance(so.outcome, FullRange):
                body.update(kind="full_range", r_sup=rational(so.outcome.r_sup))
            else:
                body.update(kind="gain", G=rational(so.outcome.G), r=rational(so.outcome.r))
            out["smoothing_outcome"] = body
    return make_report("ranges", inputs, out), EXIT_OK


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(args.suite, args.seed)
    checks = [check(r.name, r.passed, r.detail, r.tolerance, r.measured) for r in results]
    passed = all(r.passed for r in results)
    out = {"passed": passed, "failed": [r.name for r in results if not r.passed]}
    report = make_report("verify", {"suite": args.suite, "seed": str(args.seed)}, out, checks)
    return report, EXIT_OK if passed else EXIT_CHECK


def cmd_scan(args):
    exp = _exponent(args)
    w = witness_monomial(exp)
    inputs = _exp_inputs(args, exp)
    inputs.update(symbol=str(args.symbol), p=[rational(p) for p in args.p],
                  eps_levels=str(args.eps_levels), out=args.out)
    try:
        fh = open(args.out, "w", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}")
    rows, scans, checks = [], [], []
    for p in args.p:
        v = lp_divergence_scan(exp, w, args.symbol, float(p), eps_levels=args.eps_levels)
        for eps, integral in v.values:
            rows.append([repr(float(p)), repr(eps), repr(integral), v.verdict.value, repr(v.slope)])
        scans.append({"p": rational(p), "verdict": v.verdict.value, "growth": real(v.growth),
                      "slope": real(v.slope), "p_star": rational(v.p_star)})
        if v.agrees is not None:
            checks.append(check(f"scan p={rational(p)}", v.agrees,
                                f"{v.verdict.value} versus threshold p*={rational(v.p_star)}"))
    with fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["p", "eps", "integral", "verdict", "slope"])
        writer.writerows(rows)
    out = {"witness": [str(w.beta1), str(w.beta2)], "scans": scans, "rows": str(len(rows))}
    ok = all(c["pass"] for c in checks)
    return make_report("scan", inputs, out, checks), EXIT_OK if ok else EXIT_CHECK


def cmd_kernel(args):
    exp = _exponent(args)
    st = ratio_diagnostic(exp, args.samples, args.cap, args.seed)
    inputs = _exp_inputs(args, exp)
    inputs.update(samples=str(args.samples), cap=str(args.cap), seed=str(args.seed))
    out = {
        "max_ratio": real(st.max_ratio),
        "mean_ratio": real(st.mean_ratio),
        "max_ratio_doubled": real(st.max_ratio_doubled),
        "mean_ratio_doubled": real(st.mean_ratio_doubled),
        "rel_change_max": real(st.rel_change_max),
        "rel_change_mean": real(st.rel_change_mean),
        "max_pointwise_change": real(st.max_pointwise_change),
    }
    checks = [
        check("finite_max_ratio", math.isfinite(st.max_ratio) and st.max_ratio > 0, "max ratio finite and positive"),
        check("stabilization", st.rel_change_max < 0.01, f"cap {args.cap} versus {2 * args.cap}",
              "0.01", repr(st.rel_change_max)),
    ]
    ok = all(c["pass"] for c in checks)
    return make_report("kernel", inputs, out, checks), EXIT_OK if ok else EXIT_CHECK


def cmd_norm(args):
    exp = _exponent(args)
    v = monomial_norm_sq(exp, args.alpha)
    inputs = _exp_inputs(args, exp)
    inputs["alpha"] = [str(a) for a in args.alpha]
    out = {"norm_sq": real(v.value, v.abs_error_bound), "method": v.method.value}
    return make_report("norm", inputs, out), EXIT_OK


def cmd_eigen(args):
    exp = _exponent(args)
    inputs = _exp_inputs(args, exp)
    inputs.update(symbol=str(args.symbol), beta=[str(b) for b in args.beta])
    if isinstance(args.symbol, ModPower):
        out = {"eigenvalue": real(mod_power_eigenvalue(exp, args.beta, args.symbol.a)), "method": "closed_form"}
    else:
        v = boundary_power_eigenvalue(exp, args.beta, args.symbol.eta)
        out = {"eigenvalue": real(v.value, v.abs_error_bound), "method": v.method.value}
    return make_report("eigen", inputs, out), EXIT_OK


def cmd_witness(args):
    exp = _exponent(args)
    w = witness_monomial(exp)
    out = {
        "beta1": str(w.beta1),
        "beta2": str(w.beta2),
        "least_exponent": str(least_exponent(exp, w.beta1)),
        "adjoint_constant": real(adjoint_antiholo_constant(exp, w, ModPower(0))),
    }
    return make_report("witness", _exp_inputs(args, exp), out), EXIT_OK


COMMANDS = {
    "ranges": cmd_ranges,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "kernel": cmd_kernel,
    "norm": cmd_norm,
    "eigen": cmd_eigen,
    "witness": cmd_witness,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        report, status = COMMANDS[args.command](args)
    except (DomainError, UsageError) as exc:
        parser.error(str(exc))
    except AccuracyError as exc:
        print(f"hartogs: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    sys.stdout.write(dumps(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
