"""Command-line front end: ``jacksonine {eval,verify,sweep,replay} ...``.

Every JSON report carries a ``schema`` tag, the package version and the
resolved configuration (including the argv that produced it), so
``jacksonine replay report.json`` reruns it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import partitions as pt
from ._rational import parse_number, rational_str
from .cones import (
    ConeField,
    matrix_bessel,
    verify_chamber_sonine,
    verify_group_integral,
    verify_limit_corollary,
)
from .hyper import (
    MultiplicityB,
    SeriesConvergenceError,
    TruncationPolicy,
    bessel_1d,
    bessel_A,
    bessel_B,
)
from .jack import CACHE_ENV, binomial, jack_eval
from .laguerre import LaguerreParams, laguerre_bessel_limit_error, laguerre_series, wallach_sign_scan
from .sonine import (
    SonineParams,
    b_to_a_residual,
    second_moment_check,
    verify_discrete_sonine,
    verify_restricted_sonine,
)

SCHEMA = "jacksonine.report/1"

EPILOG = f"""\
Input formats: vectors and partitions are comma-separated ("0.6,0.2",
"2,1,0"); rationals may be written "p/q".  Values starting with a minus
sign need the "=" form, e.g. --alpha=-1/2.  Ranges for sweeps are either
lists ("25,100,400") or "a..b" (doubling from a up to b); "a..b+s" steps by
s and "a..b*f" multiplies by f.  Set {CACHE_ENV} to a directory to cache
Jack polynomial tables on disk.

Exit codes: 0 pass, 1 verification failure, 2 usage error.
"""


class UsageError(Exception):
    pass


# --- argument parsing helpers ------------------------------------------------------


def _vector(text: str) -> list[float]:
    try:
        return [float(parse_number(tok)) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}") from exc


def _number(text: str):
    try:
        return parse_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad number {text!r}") from exc


def _partition(text: str) -> tuple[int, ...]:
    try:
        return pt.parse_partition(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_range(text: str) -> list[float]:
    """Parse a sweep range; see the --help epilog for the syntax."""
    text = text.strip()
    if ".." not in text:
        return [float(parse_number(t)) for t in text.split(",") if t.strip()]
    lo_txt, rest = text.split("..", 1)
    op, step = "*", 2.0
    for sym in ("+", "*"):
        if sym in rest:
            rest, step_txt = rest.split(sym, 1)
            op, step = sym, float(parse_number(step_txt))
    lo, hi = float(parse_number(lo_txt)), float(parse_number(rest))
    if (op == "+" and step <= 0) or (op == "*" and (step <= 1 or lo <= 0)):
        raise ValueError(f"range {text!r} does not advance")
    out, v = [], lo
    while v <= hi * (1 + 1e-12):
        out.append(v)
        v = v + step if op == "+" else v * step
    return out


def _range(text: str) -> list[float]:
    try:
        return parse_range(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="rank (number of variables)")
    p.add_argument("--k1", type=_number, default=None, help="multiplicity on short roots")
    p.add_argument("--k2", type=_number, default=None, help="multiplicity on long roots (alpha = 1/k2)")
    p.add_argument("--alpha", type=_number, default=None, help="Jack parameter (defaults to 1/k2)")
    p.add_argument("--a", type=_number, default=None, help="Laguerre parameter (defaults to k1 - 1/2)")
    p.add_argument("--h", type=_number, default=None, help="parameter shift")
    p.add_argument("--d", type=int, default=1, choices=(1, 2), help="real dimension of the field")
    p.add_argument("--x", type=_vector, default=None, help="first argument or chamber point")
    p.add_argument("--y", type=_vector, default=None, help="second argument")
    p.add_argument("--z", type=_vector, default=None, help="scalar or vector argument")
    p.add_argument("--mu", type=_number, default=None, help="index of the matrix Bessel function")
    p.add_argument("--kappa", type=_partition, default=None, help="partition, e.g. 2,1")
    p.add_argument("--lam", type=_partition, default=None, help="partition inside kappa")
    p.add_argument("--j", type=int, default=None, help="discretization level / iteration count")
    p.add_argument("--m", type=int, default=1, help="number of k2 shifts")
    p.add_argument("--max-weight", type=int, default=6, help="largest |kappa| in a sign scan")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc", type=int, default=100_000, help="Monte Carlo sample count")
    p.add_argument("--rule-order", type=int, default=None, help="quadrature order per axis")
    p.add_argument("--max-degree", type=int, default=30, help="series truncation degree")
    p.add_argument("--rel-tol", type=float, default=1e-12, help="series stopping tolerance")
    p.add_argument("--tol", type=float, default=None, help="pass/fail tolerance of a verify suite")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacksonine",
        description="Jack polynomials, multivariate Bessel functions and Sonine formulas.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, targets, help_text in (
        ("eval", EVAL_TARGETS, "evaluate a function"),
        ("verify", VERIFY_SUITES, "run a verification suite"),
        ("sweep", SWEEPS, "parameter sweep to CSV"),
    ):
        cmd = sub.add_parser(name, help=help_text, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        cmd.add_argument("target", choices=sorted(targets))
        _common(cmd)
        if name == "sweep":
            cmd.add_argument("--values", type=_range, default=None, help="sweep values (see ranges below)")
    rep = sub.add_parser("replay", help="rerun the configuration stored in a JSON report")
    rep.add_argument("report")
    rep.add_argument("--out", default=None, help="override the output destination of the stored run")
    return parser


# --- parameter resolution -------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} {args.target} needs {', '.join(missing)}")


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(args.max_degree, args.rel_tol, 3)


def _n(args, *vectors) -> int:
    for v in vectors:
        if v is not None:
            if args.n is not None and args.n != len(v):
                raise UsageError(f"--n {args.n} does not match a vector of length {len(v)}")
            return len(v)
    if args.n is None:
        raise UsageError("cannot infer the rank; pass --n")
    return args.n


def _multiplicity(args, n) -> MultiplicityB:
    _need(args, "k1", "k2")
    return MultiplicityB(n, args.k1, args.k2)


def _alpha(args):
    if args.alpha is not None:
        return args.alpha
    if args.k2 is not None:
        return 1 / Fraction(args.k2) if isinstance(args.k2, Fraction) else 1 / args.k2
    raise UsageError("pass --alpha or --k2")


def _cplx(z) -> dict:
    z = complex(z)
    return {"value_re": z.real, "value_im": z.imag}


# --- eval --------------------------------------------------------------------------------------


def _eval_bessel_b(args):
    _need(args, "x", "y")
    n = _n(args, args.x, args.y)
    return bessel_B(_multiplicity(args, n), np.array(args.x), np.array(args.y), _policy(args)).to_dict()


def _eval_bessel_a(args):
    _need(args, "x", "y", "k2")
    return bessel_A(args.k2, np.array(args.x), np.array(args.y), _policy(args)).to_dict()


def _eval_bessel_1d(args):
    _need(args, "alpha", "z")
    if len(args.z) != 1:
        raise UsageError("--z must be a single number")
    v = bessel_1d(args.alpha, args.z[0])
    return {**_cplx(v), "degree_used": None, "tail_bound": 0.0}


def _eval_jack(args):
    _need(args, "kappa", "x")
    n = _n(args, args.x)
    lam = pt.make_partition(args.kappa, n)
    return _cplx(jack_eval(lam, _alpha(args), np.array(args.x)))


def _eval_binom(args):
    _need(args, "kappa", "lam")
    kappa = args.kappa
    n = max(len(kappa), len(args.lam), args.n or 1)
    value = binomial(pt.make_partition(kappa, n), pt.make_partition(args.lam, n), _alpha(args))
    exact = isinstance(value, Fraction)
    return {"value": rational_str(value) if exact else float(value), "value_float": float(value)}


def _laguerre_params(args, n) -> LaguerreParams:
    if args.a is not None:
        return LaguerreParams(n, args.a, _alpha(args))
    _need(args, "k1", "k2")
    return LaguerreParams.from_multiplicity(MultiplicityB(n, args.k1, args.k2))


def _eval_laguerre(args):
    _need(args, "kappa", "x")
    n = _n(args, args.x)
    return laguerre_series(pt.make_partition(args.kappa, n), _laguerre_params(args, n), np.array(args.x)).to_dict()


def _eval_matrix_bessel(args):
    _need(args, "mu", "x")
    n = _n(args, args.x)
    return matrix_bessel(args.mu, np.array(args.x), ConeField(args.d, n), _policy(args)).to_dict()


EVAL_TARGETS = {
    "bessel-b": _eval_bessel_b,
    "bessel-a": _eval_bessel_a,
    "bessel-1d": _eval_bessel_1d,
    "jack": _eval_jack,
    "binom": _eval_binom,
    "laguerre": _eval_laguerre,
    "matrix-bessel": _eval_matrix_bessel,
}


# --- verify ------------------------------------------------------------------------------------
#
# Each suite returns (payload, passed).


def _tol(args, default):
    return default if args.tol is None else args.tol


def _verify_restricted(args):
    _need(args, "y", "h")
    n = _n(args, args.y)
    sp = SonineParams(_multiplicity(args, n), args.h, "density")
    rep = verify_restricted_sonine(sp, np.array(args.y), policy=_policy(args), order=args.rule_order or 64)
    return rep.to_dict(), rep.residual <= _tol(args, 1e-6)


def _verify_discrete(args):
    _need(args, "x", "y", "j")
    n = _n(args, args.x, args.y)
    rep = verify_discrete_sonine(np.array(args.x), np.array(args.y), _multiplicity(args, n), args.j, args.m, _policy(args))
    return rep.to_dict(), rep.residual <= _tol(args, 1e-3)


def _verify_second_moment(args):
    _need(args, "x", "j")
    n = _n(args, args.x)
    measured, predicted = second_moment_check(args.x, _multiplicity(args, n), args.j)
    rel = abs(measured - predicted) / predicted if predicted else abs(measured)
    return {"measured": measured, "predicted": predicted, "rel_error": rel}, rel <= _tol(args, 1e-8)


def _verify_b_to_a(args):
    _need(args, "x", "y", "k1", "k2")
    res = b_to_a_residual(args.k1, args.k2, np.array(args.x), np.array(args.y), _policy(args))
    return {"residual": res}, res <= _tol(args, 0.02)


def _mc_result(rep, floor):
    d = rep.to_dict()
    return d, rep.within(3.0, floor)


def _verify_group(args):
    _need(args, "x", "y", "k1")
    n = _n(args, args.x, args.y)
    rep = verify_group_integral(ConeField(args.d, n), args.k1, args.x, args.y, args.mc, args.seed, _policy(args))
    return _mc_result(rep, _tol(args, 0.0))


def _verify_chamber(args):
    _need(args, "x", "y", "k1", "h")
    n = _n(args, args.x, args.y)
    rep = verify_chamber_sonine(
        ConeField(args.d, n), args.k1, args.h, args.x, args.y, args.mc, args.rule_order or 6, args.seed, _policy(args)
    )
    return _mc_result(rep, _tol(args, 0.0))


def _verify_limit(args):
    _need(args, "x", "z", "k1")
    n = _n(args, args.x, args.z)
    policy = TruncationPolicy(max(args.max_degree, 80), args.rel_tol, 3)
    rep = verify_limit_corollary(ConeField(args.d, n), args.k1, args.x, args.z, args.mc, args.rule_order or 8, args.seed, policy)
    return _mc_result(rep, _tol(args, 1e-3))


def _verify_wallach(args):
    _need(args, "h")
    n = args.n or 2
    alpha = _alpha(args)
    a = args.a if args.a is not None else 0
    report = wallach_sign_scan(LaguerreParams(n, a, alpha), args.h, args.max_weight)
    payload = {
        "violations": [
            {"kappa": pt.format_partition(k), "lambda": pt.format_partition(lam), "value": _num_str(v)}
            for k, lam, v in report.violations
        ],
        "tables_scanned": report.tables_scanned,
        "max_weight": report.max_weight,
        "outside_hypothesis": report.outside_hypothesis,
    }
    return payload, report.clean, report


def _num_str(v) -> str:
    return rational_str(v) if isinstance(v, Fraction) else repr(float(v))


VERIFY_SUITES = {
    "restricted-sonine": _verify_restricted,
    "discrete-sonine": _verify_discrete,
    "second-moment": _verify_second_moment,
    "b-to-a": _verify_b_to_a,
    "chamber-sonine": _verify_chamber,
    "group-integral": _verify_group,
    "limit-corollary": _verify_limit,
    "wallach-scan": _verify_wallach,
}


# --- sweep -------------------------------------------------------------------------------------


def _sweep_laguerre(args, values):
    _need(args, "x", "y")
    n = _n(args, args.x, args.y)
    k = _multiplicity(args, n)
    for j in values:
        yield {"j": int(j), "residual": laguerre_bessel_limit_error(k, args.x, args.y, int(j), _policy(args))}


def _sweep_b_to_a(args, values):
    _need(args, "x", "y", "k2")
    for k1 in values:
        yield {"k1": k1, "residual": b_to_a_residual(k1, args.k2, np.array(args.x), np.array(args.y), _policy(args))}


def _sweep_discrete(args, values):
    _need(args, "x", "y")
    n = _n(args, args.x, args.y)
    k = _multiplicity(args, n)
    for j in values:
        rep = verify_discrete_sonine(np.array(args.x), np.array(args.y), k, int(j), args.m, _policy(args))
        yield {"j": int(j), "residual": rep.residual}


def _sweep_chamber_mc(args, values):
    _need(args, "x", "y", "k1", "h")
    n = _n(args, args.x, args.y)
    cf = ConeField(args.d, n)
    for n_mc in values:
        rep = verify_chamber_sonine(cf, args.k1, args.h, args.x, args.y, int(n_mc), args.rule_order or 6, args.seed, _policy(args))
        yield {"n_mc": int(n_mc), "residual": rep.residual, "mc_stderr": rep.mc_stderr}


SWEEPS = {
    "laguerre-limit": (_sweep_laguerre, "j"),
    "b-to-a": (_sweep_b_to_a, "k1"),
    "discrete-sonine": (_sweep_discrete, "j"),
    "chamber-mc": (_sweep_chamber_mc, "n_mc"),
}
SWEEP_COLUMNS = {
    "laguerre-limit": ["j", "residual"],
    "b-to-a": ["k1", "residual"],
    "discrete-sonine": ["j", "residual"],
    "chamber-mc": ["n_mc", "residual", "mc_stderr"],
}


def halving_trend(residuals) -> bool:
    """Each residual at most half of the one two steps earlier."""
    return all(residuals[i] <= 0.5 * residuals[i - 2] for i in range(2, len(residuals)))


# --- driver ------------------------------------------------------------------------------------


def _config(args, argv) -> dict:
    cfg = {k: v for k, v in vars(args).items() if v is not None}
    for key, val in cfg.items():
        if isinstance(val, Fraction):
            cfg[key] = rational_str(val)
        elif isinstance(val, tuple):
            cfg[key] = pt.format_partition(val)
    cfg["argv"] = list(argv)
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(kind, args, argv, result, passed=None) -> str:
    rec = {"schema": SCHEMA, "kind": kind, "version": __version__, "config": _config(args, argv), "result": result}
    if passed is not None:
        rec["pass"] = bool(passed)
    return json.dumps(rec, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj)}")


def _strip_out(argv) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--out":
            skip = True
        elif not tok.startswith("--out="):
            out.append(tok)
    return out


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        try:
            with open(args.report) as fh:
                stored = json.load(fh)
            replay_argv = stored["config"]["argv"]
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            print(f"error: cannot replay {args.report}: {exc}", file=sys.stderr)
            return 2
        if args.out is not None:
            replay_argv = _strip_out(replay_argv) + ["--out", args.out]
        return run(replay_argv)
    try:
        if args.command == "eval":
            result = EVAL_TARGETS[args.target](args)
            _emit(_json_report(f"eval/{args.target}", args, argv, result), args.out)
            return 0
        if args.command == "verify":
            out = VERIFY_SUITES[args.target](args)
            payload, passed = out[0], out[1]
            if args.format == "csv" and args.target == "wallach-scan":
                _emit(out[2].to_csv(), args.out)
            else:
                _emit(_json_report(f"verify/{args.target}", args, argv, payload, passed), args.out)
            return 0 if passed else 1
        fn, _ = SWEEPS[args.target]
        values = args.values if args.values is not None else []
        rows = list(fn(args, values)) if values else []
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS[args.target], lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        if args.format == "json":
            _emit(_json_report(f"sweep/{args.target}", args, argv, rows), args.out)
        else:
            _emit(buf.getvalue(), args.out)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError, NotImplementedError, TypeError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except SeriesConvergenceError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
