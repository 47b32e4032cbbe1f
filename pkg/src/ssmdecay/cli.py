"""Command-line front end.  Every run is fully described by its flags.

Measures are given by ``--a``, ``--t`` and ``--p`` and are normalized to
t1 = 0, t2 = 1 before use (decay rates and dimensions are affine invariant;
frequencies refer to the normalized coordinates).  Bernoulli convolutions
use the {0, 1} alphabet, the affine image of the +/-1 one.

Exit status: 0 success, 2 invalid input, 3 a verification check failed.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import constants, covering, dimension, fourier, io, pushforward
from .errors import SSMError
from .mapexpr import parse_map
from .measure import DiscreteMeasure, HomogeneousSSM, discrete_approximation, normalize

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 2, 3


def number(text: str) -> float:
    """Float or exact fraction such as 1/3."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def number_list(text: str) -> list[float]:
    return [number(v) for v in text.split(",") if v.strip()]


def level_range(text: str) -> list[int]:
    """'8:16' (inclusive) or '8,10,12'."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level range: {text!r}")


def _measure_args(p):
    p.add_argument("--a", type=number, required=True, help="contraction ratio in (0, 1); fractions allowed")
    p.add_argument("--t", type=number_list, default=[0.0, 1.0], help="translations, comma separated")
    p.add_argument("--p", type=number_list, default=[0.5, 0.5], help="weights, comma separated")


def _ssm(args) -> HomogeneousSSM:
    ssm = normalize(HomogeneousSSM(args.a, tuple(args.t), tuple(args.p)))
    if ssm.alphabet_map != (0.0, 1.0):
        shift, scale = ssm.alphabet_map
        print(f"note: translations normalized via x -> (x - {shift:g}) / {scale:g}", file=sys.stderr)
    return ssm


def _frostman(args, a, p):
    if args.s in (None, "auto"):
        s, capped = constants.frostman_exponent_osc(a, p)
        print("warning: --s auto assumes the open set condition; it is not checked", file=sys.stderr)
        return s
    return number(args.s)


def cmd_constants(args):
    mode = args.mode or constants.default_mode(args.p)
    s = _frostman(args, args.a, args.p)
    rep = constants.constants_report(args.a, args.p, s, args.kappa, mode, args.variant)
    io.write_json(args.out, rep.to_dict())
    return EXIT_OK


def cmd_scan(args):
    sc = fourier.scan(_ssm(args), args.tmax, args.step, args.tol)
    sc.to_csv(args.out)
    return EXIT_OK


def cmd_cover(args):
    ssm = _ssm(args)
    rep = covering.covering_report(ssm, args.tmax, args.eps, args.step, args.tol, args.mode)
    if args.out:
        io.write_csv(args.out, ["k", "max_modulus"], rep.rows())
    summary = rep.summary()
    summary.update(a=ssm.a, t=list(ssm.t), p=list(ssm.p))
    io.write_json(args.summary, summary)
    return EXIT_OK


def cmd_decompose(args):
    dec = covering.decompose(args.point, args.a, args.n)
    rows = [(j, r, e) for j, (r, e) in enumerate(dec.terms)]
    io.write_csv(args.out, ["j", "r_j", "eps_j"], rows)
    return EXIT_OK


def cmd_sset(args):
    emp, bound = covering.s_set_cover_count(args.a, args.n, args.eps_tilde, args.grid)
    grid = args.grid or int(math.ceil(10 / args.a**args.n))
    ok = emp <= bound
    io.write_json(args.out, {"a": args.a, "N": args.n, "eps_tilde": args.eps_tilde, "grid": grid,
                             "xi": covering.xi_of(args.a), "empirical": emp, "bound": bound,
                             "pass": ok})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_dim(args):
    ssm = _ssm(args)
    if args.q == "inf":
        est = dimension.dim_inf_estimate(ssm, args.levels, args.approx_level, args.skip)
        q = "inf"
    else:
        q = number(args.q)
        est = dimension.dim_q_estimate(ssm, q, args.levels, args.approx_level, args.skip)
    if args.out:
        io.write_csv(args.out, ["n", "s_n", "max_q"], est.table.rows())
    summary = est.summary()
    summary["q"] = q
    io.write_json(args.summary, summary)
    return EXIT_OK


def cmd_alpha2(args):
    ssm = _ssm(args)
    T = args.T or dimension.geometric_ladder(1.0 / ssm.a, args.T0, args.count)
    est = dimension.alpha2_estimate(ssm, T, args.tol, args.step)
    io.write_json(args.out, est.summary())
    return EXIT_OK


def _read_measure(path) -> DiscreteMeasure:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r["position"]) for r in rows]
    w = np.array([float(r["weight"]) for r in rows])
    return DiscreteMeasure.from_atoms(x, w / w.sum())


def cmd_young(args):
    if args.x_csv:
        x = _read_measure(args.x_csv)
        y = _read_measure(args.y_csv) if args.y_csv else x
    else:
        x = y = discrete_approximation(_ssm(args), args.approx_level)
    rows = []
    for n in args.levels:
        yc = dimension.young_check(x, y, n)
        rows.append({"n": n, "lhs": yc.lhs, "rhs": yc.rhs, "pass": yc.passed})
    ok = all(r["pass"] for r in rows)
    io.write_json(args.out, {"checks": rows, "pass": ok})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_pushforward(args):
    ssm = _ssm(args)
    F = parse_map(args.map)
    s = _frostman(args, ssm.a, ssm.p)
    rep = pushforward.kaufman_verify(ssm, F, s, args.umax, args.mode, args.samples, args.tol,
                                     check_convex=not args.allow_nonconvex)
    fit = rep.pop("fit")
    if args.out:
        io.write_csv(args.out, ["octave", "u_lo", "u_hi", "envelope"], fit.rows())
    io.write_json(args.summary, rep)
    return EXIT_OK if rep["pass"] else EXIT_FAILED


def cmd_bernoulli(args):
    p = args.p
    if args.unbiased and p != 0.5:
        raise SSMError("--unbiased needs --p 0.5")
    mode = args.mode or constants.default_mode(p)
    if args.target == "diminf":
        bound = constants.bernoulli_diminf_bound(args.a, p, mode, args.variant, args.unbiased)
        inner = args.a**2
    elif args.unbiased:
        bound = constants.bernoulli_dim2_bound_unbiased(args.a, mode, args.variant)
        inner = args.a
    else:
        bound = constants.bernoulli_dim2_bound(args.a, p, mode, args.variant)
        inner = args.a
    io.write_json(args.out, {"a": args.a, "p": p, "target": args.target, "unbiased": args.unbiased,
                             "bound": bound, "n_a": constants.n_a(inner), "mode": mode,
                             "variant": args.variant})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ssmdecay", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def mode_flags(p, variant=True):
        p.add_argument("--mode", choices=constants.MODES, default=None,
                       help="eta mode (default: remark for p = 1/2,1/2, else lemma)")
        if variant:
            p.add_argument("--variant", choices=constants.VARIANTS, default="stated")

    p = sub.add_parser("constants", help="effective constants as JSON")
    p.add_argument("--a", type=number, required=True)
    p.add_argument("--p", type=number_list, default=[0.5, 0.5])
    p.add_argument("--s", default="auto", help="Frostman exponent or 'auto' (open set condition formula)")
    p.add_argument("--kappa", type=number, default=None, help="also solve the flattening equation")
    mode_flags(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("scan", help="|mu_hat| on a frequency grid as CSV")
    _measure_args(p)
    p.add_argument("--tmax", type=number, required=True)
    p.add_argument("--step", type=number, required=True)
    p.add_argument("--tol", type=number, default=1e-9)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cover", help="unit-interval cover of large |mu_hat|")
    _measure_args(p)
    p.add_argument("--tmax", type=number, required=True)
    p.add_argument("--eps", type=number, required=True)
    p.add_argument("--step", type=number, default=0.25)
    p.add_argument("--tol", type=number, default=None, help="default T**-eps / 10")
    p.add_argument("--mode", choices=constants.MODES, default=None)
    p.add_argument("--out", default=None, help="CSV of flagged intervals")
    p.add_argument("--summary", default="-")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("decompose", help="digits a**-j t = r_j + eps_j as CSV")
    p.add_argument("--a", type=number, required=True)
    p.add_argument("--point", type=number, required=True, help="t in [0, 1]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("sset", help="brute-force cover count of S(N, eps_tilde)")
    p.add_argument("--a", type=number, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps-tilde", type=number, required=True)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sset)

    p = sub.add_parser("dim", help="dim_q / dim_inf from dyadic moments")
    _measure_args(p)
    p.add_argument("--q", default="2", help="exponent > 1 or 'inf'")
    p.add_argument("--levels", type=level_range, default=list(range(8, 17)))
    p.add_argument("--approx-level", type=int, default=None)
    p.add_argument("--skip", type=int, default=2, help="coarsest levels left out of the fit")
    p.add_argument("--out", default=None, help="CSV n,s_n,max_q")
    p.add_argument("--summary", default="-")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("alpha2", help="Fourier-energy growth exponent")
    _measure_args(p)
    p.add_argument("--T", type=number_list, default=None, help="explicit T ladder")
    p.add_argument("--T0", type=number, default=27.0, help="first T of the default 1/a ladder")
    p.add_argument("--count", type=int, default=7)
    p.add_argument("--step", type=number, default=None)
    p.add_argument("--tol", type=number, default=1e-8)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_alpha2)

    p = sub.add_parser("young", help="max cell mass of a convolution vs 5 sqrt(s_n s_n)")
    p.add_argument("--a", type=number, default=1 / 3)
    p.add_argument("--t", type=number_list, default=[0.0, 1.0])
    p.add_argument("--p", type=number_list, default=[0.5, 0.5])
    p.add_argument("--approx-level", type=int, default=8)
    p.add_argument("--x-csv", default=None, help="CSV with position,weight columns")
    p.add_argument("--y-csv", default=None)
    p.add_argument("--levels", type=level_range, default=list(range(4, 13)))
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_young)

    p = sub.add_parser("pushforward", help="decay of F(mu)^ against the effective exponent")
    _measure_args(p)
    p.add_argument("--map", required=True, help="e.g. 'x^2', '0.5*x^2 + 3*x', 'exp(1*x)'")
    p.add_argument("--umax", type=number, default=1e5)
    p.add_argument("--samples", type=int, default=128, help="samples per octave")
    p.add_argument("--tol", type=number, default=1e-3)
    p.add_argument("--s", default="auto")
    p.add_argument("--mode", choices=constants.MODES, default=None)
    p.add_argument("--allow-nonconvex", action="store_true", help="skip the F'' > 0 check")
    p.add_argument("--out", default=None, help="CSV octave,u_lo,u_hi,envelope")
    p.add_argument("--summary", default="-")
    p.set_defaults(func=cmd_pushforward)

    p = sub.add_parser("bernoulli-bound", help="dimension lower bounds for Bernoulli convolutions")
    p.add_argument("--a", type=number, required=True)
    p.add_argument("--p", type=number, default=0.5, help="probability of the + sign")
    p.add_argument("--target", choices=("dim2", "diminf"), default="dim2")
    p.add_argument("--unbiased", action="store_true")
    mode_flags(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bernoulli)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args)
    except SSMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
