"""Command-line interface.

Exit codes: 0 success, 1 input error (bad file, bad flags), 2 mathematical
refusal (the preconditions of a construction are not met).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import covstat, invapprox, mixing, spectral, wiener
from .errors import InputError, RefusalError
from .matcore import BandedMatrix, as_array, op_norm
from .textio import (format_matrix, format_samples, parse_matrix, parse_points, parse_samples,
                     parse_symbol)

EXIT_OK, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _text(obj, prefix=""):
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            lines.append(_text(val, prefix + "  ").rstrip("\n"))
        else:
            lines.append(f"{prefix}{key} = {val!r}" if isinstance(val, float) else f"{prefix}{key} = {val}")
    return "\n".join(lines) + "\n"


def _emit(report, args):
    text = _text(report) if getattr(args, "format", "json") == "text" else _json(report)
    _write(getattr(args, "report", None), text)


def _load_symbol(spec, mmax):
    if spec == "example53":
        return wiener.example53_symbol(mmax)
    return parse_symbol(_read(spec))


# ---------------------------------------------------------------------------

def cmd_approx_inverse(args):
    A = parse_matrix(_read(args.matrix))
    dense = as_array(A)
    construction = args.construction
    if construction == "auto":
        if args.k is not None:
            construction = "bdo"
        elif np.array_equal(dense, dense.T):
            construction = "spd"
        else:
            construction = "general"
    terms = args.terms
    if terms is None and args.tol is None:
        raise InputError("give --terms or --tol")
    if construction == "spd":
        bounds = spectral.spd_bounds(dense)
        if terms is None:
            terms = invapprox.terms_for_tolerance(bounds, "spd", args.tol)
        cert = invapprox.neumann_spd(A, terms, bounds)
    elif construction == "general":
        bounds = spectral.singular_bounds(dense)
        if terms is None:
            terms = invapprox.terms_for_tolerance(bounds, "general", args.tol)
        cert = invapprox.neumann_general(A, terms, bounds)
    else:
        if args.k is None:
            raise InputError("--construction bdo needs --k")
        if terms is None:
            raise InputError("--construction bdo needs --terms")
        cert = invapprox.bdo_inverse(dense, args.k, terms)
    report = cert.as_dict()
    if args.oracle:
        report["achieved_error"] = op_norm(np.linalg.inv(dense) - cert.approx.to_dense())
    if args.out is not None:
        _write(args.out, format_matrix(cert.approx))
    _emit(report, args)
    return EXIT_OK


def cmd_wiener(args):
    if (args.matrix is None) == (args.symbol is None):
        raise InputError("give exactly one of --matrix or --symbol")
    if args.matrix is not None:
        A = parse_matrix(_read(args.matrix))
        report = {"wiener_norm": wiener.wiener_norm(A), "op_norm": op_norm(A)}
        if args.points is not None:
            metric = parse_points(_read(args.points))
            report["generalized_wiener_norm"] = wiener.generalized_wiener_norm(A, metric)
    else:
        report = _symbol_report(_load_symbol(args.symbol, args.mmax), None)
    _emit(report, args)
    return EXIT_OK


def _symbol_report(f, K_values):
    lo, hi = wiener.symbol_range_bounds(f)
    width = f.support_width()
    report = {
        "terms": len(f),
        "support_width": width,
        "symmetric": f.is_symmetric(),
        "wiener_norm": wiener.symbol_wiener_norm(f),
        "range_lower": lo,
        "range_upper": hi,
        "positive": lo > 0.0,
        "sobolev_half_partial": wiener.sobolev_half_partial(f, width),
    }
    if K_values:
        report["sobolev_half_partials"] = {str(K): wiener.sobolev_half_partial(f, K) for K in K_values}
    return report


def cmd_symbol_report(args):
    f = _load_symbol(args.symbol, args.mmax)
    _emit(_symbol_report(f, args.K), args)
    return EXIT_OK


def cmd_mixing(args):
    S = as_array(parse_matrix(_read(args.matrix)))
    report = mixing.mixing_check(S, args.pmax, hellinger=args.hellinger, inverse=args.inverse)
    if args.csv is not None:
        _write(args.csv, report.to_csv())
    _emit(report.as_dict(), args)
    return EXIT_OK


def cmd_estimate(args):
    Sigma = as_array(parse_matrix(_read(args.truth)))
    k = args.k if args.k == "auto" else _parse_int(args.k, "--k")
    _, _, banded, precision, report = covstat.estimate_pipeline(Sigma, args.N, args.seed, k, args.terms)
    if args.out_cov is not None:
        _write(args.out_cov, format_matrix(BandedMatrix.from_dense(banded.sigma_hat, banded.k)))
    if args.out_precision is not None and precision is not None:
        width = min(precision.k * precision.terms, Sigma.shape[0] - 1)
        _write(args.out_precision, format_matrix(BandedMatrix.from_dense(precision.sigma_hat, width)))
    _emit(report, args)
    return EXIT_OK


def cmd_sample(args):
    Sigma = as_array(parse_matrix(_read(args.truth)))
    data = covstat.sample_gaussian(Sigma, args.N, args.seed)
    _write(args.out, format_samples(data.observations))
    return EXIT_OK


def cmd_covariance(args):
    """Empirical (optionally banded) covariance of a samples file."""
    X = parse_samples(_read(args.samples))
    est = covstat.empirical_cov(covstat.SampleSet(X))
    S = est.sigma_hat
    if args.k is not None:
        S = covstat.banded_cov_estimator(est, args.k).sigma_hat
    _write(args.out, format_matrix(S))
    return EXIT_OK


def _parse_int(text, flag):
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{flag} expects an integer or 'auto', got {text!r}") from None


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="bandinv", description="Banded inverses with certified error bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--report", help="write the report here (default: stdout)")
        sp.add_argument("--format", choices=["json", "text"], default="json")

    sp = sub.add_parser("approx-inverse", help="banded approximate inverse with certificate")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--construction", choices=["auto", "spd", "general", "bdo"], default="auto")
    sp.add_argument("--terms", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--k", type=int, help="truncation half-bandwidth (band-dominated input)")
    sp.add_argument("--oracle", action="store_true", help="also report the achieved error")
    sp.add_argument("--out", help="write the approximant (matrix text format)")
    common(sp)
    sp.set_defaults(func=cmd_approx_inverse)

    sp = sub.add_parser("wiener-norm", aliases=["wiener"], help="Wiener norm of a matrix or symbol")
    sp.add_argument("--matrix")
    sp.add_argument("--points", help="point cloud for the generalized Wiener norm")
    sp.add_argument("--symbol", help="symbol file or 'example53'")
    sp.add_argument("--mmax", type=int, default=1000)
    common(sp)
    sp.set_defaults(func=cmd_wiener)

    sp = sub.add_parser("symbol-report", help="Wiener norm, Sobolev partial sums, range bounds")
    sp.add_argument("--symbol", required=True, help="symbol file or 'example53'")
    sp.add_argument("--mmax", type=int, default=1000)
    sp.add_argument("--K", type=int, action="append", help="Sobolev cutoff (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_symbol_report)

    sp = sub.add_parser("mixing-check", help="beta-mixing criterion profile")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--hellinger", type=int, nargs=4, metavar=("M", "N", "P", "K"))
    sp.add_argument("--inverse", action="store_true", help="also profile the inverse")
    sp.add_argument("--csv", help="write the (p, b(p)) profile as CSV")
    common(sp)
    sp.set_defaults(func=cmd_mixing)

    sp = sub.add_parser("estimate", help="banded covariance / precision estimation on synthetic data")
    sp.add_argument("--truth", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--k", required=True, help="integer or 'auto'")
    sp.add_argument("--terms", type=int, required=True)
    sp.add_argument("--out-cov")
    sp.add_argument("--out-precision")
    common(sp)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("sample", help="draw Gaussian samples")
    sp.add_argument("--truth", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("covariance", help="empirical (banded) covariance of a samples file")
    sp.add_argument("--samples", required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_covariance)
    return p


def _thread_limit():
    raw = os.environ.get("BANDED_INVERSE_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"BANDED_INVERSE_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InputError("BANDED_INVERSE_THREADS must be positive")
    return n


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        limit = _thread_limit()
        if limit is None:
            return args.func(args)
        from threadpoolctl import threadpool_limits
        with threadpool_limits(limits=limit):
            return args.func(args)
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
