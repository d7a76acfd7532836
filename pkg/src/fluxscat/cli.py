"""``fluxscat`` command-line front end.

Exit codes: 0 success, 2 invalid usage, 3 numerical accuracy failure.
CSV output uses 17 significant digits, comma delimiters and LF endings;
a missing value is an empty field.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
import warnings
from dataclasses import asdict

from . import __version__
from .model import MediumParams, derive_params, dispersion_k, omega_from_k
from .scattering import (
    DivergenceError,
    ScatteringSetup,
    amplitude_asymptotic,
    amplitude_numeric_many,
    sweep_angle,
    sweep_flux,
    worker_count,
)
from .specfun import METHOD_NAMES, AccuracyError, DomainError, bessel_j, bessel_j_oracle

EXIT_OK, EXIT_USAGE, EXIT_ACCURACY = 0, 2, 3


class UsageError(Exception):
    pass


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return ""
    return format(value, ".17g")


def _finite_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _positive_float(text):
    value = _finite_float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return value


def _nonneg_float(text):
    value = _finite_float(text)
    if value < 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def _angle(text):
    value = _finite_float(text)
    if abs(value) > math.pi:
        raise argparse.ArgumentTypeError(f"angle must lie in [-pi, pi]: {text!r}")
    return value


def _order(text):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be a positive integer or 'auto': {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"order must be >= 1: {text!r}")
    return value


def _steps(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"steps must be an integer: {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"a sweep needs at least 2 steps, got {value}")
    return value


def _add_common(p):
    p.add_argument("--tol", type=_positive_float, default=1e-10,
                   help="Bessel tolerance and truncation target (default 1e-10)")
    p.add_argument("-o", "--output", default="-", help="output CSV path, '-' for stdout (default)")


def _add_setup(p, alpha=True, order_default=None):
    if alpha:
        p.add_argument("--alpha-tilde", type=_finite_float, default=3.5,
                       help="renormalised flux quanta count, signed (default 3.5)")
    p.add_argument("--tan2eps", type=_nonneg_float, default=0.2, help="b / (omega hbar) (default 0.2)")
    p.add_argument("--kh", type=_finite_float, default=100.0, help="k times screen distance, >= 20 (default 100)")
    p.add_argument("--order-max", type=_order, default=order_default,
                   help="truncation order M or 'auto' (default %s)" % ("auto" if order_default is None else order_default))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxscat",
        description="Scattering of quasiparticles on a magnetic flux line.",
        epilog="Flux is given as the signed renormalised count alpha_tilde; the published flux-sweep "
               "figure puts -alpha_tilde on its horizontal axis.  FLUXSCAT_THREADS caps worker processes.",
    )
    parser.add_argument("--version", action="version", version=f"fluxscat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-alpha", help="sigma_h and sigma_AB against alpha_tilde at fixed chi")
    _add_setup(p, alpha=False)
    p.add_argument("--chi", type=_angle, default=math.pi / 15, help="angle in rad (default pi/15)")
    p.add_argument("--alpha-min", type=_finite_float, default=0.0)
    p.add_argument("--alpha-max", type=_finite_float, default=5.0)
    p.add_argument("--alpha-steps", type=_steps, default=501)
    _add_common(p)

    p = sub.add_parser("sweep-chi", help="sigma_h and sigma_AB against chi at fixed alpha_tilde")
    _add_setup(p, order_default=600)
    p.add_argument("--chi-min", type=_angle, default=-2.9)
    p.add_argument("--chi-max", type=_angle, default=2.9)
    p.add_argument("--chi-steps", type=_steps, default=581)
    _add_common(p)

    p = sub.add_parser("amplitude", help="F_h and the asymptotic amplitude at given angles")
    _add_setup(p)
    p.add_argument("--chi", type=_angle, nargs="+", default=[math.pi / 15])
    _add_common(p)

    p = sub.add_parser("bessel", help="debug: J_nu(x) with method, error estimate and oracle value")
    p.add_argument("--nu", type=_nonneg_float, nargs="+", required=True)
    p.add_argument("--x", type=_nonneg_float, nargs="+", required=True)
    _add_common(p)

    p = sub.add_parser("dispersion", help="lambda, omega hbar, k, tan2eps and alpha_tilde from raw inputs")
    p.add_argument("--a", type=_finite_float, default=0.0, help="normal potential a")
    p.add_argument("--b", type=_nonneg_float, default=0.0, help="anomalous potential b >= 0")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=_nonneg_float, help="wavenumber")
    g.add_argument("--omega-hbar", type=_positive_float, help="beam energy omega hbar")
    p.add_argument("--alpha", type=_finite_float, default=0.0, help="bare flux quanta count")
    _add_common(p)
    return parser


def _setup_from(args, alpha_tilde=None):
    return ScatteringSetup(
        alpha_tilde=args.alpha_tilde if alpha_tilde is None else alpha_tilde,
        tan2eps=args.tan2eps,
        kh=args.kh,
        order_max=args.order_max,
        tol=args.tol,
    )


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(args, text, meta, stdout):
    if args.output == "-":
        stdout.write(text)
        return
    path = os.path.abspath(args.output)
    directory = os.path.dirname(path)
    for target, payload in ((path, text), (path + ".meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")):
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fluxscat-")
        try:
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(payload)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def run_sweep_alpha(args):
    if args.alpha_max <= args.alpha_min:
        raise UsageError("--alpha-max must exceed --alpha-min")
    template = _setup_from(args, alpha_tilde=0.0)
    curve = sweep_flux(template, args.alpha_min, args.alpha_max, args.alpha_steps, args.chi,
                       workers=worker_count())
    rows = zip(curve.abscissa, curve.sigma_h, curve.sigma_ab)
    return _csv_text(["alpha_tilde", "sigma_h", "sigma_ab"], rows), {"setup": asdict(template), "chi": args.chi}


def run_sweep_chi(args):
    if args.chi_max <= args.chi_min:
        raise UsageError("--chi-max must exceed --chi-min")
    setup = _setup_from(args)
    curve = sweep_angle(setup, args.chi_min, args.chi_max, args.chi_steps)
    rows = zip(curve.abscissa, curve.sigma_h, curve.sigma_ab)
    return _csv_text(["chi_rad", "sigma_h", "sigma_ab"], rows), {"setup": asdict(setup)}


def run_amplitude(args):
    setup = _setup_from(args)
    fh = amplitude_numeric_many(setup, args.chi)
    rows = []
    for chi, f in zip(args.chi, fh):
        try:
            fa = amplitude_asymptotic(setup, chi)
        except DivergenceError:
            fa = complex(math.nan, math.nan)
        rows.append((chi, f.real, f.imag, f.real * f.real + f.imag * f.imag, fa.real, fa.imag))
    header = ["chi_rad", "re_fh", "im_fh", "sigma_h", "re_fasym", "im_fasym"]
    return _csv_text(header, rows), {"setup": asdict(setup)}


def run_bessel(args):
    rows = []
    for nu in args.nu:
        for x in args.x:
            ev = bessel_j(nu, x, args.tol)
            try:
                oracle = bessel_j_oracle(nu, x)
            except (DomainError, AccuracyError):
                oracle = math.nan
            rows.append((nu, x, ev.value, ev.method, ev.abs_error_estimate, oracle))
    header = ["nu", "x", "value", "method", "abs_error_estimate", "oracle_value"]
    return _csv_text(header, rows), {"tol": args.tol, "methods": list(METHOD_NAMES)}


def run_dispersion(args):
    if args.k is not None:
        k = args.k
        lam = args.a + 0.5 * k * k
        omega = omega_from_k(k, args.a, args.b)
        if omega <= 0.0:
            raise DomainError("omega hbar vanishes at this k; the rotation angle is undefined")
    else:
        omega = args.omega_hbar
        lam = math.hypot(args.b, omega)
        k = dispersion_k(lam, args.a)
    derived = derive_params(MediumParams(args.a, args.b, omega), args.alpha)
    header = ["a", "b", "omega_hbar", "k", "lambda", "tan2eps", "cos2eps", "alpha_tilde"]
    row = (args.a, args.b, omega, k, lam, derived.tan2eps, derived.cos2eps, derived.alpha_tilde)
    return _csv_text(header, [row]), {"alpha": args.alpha}


COMMANDS = {
    "sweep-alpha": run_sweep_alpha,
    "sweep-chi": run_sweep_chi,
    "amplitude": run_amplitude,
    "bessel": run_bessel,
    "dispersion": run_dispersion,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.output != "-" and not os.path.isdir(os.path.dirname(os.path.abspath(args.output))):
        print(f"fluxscat: output directory does not exist: {args.output}", file=stderr)
        return EXIT_USAGE

    started = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            text, meta = COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"fluxscat: {exc}", file=stderr)
        return EXIT_USAGE
    except AccuracyError as exc:
        print(f"fluxscat: accuracy failure: {exc}", file=stderr)
        return EXIT_ACCURACY
    meta.update({
        "command": args.command,
        "arguments": {k: v for k, v in vars(args).items() if k != "command"},
        "version": __version__,
        "wall_time_s": time.perf_counter() - started,
    })
    _emit(args, text, meta, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
