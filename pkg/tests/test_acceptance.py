"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s -v``.
"""
import cmath
import math
import os
import subprocess
import sys
import time

import numpy as np

from fluxscat.model import MediumParams, derive_params, omega_from_k
from fluxscat.scattering import (
    ScatteringSetup,
    ab_cross_section,
    amplitude_asymptotic,
    amplitude_numeric_many,
    cross_section_numeric,
    sweep_angle,
    sweep_flux,
    total_wavefunction,
)
from fluxscat.specfun import bessel_j, bessel_j_oracle

CHI0 = math.pi / 15


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_c01_special_function_accuracy(capsys):
    started = time.perf_counter()
    rng = np.random.default_rng(20240611)
    nus = rng.uniform(0.0, 150.0, 200)
    xs = rng.uniform(0.5, 200.0, 200)
    bad = 0
    for nu, x in zip(nus, xs):
        got = bessel_j(nu, x).value
        ref = bessel_j_oracle(nu, x)
        if abs(got - ref) > max(1e-9 * abs(ref), 1e-12):
            bad += 1
    s, c = np.sin, np.cos
    closed = {
        0.5: lambda x: math.sqrt(2 / (math.pi * x)) * s(x),
        1.5: lambda x: math.sqrt(2 / (math.pi * x)) * (s(x) / x - c(x)),
        2.5: lambda x: math.sqrt(2 / (math.pi * x)) * ((3 / x ** 2 - 1) * s(x) - 3 / x * c(x)),
    }
    worst = 0.0
    for nu, f in closed.items():
        for x in np.linspace(0.1, 200.0, 1000):
            ref = f(x)
            worst = max(worst, abs(bessel_j(nu, x).value - ref) / abs(ref))
    elapsed = time.perf_counter() - started
    report(capsys, 1, bad == 0 and worst <= 1e-10 and elapsed < 10.0,
           f"{bad}/200 oracle mismatches, worst half-integer rel err {worst:.2e}, {elapsed:.1f} s")


def test_c02_plane_wave_identity(capsys):
    s = ScatteringSetup(0.0, 0.0, 50.0)
    worst = max(abs(total_wavefunction(s, 50.0, chi) - cmath.exp(-50j * math.cos(chi)))
                for chi in np.linspace(-math.pi, math.pi, 100))
    report(capsys, 2, worst <= 1e-8, f"max reconstruction error {worst:.2e} over 100 angles")


def test_c03_ab_oracle_equivalence(capsys):
    started = time.perf_counter()
    chis = np.linspace(-2.0, 2.0, 201)
    worst = 0.0
    for alpha in (0.25, 0.5, 1.5, 3.5):
        amps = amplitude_numeric_many(ScatteringSetup(alpha, 0.0, 100.0), chis)
        for chi, f in zip(chis, amps):
            sab = ab_cross_section(alpha, chi)
            worst = max(worst, abs(abs(f) ** 2 - sab) / max(sab, 1e-6))
    elapsed = time.perf_counter() - started
    report(capsys, 3, worst <= 0.15 and elapsed < 60.0,
           f"max relative deviation {worst:.4f} (limit 0.15), {elapsed:.1f} s")


def test_c04_integer_flux_null(capsys):
    sig = [cross_section_numeric(ScatteringSetup(a, 0.0, 100.0), CHI0) for a in (1.0, 2.0, 3.0)]
    report(capsys, 4, max(sig) < 1e-6, "sigma_h at alpha 1,2,3: " + ", ".join(f"{v:.1e}" for v in sig))


def test_c05_continuous_effect(capsys):
    started = time.perf_counter()
    template = ScatteringSetup(0.0, 0.2, 100.0, order_max=900)
    curve = sweep_flux(template, 0.0, 5.0, 501, CHI0)
    at = {a: i for i, a in enumerate(np.round(curve.abscissa, 12))}
    floor = curve.sigma_h[at[0.0]]
    integers = [curve.sigma_h[at[float(a)]] for a in (1, 2, 3, 4)]
    ab_zero = all(curve.sigma_ab[at[float(a)]] == 0.0 for a in (1, 2, 3, 4))
    ok = floor < 1e-8 and ab_zero and all(v > 1e3 * floor for v in integers)
    elapsed = time.perf_counter() - started
    report(capsys, 5, ok, f"noise floor {floor:.1e}, sigma_h at 1..4 = "
           + ", ".join(f"{v:.3g}" for v in integers) + f", sigma_AB zero: {ab_zero}, {elapsed:.1f} s")


def test_c06_angular_structure(capsys):
    curve = sweep_angle(ScatteringSetup(3.5, 0.2, 100.0, order_max=600), -2.8, 2.8, 561)
    sh, sab, chi = curve.sigma_h, curve.sigma_ab, curve.abscissa
    finite = bool(np.all(np.isfinite(sh)))
    peaks = np.flatnonzero((sh[1:-1] > sh[:-2]) & (sh[1:-1] > sh[2:])) + 1
    spacing = float(np.median(np.diff(chi[peaks])))
    pos = chi >= 0
    smooth = bool(np.all(np.diff(sab[pos]) > 0) and np.all(np.diff(sab[~pos]) < 0))
    symmetric = bool(np.allclose(sab, sab[::-1], rtol=1e-12))
    ok = finite and 0.05 <= spacing <= 0.08 and smooth and symmetric
    report(capsys, 6, ok, f"{len(peaks)} maxima, median spacing {spacing:.4f} rad, "
           f"sigma_AB increasing in |chi|: {smooth}")


def test_c07_truncation_convergence(capsys):
    a = cross_section_numeric(ScatteringSetup(3.5, 0.2, 100.0, order_max=900), CHI0)
    b = cross_section_numeric(ScatteringSetup(3.5, 0.2, 100.0, order_max=1200), CHI0)
    report(capsys, 7, abs(a - b) < 1e-9, f"|sigma_h(900) - sigma_h(1200)| = {abs(a - b):.1e}")


def test_c08_dispersion_consistency(capsys):
    rng = np.random.default_rng(8)
    worst, n = 0.0, 0
    while n < 100:
        a, b, k = rng.uniform(-5, 5), rng.uniform(0, 5), rng.uniform(0, 5)
        lam = a + 0.5 * k * k
        if lam <= b:
            continue
        omega = omega_from_k(k, a, b)
        derived = derive_params(MediumParams(a, b, omega), 1.0)
        worst = max(worst, abs(lam * lam - (b * b + omega * omega)) / (lam * lam),
                    abs(derived.lam - lam) / lam)
        n += 1
    report(capsys, 8, worst <= 1e-12, f"worst relative residual {worst:.1e} over 100 samples")


def test_c09_asymptotic_vs_numeric(capsys):
    s = ScatteringSetup(3.5, 0.2, 100.0)
    chis = [0.5, 1.0, 1.5]
    numeric = amplitude_numeric_many(s, chis)
    devs = [abs(abs(amplitude_asymptotic(s, c)) - abs(f)) / abs(f) for c, f in zip(chis, numeric)]
    report(capsys, 9, max(devs) <= 0.15, "relative modulus gaps " + ", ".join(f"{d:.3f}" for d in devs))


def test_c10_determinism(capsys, tmp_path):
    verdicts = []
    for kind, extra in (("sweep-alpha", ["--alpha-steps", "41"]), ("sweep-chi", ["--chi-steps", "41"])):
        blobs = []
        for threads in (1, 4, 1):
            out = tmp_path / f"{kind}-{len(blobs)}.csv"
            env = dict(os.environ, FLUXSCAT_THREADS=str(threads))
            subprocess.run([sys.executable, "-m", "fluxscat", kind, *extra, "-o", str(out)],
                           env=env, check=True)
            blobs.append(out.read_bytes())
        verdicts.append((kind, blobs[0] == blobs[1] == blobs[2]))
    report(capsys, 10, all(v for _, v in verdicts),
           "byte-identical CSV for FLUXSCAT_THREADS=1,4 and a rerun: "
           + ", ".join(f"{k} {v}" for k, v in verdicts))
