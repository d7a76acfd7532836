"""Partial-wave sums, scattering amplitudes and differential cross sections.

The incident quasiparticle arrives from chi = 0 travelling towards -x, so
the forward direction is chi = +-pi.  The numerically authoritative
amplitude is the finite partial-wave sum evaluated at the screen distance
k h; the large-kr formula built on Bessel asymptotics is kept as a
diagnostic.
"""
from __future__ import annotations

import cmath
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .model import DerivedParams, partial_wave_indices
from .specfun import DomainError, bessel_j_many, log_tail_bound, phase_minus_i_pow_many

__all__ = [
    "CrossSectionCurve",
    "DivergenceError",
    "ScatteringSetup",
    "TruncationWarning",
    "ab_amplitude",
    "ab_amplitude_partial_wave",
    "ab_cross_section",
    "amplitude_asymptotic",
    "amplitude_numeric",
    "amplitude_numeric_many",
    "auto_truncation_order",
    "cross_section_numeric",
    "partial_wave_coefficients",
    "sweep_angle",
    "sweep_flux",
    "total_wavefunction",
]

KH_MIN = 20.0
KH_WARN = 50.0
DEFAULT_TOL = 1e-10
SQRT_2PI_I = math.sqrt(2.0 * math.pi) * cmath.exp(0.25j * math.pi)
SQRT_2I_OVER_PI = math.sqrt(2.0 / math.pi) * cmath.exp(0.25j * math.pi)


class DivergenceError(ArithmeticError):
    """The closed-form amplitude diverges in the forward direction."""


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ScatteringSetup:
    """Everything needed to evaluate the finite partial-wave amplitude.

    ``order_max`` of ``None`` selects the truncation order automatically
    from ``tol`` (see :func:`auto_truncation_order`).
    """

    alpha_tilde: float
    tan2eps: float
    kh: float
    order_max: Optional[int] = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        for name in ("alpha_tilde", "tan2eps", "kh", "tol"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.tan2eps < 0.0:
            raise DomainError(f"tan2eps must be >= 0, got {self.tan2eps!r}")
        if self.kh < KH_MIN:
            raise DomainError(f"kh must be >= {KH_MIN:g} for the far-field picture, got {self.kh!r}")
        if self.kh < KH_WARN:
            warnings.warn(f"kh={self.kh:g} is not much larger than 2 pi; expect sizeable finite-kh corrections",
                          stacklevel=3)
        if not self.tol > 0.0:
            raise DomainError(f"tol must be > 0, got {self.tol!r}")
        if self.order_max is not None and (int(self.order_max) != self.order_max or self.order_max < 1):
            raise DomainError(f"order_max must be a positive integer, got {self.order_max!r}")

    @property
    def derived(self) -> DerivedParams:
        return DerivedParams.from_flux(self.alpha_tilde, self.tan2eps)

    def truncation_order(self, kr: Optional[float] = None) -> int:
        if self.order_max is not None:
            return int(self.order_max)
        return auto_truncation_order(self.kh if kr is None else kr, self.alpha_tilde, self.tan2eps, self.tol)

    def resolved(self) -> "ScatteringSetup":
        """Copy with the automatic truncation order filled in."""
        return replace(self, order_max=self.truncation_order())


@dataclass
class CrossSectionCurve:
    """Sampled sigma_h and sigma_AB; missing sigma_AB values are NaN."""

    abscissa: np.ndarray
    sigma_h: np.ndarray
    sigma_ab: np.ndarray
    setup: ScatteringSetup
    sweep_kind: str

    def __post_init__(self):
        n = len(self.abscissa)
        if len(self.sigma_h) != n or len(self.sigma_ab) != n:
            raise ValueError("curve columns must share one length")
        if n > 1 and not np.all(np.diff(self.abscissa) > 0):
            raise ValueError("abscissa must be strictly increasing")
        if self.sweep_kind not in ("flux_sweep", "angle_sweep"):
            raise ValueError(f"unknown sweep kind {self.sweep_kind!r}")


# ---------------------------------------------------------------------------
# closed-form Aharonov-Bohm amplitude


def _sin_pi(x):
    if x == round(x):
        return 0.0
    return math.sin(math.pi * math.fmod(x, 2.0))


def _check_open_angle(chi):
    chi = float(chi)
    if not math.isfinite(chi):
        raise DomainError(f"angle must be finite, got {chi!r}")
    if abs(chi) >= math.pi:
        raise DivergenceError(f"closed-form amplitude diverges at chi={chi!r} (forward direction)")
    return chi


def ab_amplitude(alpha_tilde: float, chi: float) -> complex:
    chi = _check_open_angle(chi)
    return _sin_pi(alpha_tilde) / (SQRT_2PI_I * math.cos(0.5 * chi)) * cmath.exp(-0.5j * chi)


def ab_amplitude_partial_wave(alpha_tilde: float, chi: float) -> complex:
    """AB amplitude in the phase convention of the partial-wave sums.

    Summing the outgoing parts of (-i)^|m+alpha| J_|m+alpha|(kr) e^{i m chi}
    gives the closed form times -i (-1)^N e^{-i N chi}, N = floor(alpha_tilde).
    Same modulus as :func:`ab_amplitude`; only this version can be added
    coherently to the barrier correction or compared with F_h.
    """
    n = math.floor(alpha_tilde)
    sign = -1.0 if n % 2 else 1.0
    return ab_amplitude(alpha_tilde, chi) * (-1j * sign) * cmath.exp(-1j * n * chi)


def ab_cross_section(alpha_tilde: float, chi: float) -> float:
    chi = _check_open_angle(chi)
    s = _sin_pi(alpha_tilde)
    c = math.cos(0.5 * chi)
    return s * s / (2.0 * math.pi * c * c)


# ---------------------------------------------------------------------------
# truncation


def auto_truncation_order(kh: float, alpha_tilde: float, tan2eps: float, tol: float) -> int:
    """Smallest M >= ceil(kh) + 10 whose edge terms are bounded below tol.

    The bound used is 4 M (x/2)^nu / Gamma(nu+1) at both nu(M) and nu(-M).
    """
    if not (kh > 0.0 and tol > 0.0):
        raise DomainError("kh and tol must be positive")
    derived = DerivedParams.from_flux(alpha_tilde, tan2eps)
    log_tol = math.log(tol) if math.isfinite(tol) else math.inf
    order = int(math.ceil(kh)) + 10
    while True:
        nus = partial_wave_indices(np.array([order, -order]), derived)
        worst = max(log_tail_bound(float(n), kh) for n in nus)
        if worst + math.log(4.0 * order) < log_tol:
            return order
        order += 1


def _edge_check(nus, kr, tol):
    worst = max(log_tail_bound(float(nus[0]), kr), log_tail_bound(float(nus[-1]), kr))
    if worst > math.log(tol):
        warnings.warn(f"edge partial waves are not negligible (bound {math.exp(worst):.3g} > tol {tol:.3g});"
                      " increase order_max", TruncationWarning, stacklevel=3)


# ---------------------------------------------------------------------------
# finite partial-wave sums


def _outward(order):
    """m = 0, 1, -1, 2, -2, ... up to +-order."""
    m = np.empty(2 * order + 1, dtype=np.int64)
    m[0] = 0
    m[1::2] = np.arange(1, order + 1)
    m[2::2] = -np.arange(1, order + 1)
    return m


def partial_wave_coefficients(setup: ScatteringSetup, kr: float, order: Optional[int] = None):
    """Azimuthal numbers m and coefficients (-i)^nu(m) J_nu(m)(kr).

    The azimuthal numbers come in outward order 0, 1, -1, 2, -2, ...
    """
    kr = float(kr)
    if not (math.isfinite(kr) and kr > 0.0):
        raise DomainError(f"kr must be > 0, got {kr!r}")
    if order is None:
        order = setup.truncation_order(kr)
    m = _outward(order)
    nus = partial_wave_indices(m, setup.derived)
    _edge_check(nus[-2:], kr, setup.tol)
    values, _, _ = bessel_j_many(nus, kr, setup.tol)
    return m, phase_minus_i_pow_many(nus) * values


def _harmonic_sum(m, coeffs, chi):
    terms = coeffs * np.exp(1j * (m * chi))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _incident(kr, alpha_tilde, chi):
    return cmath.exp(-1j * (kr * math.cos(chi) + alpha_tilde * chi))


def _amplitude_from_coeffs(setup, m, coeffs, chi):
    kh = setup.kh
    bracket = _harmonic_sum(m, coeffs, chi) - _incident(kh, setup.alpha_tilde, chi)
    return math.sqrt(kh) * cmath.exp(-1j * kh) * bracket


def _check_closed_angle(chi):
    chi = float(chi)
    if not (math.isfinite(chi) and abs(chi) <= math.pi):
        raise DomainError(f"angle must lie in [-pi, pi], got {chi!r}")
    return chi


def amplitude_numeric_many(setup: ScatteringSetup, chis) -> np.ndarray:
    """F_h at several angles, reusing one set of Bessel evaluations."""
    chis = [_check_closed_angle(c) for c in np.atleast_1d(chis)]
    m, coeffs = partial_wave_coefficients(setup, setup.kh)
    return np.array([_amplitude_from_coeffs(setup, m, coeffs, c) for c in chis], dtype=complex)


def amplitude_numeric(setup: ScatteringSetup, chi: float) -> complex:
    """Finite partial-wave amplitude at the screen distance kh."""
    return complex(amplitude_numeric_many(setup, [chi])[0])


def cross_section_numeric(setup: ScatteringSetup, chi: float) -> float:
    f = amplitude_numeric(setup, chi)
    return f.real * f.real + f.imag * f.imag


def total_wavefunction(setup: ScatteringSetup, kr: float, chi: float) -> complex:
    """Sum over m of (-i)^nu J_nu(kr) e^{i m chi}, time factor dropped."""
    chi = _check_closed_angle(chi)
    m, coeffs = partial_wave_coefficients(setup, kr)
    return _harmonic_sum(m, coeffs, chi)


def amplitude_asymptotic(setup: ScatteringSetup, chi: float) -> complex:
    """Large-kr amplitude: AB part minus the barrier correction.

    The AB part is taken in the partial-wave phase convention, which is the
    one the barrier sum is derived in; the bare closed form differs by a
    flux- and angle-dependent phase.
    """
    chi = _check_open_angle(chi)
    derived = setup.derived
    order = setup.truncation_order()
    m = _outward(order)
    shifted = np.abs(m + derived.alpha_tilde)
    c = derived.alpha_tilde * derived.tan2eps
    nus = np.hypot(m + derived.alpha_tilde, c)
    # nu - |m + alpha| without cancellation
    with np.errstate(invalid="ignore"):
        gap = np.where(nus > 0.0, c * c / (nus + shifted), 0.0)
    total = np.fmod(nus + shifted, 4.0)
    terms = np.sin(0.5 * math.pi * gap) * np.exp(1j * (m * chi) - 0.5j * math.pi * total)
    barrier = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return ab_amplitude_partial_wave(derived.alpha_tilde, chi) - SQRT_2I_OVER_PI * barrier


# ---------------------------------------------------------------------------
# sweeps


def worker_count(default: int = 1) -> int:
    """Parallelism cap from FLUXSCAT_THREADS (positive integer)."""
    raw = os.environ.get("FLUXSCAT_THREADS")
    if raw is None or raw.strip() == "":
        return default
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"FLUXSCAT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"FLUXSCAT_THREADS must be a positive integer, got {raw!r}")
    return n


def _grid(lo, hi, steps):
    if int(steps) != steps or steps < 2:
        raise DomainError(f"a sweep needs at least 2 steps, got {steps!r}")
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise DomainError(f"sweep range must satisfy min < max, got [{lo!r}, {hi!r}]")
    return np.linspace(lo, hi, int(steps))


def _ab_or_nan(alpha_tilde, chi):
    try:
        return ab_cross_section(alpha_tilde, chi)
    except DivergenceError:
        return math.nan


def _flux_point(args):
    template, alpha_tilde, chi = args
    setup = replace(template, alpha_tilde=float(alpha_tilde))
    return cross_section_numeric(setup, chi)


def _map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def sweep_flux(template: ScatteringSetup, alpha_min: float, alpha_max: float, steps: int, chi: float,
               workers: Optional[int] = None) -> CrossSectionCurve:
    """sigma_h and sigma_AB against alpha_tilde at one angle.

    The template's ``alpha_tilde`` is ignored.  Each grid point is computed
    independently, so the result does not depend on ``workers``.
    """
    chi = _check_closed_angle(chi)
    alphas = _grid(alpha_min, alpha_max, steps)
    workers = worker_count() if workers is None else workers
    sigma_h = np.array(_map(_flux_point, [(template, a, chi) for a in alphas], workers))
    sigma_ab = np.array([_ab_or_nan(a, chi) for a in alphas])
    return CrossSectionCurve(alphas, sigma_h, sigma_ab, template, "flux_sweep")


def sweep_angle(setup: ScatteringSetup, chi_min: float, chi_max: float, steps: int) -> CrossSectionCurve:
    """sigma_h and sigma_AB against chi for one flux value."""
    chis = _grid(chi_min, chi_max, steps)
    if chis[0] < -math.pi or chis[-1] > math.pi:
        raise DomainError("angle sweep must stay within [-pi, pi]")
    amps = amplitude_numeric_many(setup, chis)
    sigma_h = amps.real ** 2 + amps.imag ** 2
    sigma_ab = np.array([_ab_or_nan(setup.alpha_tilde, c) for c in chis])
    return CrossSectionCurve(chis, sigma_h, sigma_ab, setup, "angle_sweep")
