"""Medium parameters, the Bogolyubov rotation and the partial-wave index map.

Units: hbar = m0 = 1.  Everything downstream depends only on the
renormalised flux alpha_tilde, tan(2 eps) = b / (omega hbar) and k h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError

__all__ = [
    "DerivedParams",
    "MediumParams",
    "derive_params",
    "dispersion_k",
    "effective_potential",
    "omega_from_k",
    "partial_wave_index",
    "partial_wave_indices",
]

M_LIMIT = 10**6


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class MediumParams:
    """Normal potential ``a``, anomalous potential ``b`` and beam energy."""

    a: float
    b: float
    omega_hbar: float

    def __post_init__(self):
        _finite("a", self.a)
        if not (math.isfinite(self.b) and self.b >= 0.0):
            raise DomainError(f"b must be finite and >= 0, got {self.b!r}")
        if not (math.isfinite(self.omega_hbar) and self.omega_hbar > 0.0):
            raise DomainError(f"omega_hbar must be finite and > 0, got {self.omega_hbar!r}")


@dataclass(frozen=True)
class DerivedParams:
    tan2eps: float
    cos2eps: float
    alpha_tilde: float
    lam: float = 1.0

    @classmethod
    def from_flux(cls, alpha_tilde: float, tan2eps: float) -> "DerivedParams":
        """Build directly from the renormalised flux and barrier strength.

        ``lam`` is left at 1: the scattering amplitude does not depend on it.
        """
        alpha_tilde = _finite("alpha_tilde", alpha_tilde)
        tan2eps = _finite("tan2eps", tan2eps)
        if tan2eps < 0.0:
            raise DomainError(f"tan2eps must be >= 0, got {tan2eps!r}")
        return cls(tan2eps, 1.0 / math.sqrt(1.0 + tan2eps * tan2eps), alpha_tilde)


def derive_params(medium: MediumParams, alpha: float) -> DerivedParams:
    """Rotation angle, renormalised flux and quasiparticle energy."""
    alpha = _finite("alpha", alpha)
    if not medium.omega_hbar > 0.0:
        raise DomainError("omega_hbar must be positive")
    tan2eps = medium.b / medium.omega_hbar
    cos2eps = 1.0 / math.sqrt(1.0 + tan2eps * tan2eps)
    return DerivedParams(
        tan2eps=tan2eps,
        cos2eps=cos2eps,
        alpha_tilde=alpha * cos2eps,
        lam=math.hypot(medium.b, medium.omega_hbar),
    )


def partial_wave_index(m: int, derived: DerivedParams) -> float:
    """nu(m) = sqrt((m + alpha_tilde)^2 + (alpha_tilde tan2eps)^2), positive root."""
    if int(m) != m or abs(m) > M_LIMIT:
        raise DomainError(f"azimuthal number must be an integer with |m| <= {M_LIMIT}, got {m!r}")
    return math.hypot(int(m) + derived.alpha_tilde, derived.alpha_tilde * derived.tan2eps)


def partial_wave_indices(m, derived: DerivedParams) -> np.ndarray:
    m = np.asarray(m)
    if m.size and np.abs(m).max() > M_LIMIT:
        raise DomainError(f"azimuthal numbers must satisfy |m| <= {M_LIMIT}")
    return np.hypot(m + derived.alpha_tilde, derived.alpha_tilde * derived.tan2eps)


def dispersion_k(lam: float, a: float) -> float:
    """Wavenumber from the gap spectrum lam = a + k^2 / 2."""
    lam = _finite("lambda", lam)
    a = _finite("a", a)
    if lam <= a:
        raise DomainError(f"no propagating mode: lambda={lam!r} <= a={a!r}")
    return math.sqrt(2.0 * (lam - a))


def omega_from_k(k: float, a: float, b: float) -> float:
    """omega hbar = sqrt(a^2 - b^2 + a k^2 + k^4 / 4)."""
    k = _finite("k", k)
    a = _finite("a", a)
    b = _finite("b", b)
    if k < 0.0:
        raise DomainError(f"k must be >= 0, got {k!r}")
    # (a + k^2/2)^2 - b^2, factored to avoid cancellation
    lam = a + 0.5 * k * k
    radicand = (lam - b) * (lam + b)
    if radicand < 0.0:
        raise DomainError(f"negative radicand {radicand!r}: no real omega for k={k!r}")
    return math.sqrt(radicand)


def effective_potential(r: float, derived: DerivedParams, a: float) -> float:
    """V(r) = (alpha_tilde tan2eps)^2 / (2 r^2) + a."""
    r = _finite("r", r)
    if r <= 0.0:
        raise DomainError(f"r must be > 0, got {r!r}")
    c = derived.alpha_tilde * derived.tan2eps
    return c * c / (2.0 * r * r) + float(a)
