"""Bessel functions of the first kind for real order nu >= 0 and real x >= 0.

Four evaluation regimes are used:

* ascending power series (small x, or order large enough that the
  alternating terms barely cancel), summed as a ratio recurrence scaled by
  the log-space prefactor (x/2)^nu / Gamma(nu+1);
* Hankel's large-argument expansion (x >= 25, x >= 2 nu, accepted only
  when its own truncation error is small enough);
* Gauss-Legendre quadrature along the steepest-descent path of the
  Sommerfeld integral when nu >= x (positive integrand, no cancellation);
* Gauss-Legendre quadrature of Schlaefli's real integral when nu < x.

Everything is vectorised over the order for a fixed argument, since the
scattering sums need many orders at the same kr.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln as _lgamma
from scipy.special import zeta as _zeta

__all__ = [
    "AccuracyError",
    "BesselEval",
    "DomainError",
    "UNDERFLOW_FLOOR",
    "bessel_j",
    "bessel_j_many",
    "bessel_j_oracle",
    "log_gamma",
    "log_tail_bound",
    "phase_minus_i_pow",
    "tail_bound",
]

EPS = np.finfo(float).eps
UNDERFLOW_FLOOR = 1e-280
LOG_UNDERFLOW_FLOOR = math.log(UNDERFLOW_FLOOR)
NU_MAX = 5000.0
X_MAX = 10000.0
DEFAULT_TOL = 1e-12
_LN2 = math.log(2.0)  # ln(x) - ln 2 survives subnormal x, where 0.5 * x rounds to 0

# series is used while sum|terms| / |sum| ~ exp(x^2 / (2(nu+1))) stays below 1e3
_SERIES_CANCEL = 2.0 * math.log(1e3)
_SERIES_ALWAYS_X = 10.0
_HANKEL_MIN_X = 25.0

SERIES, ASYMPTOTIC, QUADRATURE = 0, 1, 2
METHOD_NAMES = ("series", "asymptotic", "quadrature")


class DomainError(ValueError):
    """Argument outside the domain an operation is defined on."""


class AccuracyError(ArithmeticError):
    """A numerical method could not reach the requested accuracy.

    ``estimate`` carries the best value obtained and ``error`` its estimated
    absolute error.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class BesselEval:
    value: float
    method: str
    abs_error_estimate: float


# ln Gamma(1+z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k, |z| < 1
_LGAMMA1P_COEF = [-float(np.euler_gamma)] + [(-1.0) ** k * float(_zeta(k)) / k for k in range(2, 40)]


def _lgamma1p(z):
    total = 0.0
    for c in reversed(_LGAMMA1P_COEF):
        total = total * z + c
    return total * z


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Near the zeros at x = 1 and x = 2 a Taylor series keeps full relative
    accuracy; elsewhere this is the C library lgamma.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma needs a finite positive argument, got {x!r}")
    if abs(x - 1.0) < 0.25:
        return _lgamma1p(x - 1.0)
    if abs(x - 2.0) < 0.25:
        return _lgamma1p(x - 2.0) + math.log1p(x - 2.0)
    return math.lgamma(x)


def _check_order_arg(nu, x):
    nu = float(nu)
    x = float(x)
    if not (math.isfinite(nu) and 0.0 <= nu <= NU_MAX):
        raise DomainError(f"order must lie in [0, {NU_MAX:g}], got {nu!r}")
    if not (math.isfinite(x) and 0.0 <= x <= X_MAX):
        raise DomainError(f"argument must lie in [0, {X_MAX:g}], got {x!r}")
    return nu, x


def log_tail_bound(nu: float, x: float) -> float:
    """ln of (x/2)^nu / Gamma(nu+1); -inf when the bound is exactly zero."""
    nu, x = _check_order_arg(nu, x)
    if x == 0.0:
        return 0.0 if nu == 0.0 else -math.inf
    return nu * (math.log(x) - _LN2) - math.lgamma(nu + 1.0)


def tail_bound(nu: float, x: float) -> float:
    """Upper bound (x/2)^nu / Gamma(nu+1) >= |J_nu(x)|, valid for nu >= 0."""
    return math.exp(log_tail_bound(nu, x))


def phase_minus_i_pow(nu: float) -> complex:
    """(-i)**nu on the principal branch, i.e. exp(-i pi nu / 2)."""
    nu = float(nu)
    if not math.isfinite(nu):
        raise DomainError(f"phase needs a finite order, got {nu!r}")
    # reduce nu mod 4 first so that large orders keep full phase accuracy
    return cmath.exp(-0.5j * math.pi * math.fmod(nu, 4.0))


def phase_minus_i_pow_many(nu: np.ndarray) -> np.ndarray:
    return np.exp(-0.5j * np.pi * np.fmod(np.asarray(nu, dtype=float), 4.0))


# ---------------------------------------------------------------------------
# regimes; each takes an order array and a scalar argument x > 0 and returns
# (values, absolute error estimates)


def _series(nu, x):
    q = 0.25 * x * x
    log_pref = nu * (math.log(x) - _LN2) - _lgamma(nu + 1.0)
    s = np.ones_like(nu)
    abs_s = np.ones_like(nu)
    t = np.ones_like(nu)
    remainder = np.zeros_like(nu)
    active = np.ones(nu.shape, dtype=bool)
    j = 0
    while active.any():
        j += 1
        t = np.where(active, -t * q / (j * (nu + j)), 0.0)
        s += t
        abs_s += np.abs(t)
        # terms decrease monotonically once j (nu + j) > q; alternating tail
        done = active & (j * (nu + j) > q) & (np.abs(t) <= 0.5 * EPS * np.abs(s))
        remainder = np.where(done, np.abs(t), remainder)
        active &= ~done
        if j > 10_000:
            raise AccuracyError("power series failed to converge")
    pref = np.exp(log_pref)
    value = pref * s
    # exp() of a large log prefactor inherits its absolute rounding error
    err = pref * (remainder + 4.0 * EPS * abs_s) + 2.0 * EPS * np.abs(log_pref) * np.abs(value)
    return value, err


def _hankel(nu, x):
    mu = 4.0 * nu * nu
    p = np.ones_like(nu)
    q = np.zeros_like(nu)
    term = np.ones_like(nu)
    biggest = np.ones_like(nu)
    last = np.full_like(nu, np.inf)
    active = np.ones(nu.shape, dtype=bool)
    k = 0
    while active.any() and k < 200:
        k += 1
        new = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        grew = np.abs(new) > np.abs(term)
        # asymptotic series: stop at the smallest term once terms start to grow
        stop = active & grew & (k > 1 + nu)
        active &= ~stop
        term = np.where(active, new, term)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q += np.where(active, sign * term, 0.0)
        else:
            p += np.where(active, sign * term, 0.0)
        biggest = np.maximum(biggest, np.abs(term))
        small = active & (np.abs(term) <= 0.25 * EPS)
        last = np.where(active, np.abs(term), last)
        active &= ~small
    phase = x - math.pi * np.fmod(0.5 * nu + 0.25, 2.0)
    env = math.sqrt(2.0 / (math.pi * x))
    value = env * (p * np.cos(phase) - q * np.sin(phase))
    err = env * (last + 4.0 * EPS * (biggest + x))
    return value, err


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_MAX_PANELS = 1 << 12


def _refine(fun, a, b, panels, scale, tol):
    """Composite Gauss-Legendre, doubling the panel count until two
    successive rules agree.

    ``fun(points, rows)`` evaluates the integrand for the listed rows and
    ``scale(values, rows)`` gives the magnitude the relative tolerance is
    measured against.  Returns (integral, abs error estimate, converged).
    """
    m = a.size
    result = np.zeros(m)
    error = np.full(m, np.inf)
    converged = np.zeros(m, dtype=bool)
    rows = np.arange(m)
    prev, _ = _composite(fun, a, b, panels, rows)
    while rows.size and panels < _MAX_PANELS:
        panels *= 2
        cur, absint = _composite(fun, a, b, panels, rows)
        diff = np.abs(cur - prev)
        rounding = 8.0 * EPS * absint * math.sqrt(panels * _GL_NODES.size)
        ok = diff <= np.maximum(tol * np.abs(scale(cur, rows)), rounding)
        result[rows] = cur
        error[rows] = diff + rounding
        converged[rows[ok]] = True
        rows = rows[~ok]
        prev = cur[~ok]
    return result, error, converged


def _composite(fun, a, b, panels, rows):
    edges = np.linspace(0.0, 1.0, panels + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    t = (mids[:, None] + (0.5 / panels) * _GL_NODES[None, :]).ravel()
    w = np.tile(_GL_WEIGHTS * (0.5 / panels), panels)
    width = (b[rows] - a[rows])[:, None]
    pts = a[rows][:, None] + width * t[None, :]
    vals = fun(pts, rows)
    weighted = w[None, :] * width
    return np.sum(vals * weighted, axis=1), np.sum(np.abs(vals) * weighted, axis=1)


def _theta_minus_sin(theta):
    small = np.abs(theta) < 0.25
    t2 = theta * theta
    series = theta * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0 * (1.0 - t2 / 110.0))))
    return np.where(small, series, theta - np.sin(np.where(small, 1.0, theta)))


def _steepest_descent(nu, x, tol):
    """J_nu(x) for nu >= x > 0 along the steepest-descent contour.

    On w = u(theta) + i theta with x cosh(u) sin(theta) = nu theta the
    integrand of the Sommerfeld integral is real and positive, giving
    J = (1/pi) int_0^pi exp(x sinh(u) cos(theta) - nu u) dtheta.
    """
    root = np.sqrt((nu - x) * (nu + x))
    u0 = np.log((nu + root) / x)
    f0 = root - nu * u0

    def g(theta, rows):
        n_ = nu[rows][:, None]
        s = np.sin(theta)
        with np.errstate(over="ignore", invalid="ignore"):
            delta = ((n_ - x) * theta + x * _theta_minus_sin(theta)) / (x * s)
            sh = np.sqrt(delta * (delta + 2.0))
            u = np.log1p(delta + sh)
            val = x * sh * np.cos(theta) - n_ * u - f0[rows][:, None]
        return np.where(np.isfinite(val), val, -np.inf)

    # integrand drops below exp(-46) of its peak beyond theta_max
    rows = np.arange(nu.size)
    lo = np.zeros(nu.size)
    hi = np.full(nu.size, math.pi * (1.0 - 1e-12))
    above = g(hi[:, None], rows)[:, 0] > -46.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = g(mid[:, None], rows)[:, 0] > -46.0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    top = np.where(above, math.pi, hi)

    def integrand(theta, rows):
        return np.exp(g(theta, rows))

    integral, err, ok = _refine(integrand, np.zeros(nu.size), top, 1, lambda c, r: c, 0.25 * tol)
    scale = np.exp(f0) / math.pi
    value = scale * integral
    return value, scale * err + 4.0 * EPS * (np.abs(f0) + 1.0) * value, ok


def _schlaefli(nu, x, tol):
    """J_nu(x) = (1/pi) int_0^pi cos(nu t - x sin t) dt
                 - (sin(nu pi)/pi) int_0^inf exp(-nu t - x sinh t) dt."""

    def osc(theta, rows):
        return np.cos(nu[rows][:, None] * theta - x * np.sin(theta))

    # about 20 radians of phase per 24-point panel
    panels = max(1, int(math.ceil(math.pi * (float(nu.max()) + x) / 40.0)))
    envelope = math.pi * math.sqrt(2.0 / (math.pi * x))
    first, err1, ok1 = _refine(osc, np.zeros(nu.size), np.full(nu.size, math.pi), panels,
                               lambda c, r: np.full(c.shape, envelope), tol)

    sin_nu_pi = np.sin(math.pi * np.fmod(nu, 2.0))
    need = np.abs(sin_nu_pi) > 0.0
    second = np.zeros(nu.size)
    err2 = np.zeros(nu.size)
    ok2 = np.ones(nu.size, dtype=bool)
    if need.any():
        nn = nu[need]

        def decay(t, rows):
            return np.exp(-nn[rows][:, None] * t - x * np.sinh(t))

        # a subnormal order overflows 46 / nu to inf, which the minimum discards
        with np.errstate(divide="ignore", over="ignore"):
            top = np.minimum(np.where(nn > 0, 46.0 / nn, np.inf), math.asinh(46.0 / x))
        val, e, ok = _refine(decay, np.zeros(nn.size), top, 1, lambda c, r: c, tol)
        second[need], err2[need], ok2[need] = val, e, ok

    value = (first - sin_nu_pi * second) / math.pi
    err = (err1 + np.abs(sin_nu_pi) * err2) / math.pi
    return value, err, ok1 & ok2


def bessel_j_many(nu, x: float, tol: float = DEFAULT_TOL):
    """Evaluate J_nu(x) for an array of orders at one argument.

    Returns ``(values, abs_error_estimates, methods)``; ``methods`` holds
    integer codes indexing :data:`METHOD_NAMES`.  Orders whose tail bound
    is below :data:`UNDERFLOW_FLOOR` come back as exact zeros.
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    x = float(x)
    tol = float(tol)
    if not (math.isfinite(tol) and tol > 0.0):
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if nu.size and not (np.all(np.isfinite(nu)) and nu.min() >= 0.0 and nu.max() <= NU_MAX):
        raise DomainError(f"orders must lie in [0, {NU_MAX:g}]")
    if not (math.isfinite(x) and 0.0 <= x <= X_MAX):
        raise DomainError(f"argument must lie in [0, {X_MAX:g}], got {x!r}")

    values = np.zeros(nu.shape)
    errors = np.zeros(nu.shape)
    methods = np.full(nu.shape, SERIES, dtype=np.int8)
    if x == 0.0:
        values[nu == 0.0] = 1.0
        return values, errors, methods

    log_bound = nu * (math.log(x) - _LN2) - _lgamma(nu + 1.0)
    under = log_bound < LOG_UNDERFLOW_FLOOR
    errors[under] = np.exp(log_bound[under])

    use_series = ~under & ((x <= _SERIES_ALWAYS_X) | (x * x <= _SERIES_CANCEL * (nu + 1.0)))
    if use_series.any():
        values[use_series], errors[use_series] = _series(nu[use_series], x)

    rest = ~under & ~use_series
    if x >= _HANKEL_MIN_X:
        try_hankel = rest & (x >= 2.0 * nu)
        if try_hankel.any():
            idx = np.flatnonzero(try_hankel)
            v, e = _hankel(nu[idx], x)
            good = e <= 0.5 * tol * math.sqrt(2.0 / (math.pi * x))
            values[idx[good]] = v[good]
            errors[idx[good]] = e[good]
            methods[idx[good]] = ASYMPTOTIC
            rest[idx[good]] = False

    failed = []
    for mask, fn in ((rest & (nu >= x), _steepest_descent), (rest & (nu < x), _schlaefli)):
        if mask.any():
            idx = np.flatnonzero(mask)
            v, e, ok = fn(nu[idx], x, tol)
            values[idx], errors[idx] = v, e
            methods[idx] = QUADRATURE
            failed.extend(idx[~ok].tolist())
    if failed:
        i = failed[0]
        raise AccuracyError(
            f"quadrature for J_{nu[i]:g}({x:g}) did not converge", float(values[i]), float(errors[i])
        )
    return values, errors, methods


def bessel_j(nu: float, x: float, tol: float = DEFAULT_TOL) -> BesselEval:
    """J_nu(x) with the method used and an absolute error estimate."""
    nu, x = _check_order_arg(nu, x)
    v, e, m = bessel_j_many(np.array([nu]), x, tol)
    return BesselEval(float(v[0]), METHOD_NAMES[int(m[0])], float(e[0]))


# ---------------------------------------------------------------------------
# independent oracle: adaptive QUADPACK quadrature, nothing shared with the above


def bessel_j_oracle(nu: float, x: float) -> float:
    """J_nu(x) from adaptive quadrature of Schlaefli's integral only.

    Slow but independent of the series, asymptotic and Gauss-Legendre
    code paths.  Domain: 0 <= nu <= 2000, 0 <= x <= 1000.
    """
    nu = float(nu)
    x = float(x)
    if not (math.isfinite(nu) and 0.0 <= nu <= 2000.0):
        raise DomainError(f"oracle order must lie in [0, 2000], got {nu!r}")
    if not (math.isfinite(x) and 0.0 <= x <= 1000.0):
        raise DomainError(f"oracle argument must lie in [0, 1000], got {x!r}")

    # one panel per half oscillation of the integrand keeps QUADPACK happy
    panels = int(math.ceil((nu + x) / 2.0)) + 1
    edges = np.linspace(0.0, math.pi, panels + 1)
    parts = []
    err = 0.0
    with warnings.catch_warnings():
        # the targets below are deliberately at rounding level; the summed
        # error estimate is checked against the contract at the end
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(lambda t: math.cos(nu * t - x * math.sin(t)), a, b,
                                    epsabs=1e-15, epsrel=1e-13, limit=200)
            parts.append(val)
            err += e
    first = math.fsum(parts) / math.pi
    err /= math.pi

    second = 0.0
    s = math.sin(math.pi * math.fmod(nu, 2.0))
    if s != 0.0:
        # beyond this point the integrand is below exp(-750)
        top = min(750.0 / nu if nu > 0.0 else math.inf, math.asinh(750.0 / x) if x > 0.0 else math.inf)
        def decay(t):
            return math.exp(-nu * t - (x * math.sinh(t) if x > 0.0 else 0.0))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, e = integrate.quad(decay, 0.0, top, epsabs=1e-15, epsrel=1e-13, limit=200)
        second = s * val / math.pi
        err += abs(s) * e / math.pi
    value = first - second
    if err > 1e-12 and err > 1e-10 * abs(value):
        raise AccuracyError(f"oracle quadrature for J_{nu:g}({x:g}) did not converge", value, err)
    return value
