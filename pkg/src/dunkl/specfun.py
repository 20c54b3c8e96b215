"""Scalar special functions and the rank-one closed forms.

Everything here is deliberately independent of the polynomial and ODE
machinery so that it can serve as an exact oracle for them.  The sign
conventions of the integral sine and cosine follow the upper-tail form

    si(tau) = -int_tau^inf sin(u)/u du,   Ci(tau) = -int_tau^inf cos(u)/u du,

which is what the closed-form antiderivatives of the oscillatory system
matrix consume; note ``si = Si - pi/2`` relative to the more common
convention while ``Ci`` agrees with the classical cosine integral.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, NumericError, SeriesRegimeError

_EULER_GAMMA = 0.5772156649015328606

#: switch point between the power series and the auxiliary-function form
_SICI_SWITCH = 8.0

#: series regime bound for the normalized Bessel function
_BESSEL_REGIME = 50.0


def gamma_fn(x: float) -> float:
    """Gamma function on the positive axis.

    Backed by the C library implementation, which is well within the
    1e-13 relative accuracy needed on (0, 170).
    """
    if not (x > 0):
        raise ConfigError(f"gamma_fn requires a positive argument; got {x}")
    return math.gamma(x)


def bessel_j_norm(alpha: float, z: complex) -> complex:
    """Normalized spherical Bessel function via its power series.

    ``j_alpha(z) = Gamma(alpha+1) sum_n (-1)^n (z/2)^(2n) / (n! Gamma(n+alpha+1))``
    with ``j_alpha(0) = 1``.  Restricted to ``|z| <= 50`` where the series
    is numerically adequate.
    """
    if alpha <= -1:
        raise ConfigError(f"bessel_j_norm requires alpha > -1; got {alpha}")
    z = complex(z)
    if abs(z) > _BESSEL_REGIME:
        raise SeriesRegimeError(f"|z| = {abs(z):.3g} outside the series regime (<= 50)")
    w = -(z / 2.0) ** 2
    term = 1.0 + 0j
    total = term
    n = 0
    hump = abs(z) / 2.0 + 2.0
    while n < 500:
        n += 1
        term *= w / (n * (n + alpha))
        total += term
        if n > hump and abs(term) < 1e-17 * max(abs(total), 1e-300):
            return total
    raise SeriesRegimeError("bessel_j_norm series did not converge in 500 terms")


def kummer_1f1(a: float, b: float, z: complex) -> complex:
    """Confluent hypergeometric function ``1F1(a; b; z)``.

    Evaluated by its power series; for ``Re z < 0`` the reflection
    ``1F1(a,b,z) = e^z 1F1(b-a, b, -z)`` is applied first so the summed
    series has non-negative argument and no catastrophic cancellation on
    the negative real axis.  The reflected sum is accumulated with a
    floating rescale, so arguments far beyond the overflow threshold of
    ``exp`` (e.g. ``z = -2000``) still evaluate.
    """
    if float(b).is_integer() and b <= 0:
        raise ConfigError(f"1F1 parameter pole: b = {b}")
    z = complex(z)
    if z.real < 0:
        total, log_scale = _kummer_series_scaled(b - a, b, -z)
        return total * np.exp(z + log_scale)
    total, log_scale = _kummer_series_scaled(a, b, z)
    return total * np.exp(complex(log_scale))


def _kummer_series_scaled(a: float, b: float, z: complex):
    """Power series sum returned as ``(mantissa, log_scale)``."""
    term = 1.0 + 0j
    total = term
    log_scale = 0.0
    n = 0
    hump = abs(z) + 2.0
    cap = int(max(10000, 4 * abs(z)))
    while n < cap:
        term *= (a + n) * z / ((b + n) * (n + 1))
        total += term
        n += 1
        if abs(total) > 1e250:
            total *= 1e-250
            term *= 1e-250
            log_scale += 250.0 * math.log(10.0)
        if n > hump and abs(term) < 1e-17 * max(abs(total), 1e-300):
            return total, log_scale
    raise SeriesRegimeError(f"1F1 series did not converge in {cap} terms")


def rank1_kernel(k: float, z: complex, w: complex) -> complex:
    """The one-dimensional kernel in closed form, cross-validated.

    Both routes are evaluated:

    * Bessel form ``j_{k-1/2}(i z w) + (z w / (2k+1)) j_{k+1/2}(i z w)``
    * Kummer form ``e^{z w} 1F1(k, 2k+1, -2 z w)``

    and must agree to 1e-10 relative; the Bessel value is returned.  The
    agreement tolerance is widened by the alternating-series cancellation
    amplitude (roughly ``exp(2 |Im zw|) * eps``), which is what the 1F1
    route can actually deliver in double precision: the plain 1e-10
    relative check is in force for ``|Im zw|`` up to about 5 and relaxes
    gradually toward the edge of the ``|z w| <= 50`` regime, where the
    better-conditioned Bessel route is the one being returned anyway.
    """
    if k < 0:
        raise ConfigError(f"multiplicity must be >= 0; got {k}")
    s = complex(z) * complex(w)
    if abs(s) > _BESSEL_REGIME:
        raise SeriesRegimeError(f"|z w| = {abs(s):.3g} outside the closed-form regime")
    bess = bessel_j_norm(k - 0.5, 1j * s) + s / (2 * k + 1) * bessel_j_norm(k + 0.5, 1j * s)
    kumm = np.exp(s) * kummer_1f1(k, 2 * k + 1, -2 * s)
    # worst-case rounding amplitude of the two series (the 1F1 route sums
    # alternating terms as large as e^{2|Im s|} when s is far up the
    # imaginary axis, the Bessel route as large as e^{|Im s|})
    cancel_scale = math.exp(min(2.0 * abs(s.imag), 700.0)) * abs(np.exp(s))
    tol = 1e-10 * max(1.0, abs(bess)) + 64 * 2.2e-16 * cancel_scale
    if abs(bess - kumm) > tol:
        raise NumericError(
            f"rank-one closed forms disagree: {bess} vs {kumm} at k={k}, zw={s}"
        )
    return bess


# Gauss-Laguerre rule shared by the auxiliary integrals below.
_LAG_NODES, _LAG_WEIGHTS = np.polynomial.laguerre.laggauss(130)


def _sici_aux(tau: float):
    """Auxiliary functions ``f, g`` with ``si = -f cos - g sin`` and
    ``Ci = f sin - g cos``.

    They are the Laplace-type integrals
    ``f(tau) = int_0^inf e^{-tau t} / (1 + t^2) dt`` and
    ``g(tau) = int_0^inf t e^{-tau t} / (1 + t^2) dt``, evaluated by a
    fixed Gauss-Laguerre rule (integrand poles sit at distance ``tau``
    from the contour, so the rule converges fast for ``tau >= 8``).
    """
    u = _LAG_NODES / tau
    denom = 1.0 / (1.0 + u * u)
    f = float(np.sum(_LAG_WEIGHTS * denom)) / tau
    g = float(np.sum(_LAG_WEIGHTS * u * denom)) / tau
    return f, g


def si_ci(tau: float):
    """Integral sine and cosine as negative upper tails.

    Returns ``(si(tau), Ci(tau))`` with absolute error below 1e-10 on
    ``tau > 0``; both tend to 0 as ``tau -> inf`` and obey
    ``|si|, |Ci| <= 2/tau``.
    """
    tau = float(tau)
    if not tau > 0:
        raise ConfigError(f"si_ci requires tau > 0; got {tau}")
    if tau < _SICI_SWITCH:
        # power series: term holds (-1)^n tau^(2n+1) / (2n+1)! for Si,
        # and (-1)^n tau^(2n) / (2n)! for the regular part of Ci
        t2 = tau * tau
        si_sum = 0.0
        term = tau
        n = 0
        while True:
            si_sum += term / (2 * n + 1)
            n += 1
            term *= -t2 / ((2 * n) * (2 * n + 1))
            if abs(term) < 1e-18 * max(1.0, abs(si_sum)) or n > 200:
                break
        ci_sum = 0.0
        term = 1.0
        n = 0
        while True:
            n += 1
            term *= -t2 / ((2 * n - 1) * (2 * n))
            ci_sum += term / (2 * n)
            if abs(term) < 1e-18 or n > 200:
                break
        return si_sum - math.pi / 2, _EULER_GAMMA + math.log(tau) + ci_sum
    f, g = _sici_aux(tau)
    c, s = math.cos(tau), math.sin(tau)
    return -f * c - g * s, f * s - g * c


def rank1_density(k: float, x: float, u: float) -> float:
    """Density of the one-dimensional representing measure at ``u``.

    Supported on ``[-|x|, |x|]`` (returns 0 outside); requires ``k > 0``
    because the ``k = 0`` measure is the point mass at ``x``.
    """
    if not k > 0:
        raise ConfigError("rank1_density requires k > 0 (k = 0 is an atom)")
    if x == 0:
        raise ConfigError("rank1_density requires x != 0")
    ax = abs(x)
    if not (-ax < u < ax):
        return 0.0
    norm = gamma_fn(k + 0.5) / (gamma_fn(0.5) * gamma_fn(k))
    return norm / ax * (1 - u / x) ** (k - 1) * (1 + u / x) ** k


def rank1_v(k: float):
    """The limiting pair ``(v_e, v_sigma)`` in rank one.

    Modulus ``Gamma(2k+1) / (2^k Gamma(k+1))``, phases ``-+ k pi/2``.
    """
    if k < 0:
        raise ConfigError(f"multiplicity must be >= 0; got {k}")
    modulus = gamma_fn(2 * k + 1) / (2 ** k * gamma_fn(k + 1))
    phase = np.exp(-1j * math.pi * k / 2)
    return modulus * phase, modulus * np.conj(phase)
