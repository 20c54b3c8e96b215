"""Chamber asymptotics of the kernel via its first-order linear system.

For a fixed regular ``y`` the normalized field

    F_g(x, y) = sqrt(w(x) w(y)) e^{-i<x, g y>} E(i x, g y)

satisfies ``F' = A(t) F`` along chamber curves, where row ``g`` of ``A``
couples only to the reflected indices ``sigma_alpha g`` with oscillatory
``O(1/t)`` coefficients.  Because the entrywise antiderivative of ``A``
has a closed form in terms of the integral sine and cosine, the classical
integrability criterion applies and ``F`` converges to a constant vector
``v``.  This module integrates the system with oscillation-locked steps,
verifies the two integrability conditions with explicit envelopes, and
extracts ``v`` with a first-order resolvent acceleration plus the
closed-form resonant second-order correction, which upgrades the raw
``O(1/T)`` convergence to roughly ``O(1/T^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .curves import Ray, certify_admissible, solve_norm_time
from .errors import AdmissibilityError, ConditionError, NumericError
from .groups import (ReflectionGroup, RootSystem, chamber_test, gamma_index,
                     mehta_constant, unit_weight)
from .odesolve import integrate_adaptive
from .polyops import kernel_series
from .specfun import si_ci

#: largest allowed step, as a fraction of the shortest oscillation period
_OSC_FRACTION = 0.125

#: series seed is placed where |kappa(t0)| * |y| equals this
_SEED_CAP = 8.0


@dataclass
class PhaseData:
    """Precomputed pairings shared by every evaluation for fixed (group, y)."""

    roots: np.ndarray      # (R, N)
    kvals: np.ndarray      # (R,)
    perm: np.ndarray       # (R, |G|) index of sigma_r g
    ay: np.ndarray         # (R, |G|) pairings <alpha_r, g y>
    y: np.ndarray

    @property
    def order(self) -> int:
        return self.ay.shape[1]


def phase_data(group: ReflectionGroup, rs: RootSystem, y) -> PhaseData:
    y = np.asarray(y, dtype=float)
    gy = group.elements @ y                    # (|G|, N)
    ay = rs.positive_roots @ gy.T              # (R, |G|)
    if np.any(np.abs(ay) < 1e-14):
        raise ConditionError("y is not regular: some <alpha, g y> vanishes")
    return PhaseData(rs.positive_roots, rs.root_multiplicities,
                     group.reflection_perm, ay, y)


def field_F(rs: RootSystem, group: ReflectionGroup, x, y,
            tol: float = 1e-12, max_degree: int = 48) -> np.ndarray:
    """The field vector ``(F_g)_g`` by direct series evaluation.

    The amplitude uses the unit-normal weight, under which the rank-one
    components converge to the classical Kummer limit constants.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    amp = math.sqrt(unit_weight(rs, x) * unit_weight(rs, y))
    gy = group.elements @ y
    out = np.empty(group.order, dtype=complex)
    for i in range(group.order):
        e_val = kernel_series(rs, 1j * x, gy[i], tol, max_degree)
        out[i] = amp * np.exp(-1j * float(x @ gy[i])) * e_val
    return out


def _check_on_curve(pd: PhaseData, curve, t: float):
    kap = curve.kappa(t)
    kapp = curve.kappa_prime(t)
    akap = pd.roots @ kap
    if np.any(akap <= 0):
        raise AdmissibilityError(f"curve point at t = {t} lies on or behind a wall")
    return akap, pd.roots @ kapp


def matrix_A(curve, group: ReflectionGroup, rs: RootSystem, y, t: float) -> np.ndarray:
    """The system matrix at parameter ``t`` (dense |G| x |G|)."""
    pd = phase_data(group, rs, y)
    return _matrix_A_from(pd, curve, t)


def _matrix_A_from(pd: PhaseData, curve, t: float) -> np.ndarray:
    akap, akapp = _check_on_curve(pd, curve, t)
    n = pd.order
    out = np.zeros((n, n), dtype=complex)
    coef = pd.kvals * (akapp / akap)
    for r in range(len(pd.kvals)):
        vals = coef[r] * np.exp(-1j * akap[r] * pd.ay[r])
        out[np.arange(n), pd.perm[r]] += vals
    return out


def matrix_A_tilde(curve, group: ReflectionGroup, rs: RootSystem, y, t: float) -> np.ndarray:
    """Closed-form tail integral ``int_t^inf A(s) ds``.

    Entrywise ``i sign(<a, g y>) si(phi) - Ci(phi)`` at the endpoint phase
    ``phi = <a, kappa(t)> |<a, g y>|``; only the endpoint enters, so the
    formula holds on any admissible curve.
    """
    pd = phase_data(group, rs, y)
    return _matrix_A_tilde_from(pd, curve, t)


def _matrix_A_tilde_from(pd: PhaseData, curve, t: float) -> np.ndarray:
    akap, _ = _check_on_curve(pd, curve, t)
    n = pd.order
    out = np.zeros((n, n), dtype=complex)
    for r in range(len(pd.kvals)):
        k = pd.kvals[r]
        if k == 0:
            continue
        for g in range(n):
            phi = akap[r] * abs(pd.ay[r, g])
            si, ci = si_ci(phi)
            out[g, pd.perm[r, g]] += k * (1j * math.copysign(1.0, pd.ay[r, g]) * si - ci)
    return out


def _resonant_correction(pd: PhaseData, curve, t: float) -> np.ndarray:
    """Closed-form non-oscillatory part of ``int_t^inf A(s) Atilde(s) ds``.

    The product of an entry of ``A`` with the reflected entry of the tail
    integral carries opposite phases, so its leading ``1/phi^2`` part does
    not oscillate; integrating ``<a,k'>/<a,k>^2`` exactly gives a diagonal
    correction ``i sum_a k(a)^2 / (<a, kappa(t)> <a, g y>)``.  All other
    products keep oscillating and integrate to higher order.
    """
    akap, _ = _check_on_curve(pd, curve, t)
    n = pd.order
    diag = np.zeros(n, dtype=complex)
    for r in range(len(pd.kvals)):
        diag += 1j * pd.kvals[r] ** 2 / (akap[r] * pd.ay[r])
    return np.diag(diag)


def _max_step_fn(pd: PhaseData, curve):
    def fn(t):
        kapp = curve.kappa_prime(t)
        omega = np.max(np.abs((pd.roots @ kapp)[:, None] * pd.ay))
        if omega <= 0:
            return math.inf
        return _OSC_FRACTION * 2 * math.pi / omega
    return fn


def _make_rhs(pd: PhaseData, curve):
    roots = pd.roots
    kvals = pd.kvals
    perm = pd.perm
    ay = pd.ay

    def rhs(t, F):
        kap = curve.kappa(t)
        kapp = curve.kappa_prime(t)
        akap = roots @ kap
        coef = kvals * ((roots @ kapp) / akap)
        phases = np.exp(-1j * akap[:, None] * ay)
        return np.sum(coef[:, None] * phases * F[perm], axis=0)

    return rhs


def integrate_F(curve, group: ReflectionGroup, rs: RootSystem, y,
                t0: float, T: float, tol: float = 1e-10) -> np.ndarray:
    """Propagate the field from the series seed at ``kappa(t0)`` to ``T``."""
    F, _ = _integrate_with_trace(phase_data(group, rs, y), curve, rs, group,
                                 t0, T, tol, ())
    return F


def _integrate_with_trace(pd: PhaseData, curve, rs, group, t0, T, tol, checkpoints):
    F0 = field_F(rs, group, curve.kappa(t0), pd.y)
    rhs = _make_rhs(pd, curve)
    breaks = curve.breakpoints() if hasattr(curve, "breakpoints") else ()
    return integrate_adaptive(rhs, t0, F0, T, rtol=tol, atol=tol,
                              max_step_fn=_max_step_fn(pd, curve),
                              checkpoints=checkpoints, breaks=breaks)


@dataclass
class WintnerReport:
    """Certificates for the two integrability conditions."""

    cond1_ok: bool
    atilde_norms: list           # [(t, inf-norm of the closed-form tail)]
    cond2_integral: float        # quadrature of the envelope on [t0, T]
    cond2_tail: float            # closed-form envelope bound beyond T
    delta_certificate: float
    t0: float
    T: float

    @property
    def cond2_ok(self) -> bool:
        return math.isfinite(self.cond2_integral) and math.isfinite(self.cond2_tail)

    def to_json_dict(self) -> dict:
        return {
            "cond1_ok": self.cond1_ok,
            "atilde_norms": [[t, v] for t, v in self.atilde_norms],
            "cond2_integral": self.cond2_integral,
            "cond2_tail": self.cond2_tail,
            "delta_certificate": self.delta_certificate,
            "t0": self.t0,
            "T": self.T,
        }


def _envelope(pd: PhaseData, curve, delta: float):
    """Smooth pointwise upper bound for ``||A(t) Atilde(t)||_inf``.

    The cone estimate ``<b, kappa> >= (delta / sqrt 2) <a, kappa>`` turns
    the entrywise ``4 k / phi`` tail bound into a multiple of
    ``<a, kappa'> / <a, kappa>^2``, whose integral has the closed form
    ``1 / <a, kappa(T)>`` on any admissible curve; ``env`` is that bound
    pointwise and ``tail_bound`` its exact integral beyond ``T``.
    """
    lead = 4.0 * math.sqrt(2.0) / delta * float(
        np.max(np.sum(pd.kvals[:, None] / np.abs(pd.ay), axis=0)))

    def env(t):
        akap, akapp = _check_on_curve(pd, curve, t)
        return lead * float(np.sum(pd.kvals * akapp / akap ** 2))

    def tail_bound(T):
        akap_T, _ = _check_on_curve(pd, curve, T)
        return lead * float(np.sum(pd.kvals / akap_T))

    return env, tail_bound


def wintner_check(curve, group: ReflectionGroup, rs: RootSystem, y,
                  t0: float, T: float | None = None) -> WintnerReport:
    """Verify both integrability conditions along the curve.

    Condition (1) holds by construction (the tail integral exists in
    closed form); its decay is reported at geometric sample times.
    Condition (2) is certified by numerically integrating the smooth
    envelope of ``||A Atilde||`` and bounding the remainder with the
    chamber-cone estimate, which decays like the reciprocal of the root
    pairings at the cutoff.
    """
    if T is None:
        T = max(100.0 * t0, 1000.0)
    pd = phase_data(group, rs, y)
    delta = certify_admissible(curve, rs, t0, T)
    sample_ts = list(np.geomspace(t0, T, 5))
    norms = []
    for t in sample_ts:
        a_tilde = _matrix_A_tilde_from(pd, curve, float(t))
        norms.append((float(t), float(np.max(np.sum(np.abs(a_tilde), axis=1)))))
    cond1_ok = all(math.isfinite(v) for _, v in norms) and norms[-1][1] <= norms[0][1] + 1e-12

    if float(np.sum(pd.kvals)) == 0.0:
        return WintnerReport(True, norms, 0.0, 0.0, delta, t0, float(T))

    env, tail_bound = _envelope(pd, curve, delta)
    breaks = curve.breakpoints() if hasattr(curve, "breakpoints") else ()
    pts = [b for b in breaks if t0 < b < T] or None
    val, err = integrate.quad(env, t0, T, limit=400, epsabs=1e-12, epsrel=1e-9,
                              points=pts)
    if not math.isfinite(val):
        raise ConditionError("envelope quadrature diverged")
    return WintnerReport(cond1_ok, norms, float(val), float(tail_bound(T)),
                         delta, t0, float(T))


@dataclass
class ExtractOptions:
    T: float = 1e4
    tol: float = 1e-10
    seed_tol: float = 1e-12
    n_checkpoints: int = 4
    second_order: bool = True


@dataclass
class AsymptoticsReport:
    """Extracted limit vector with its convergence diagnostics."""

    v: np.ndarray
    raw_final: np.ndarray
    checkpoints: list            # [(t, raw F, accelerated estimate)]
    wintner: WintnerReport
    acceleration_delta: float
    t0: float
    final_t: float
    curve_descriptor: dict
    y: np.ndarray
    group_descriptor: dict

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "group": self.group_descriptor,
            "y": [float(v) for v in self.y],
            "curve": self.curve_descriptor,
            "t0": self.t0,
            "T": self.final_t,
            "v": [[float(z.real), float(z.imag)] for z in self.v],
            "raw_final": [[float(z.real), float(z.imag)] for z in self.raw_final],
            "wintner": self.wintner.to_json_dict(),
            "acceleration_delta": self.acceleration_delta,
            "trace": [
                {"t": float(t),
                 "F": [[float(z.real), float(z.imag)] for z in raw],
                 "accelerated": [[float(z.real), float(z.imag)] for z in acc]}
                for t, raw, acc in self.checkpoints
            ],
        }


def _accelerate(pd: PhaseData, curve, t: float, F: np.ndarray,
                second_order: bool) -> np.ndarray:
    """Resolvent acceleration ``(I - Atilde + Q)^{-1} F(t)``.

    Follows from the fixed point ``x(inf) = x(t) + int_t^inf A x``: freezing
    ``x`` at its limit gives the first-order factor ``I - Atilde(t)``; one
    more substitution adds ``Q(t) = int_t^inf A Atilde``, kept here through
    its closed-form resonant part.
    """
    n = pd.order
    mat = np.eye(n, dtype=complex) - _matrix_A_tilde_from(pd, curve, t)
    if second_order:
        mat += _resonant_correction(pd, curve, t)
    try:
        return np.linalg.solve(mat, F)
    except np.linalg.LinAlgError as exc:
        raise NumericError("acceleration matrix is singular; increase T") from exc


def extract_v(curve, group: ReflectionGroup, rs: RootSystem, y,
              opts: ExtractOptions | None = None, **overrides) -> AsymptoticsReport:
    """Estimate the limit vector ``v`` along an admissible curve.

    The series seeds the system where ``|kappa| |y|`` reaches a fixed
    moderate size, the integrability certificate is established first,
    and the raw endpoint value is accelerated through the closed-form
    tail resolvent.
    """
    if opts is None:
        opts = ExtractOptions(**overrides)
    elif overrides:
        raise TypeError("pass either an options object or keyword overrides")
    y = np.asarray(y, dtype=float)
    if not chamber_test(rs, y):
        raise ConditionError("y must lie in the open chamber")
    pd = phase_data(group, rs, y)

    t0 = solve_norm_time(curve, _SEED_CAP / float(np.linalg.norm(y)))
    if t0 >= opts.T:
        raise ConditionError(f"T = {opts.T} is below the series seed time {t0:.3g}")
    wintner = wintner_check(curve, group, rs, y, t0, opts.T)

    n_cp = max(2, opts.n_checkpoints)
    cps = [opts.T * 0.5 ** (n_cp - 1 - i) for i in range(n_cp)]
    cps = [c for c in cps if c > t0 * 1.01]
    F_T, recorded = _integrate_with_trace(pd, curve, rs, group, t0, opts.T,
                                          opts.tol, cps)
    checkpoints = []
    for t, raw in recorded:
        acc = _accelerate(pd, curve, t, raw, opts.second_order)
        checkpoints.append((t, raw, acc))
    v = _accelerate(pd, curve, opts.T, F_T, opts.second_order)
    if not checkpoints or abs(checkpoints[-1][0] - opts.T) > 1e-9 * opts.T:
        checkpoints.append((opts.T, F_T, v))

    if np.max(np.abs(v)) < 1e-13:
        raise NumericError("extracted vector vanishes; inputs are inconsistent")

    from .groups import group_descriptor  # local import to avoid cycle noise
    return AsymptoticsReport(
        v=v,
        raw_final=F_T,
        checkpoints=checkpoints,
        wintner=wintner,
        acceleration_delta=float(np.max(np.abs(v - F_T))),
        t0=t0,
        final_t=opts.T,
        curve_descriptor=curve.descriptor() if hasattr(curve, "descriptor") else {},
        y=y,
        group_descriptor=group_descriptor(rs),
    )


def limit_constant_e(rs: RootSystem) -> complex:
    """Predicted identity component ``i^{-gamma} c_k / c_0`` of the limit.

    The Mehta-type ratio is taken in the same unit-normal weight
    normalization as the field itself, i.e. the plain quadrature constant
    is rescaled by ``2**(-gamma)``; the Gaussian baseline ``c_0`` is
    ``(2 pi)^{N/2}``.  In rank one this reduces, via the Legendre
    duplication formula, to ``Gamma(2k+1) / (2^k Gamma(k+1)) i^{-k}``.
    """
    gamma = gamma_index(rs)
    c_k = mehta_constant(rs) * 2.0 ** (-gamma)
    c_0 = (2.0 * math.pi) ** (rs.dim / 2.0)
    return complex(np.exp(-1j * math.pi * gamma / 2) * c_k / c_0)


@dataclass
class InvarianceReport:
    reports: list
    max_cross_discrepancy: float
    max_inverse_asymmetry: float

    def to_json_dict(self) -> dict:
        return {
            "max_cross_discrepancy": self.max_cross_discrepancy,
            "max_inverse_asymmetry": self.max_inverse_asymmetry,
            "runs": [r.to_json_dict() for r in self.reports],
        }


def invariance_suite(group: ReflectionGroup, rs: RootSystem, y_list, curve_list,
                     opts: ExtractOptions | None = None) -> InvarianceReport:
    """Cross-check the limit over several curves and parameters.

    The limit must not depend on the admissible curve or on ``y``, and the
    components at mutually inverse group elements must agree.
    """
    reports = []
    for y in y_list:
        for curve in curve_list:
            reports.append(extract_v(curve, group, rs, y, opts))
    vs = [r.v for r in reports]
    cross = 0.0
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            cross = max(cross, float(np.max(np.abs(vs[i] - vs[j]))))
    inv = 0.0
    for v in vs:
        inv = max(inv, float(np.max(np.abs(v - v[group.inverse_index]))))
    return InvarianceReport(reports, cross, inv)


def complex_ray_limit(group: ReflectionGroup, rs: RootSystem, x, y,
                      theta: float, T: float, tol: float = 1e-10) -> complex:
    """Limit estimate of ``z^gamma e^{-z<x,y>} E(z x, y)`` along ``z = s e^{i theta}``.

    For ``theta < pi/2`` the gauge ``U_g(z) = z^gamma e^{-z<x,y>} E(z x, g y)``
    turns the holomorphically continued system into one with non-negative
    damping ``e^{i theta} (<x,y> - <x,g y>)`` on the diagonal and smooth
    ``1/s`` couplings, which integrates stably to large ``|z|``; a
    quasi-steady tail correction removes the leading ``1/T`` error.  At
    ``theta = pi/2`` this is exactly the imaginary-axis field system, so
    that branch reuses the chamber-limit extraction.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (0.0 <= theta <= math.pi / 2 + 1e-12):
        raise ConditionError("theta must lie in [0, pi/2]")
    if not (chamber_test(rs, x) and chamber_test(rs, y)):
        raise ConditionError("x and y must lie in the open chamber")
    gamma = gamma_index(rs)

    if theta > math.pi / 2 - 1e-6:
        rep = extract_v(Ray(x / np.linalg.norm(x)), group, rs, y,
                        T=T * float(np.linalg.norm(x)), tol=tol)
        phase = np.exp(1j * math.pi * gamma / 2)
        return complex(phase * rep.v[0] / math.sqrt(unit_weight(rs, x) * unit_weight(rs, y)))

    pd = phase_data(group, rs, y)
    gy = group.elements @ y
    c = float(x @ y) - (gy @ x)               # (|G|,) damping rates, >= 0
    c[0] = 0.0
    if np.any(c < -1e-12):
        raise ConditionError("dominance failed: <x, g y> exceeds <x, y>")
    c = np.maximum(c, 0.0)
    rot = np.exp(1j * theta)
    kvals = pd.kvals
    perm = pd.perm

    def rhs(s, U):
        coup = np.zeros_like(U)
        for r in range(len(kvals)):
            coup += kvals[r] * U[perm[r]]
        return -rot * c * U + coup / s

    s0 = _SEED_CAP / float(np.linalg.norm(x) * np.linalg.norm(y))
    if s0 >= T:
        raise ConditionError("T is inside the series seed range")
    z0 = s0 * rot
    U0 = np.empty(group.order, dtype=complex)
    z0_pow = np.exp(gamma * np.log(z0))       # principal branch, Re z0 > 0
    for i in range(group.order):
        U0[i] = z0_pow * np.exp(-z0 * float(x @ y)) * kernel_series(
            rs, z0 * x, gy[i], tol=1e-13, max_degree=60)

    c_max = float(np.max(c)) if len(c) else 0.0
    h_cap = 1.5 / max(c_max, 1e-10)

    U_T, _ = integrate_adaptive(rhs, s0, U0, T, rtol=tol, atol=tol * 1e-2,
                                max_step_fn=lambda t: h_cap)
    # quasi-steady tail: U_e' = (1/s) sum_a k(a) U_{sigma_a} with
    # U_{sigma_a} ~ k(a) U_e / (e^{i theta} <a,x><a,y> s)
    ax = pd.roots @ x
    ayy = pd.roots @ y
    corr = np.sum(kvals ** 2 / (ax * ayy)) / (rot * T)
    return complex(U_T[0] * (1.0 + corr))


def bound_probe(group: ReflectionGroup, rs: RootSystem, y, delta: float,
                radius_grid, n_directions: int = 9, tol: float = 1e-10) -> float:
    """Empirical sup of ``w(x) |E(i x, g y)|^2`` over a cone grid.

    Small radii are evaluated by the series, larger ones by propagating
    the field along rays through the retained directions; the returned
    value estimates the cone bound constant for this ``y``.  Directions
    are drawn from a fixed master grid and filtered by the cone test, so
    grids for larger ``delta`` are nested inside those for smaller ones.
    """
    y = np.asarray(y, dtype=float)
    radius_grid = sorted(float(r) for r in radius_grid)
    if rs.dim == 1:
        master = [np.array([1.0])]
    elif rs.family == "I2":
        m = rs.family_param
        angles = (np.arange(1, 34) / 34.0) * (math.pi / m)
        master = [np.array([math.cos(a), math.sin(a)]) for a in angles]
    else:
        master = []
        base = np.eye(rs.dim)
        mix = np.linspace(0.15, 0.85, n_directions)
        for w1 in mix:
            d = w1 * np.ones(rs.dim) + (1 - w1) * base[0]
            master.append(d / np.linalg.norm(d))
    dirs = [d for d in master if chamber_test(rs, d, delta)]
    if not dirs:
        raise ConditionError(f"no directions satisfy the cone test at delta = {delta}")

    w_y = unit_weight(rs, y)
    seed_r = _SEED_CAP / float(np.linalg.norm(y))
    sup = 0.0
    pd = phase_data(group, rs, y)
    for d in dirs:
        small = [r for r in radius_grid if r <= seed_r]
        for r in small:
            F = field_F(rs, group, r * d, y)
            sup = max(sup, float(np.max(np.abs(F) ** 2)) / w_y)
        large = [r for r in radius_grid if r > seed_r]
        if large:
            ray = Ray(d)
            F_T, recorded = _integrate_with_trace(pd, ray, rs, group,
                                                  seed_r, large[-1], tol,
                                                  large[:-1])
            for _, F in recorded:
                sup = max(sup, float(np.max(np.abs(F) ** 2)) / w_y)
            sup = max(sup, float(np.max(np.abs(F_T) ** 2)) / w_y)
    return sup
