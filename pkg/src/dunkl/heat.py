"""Heat-kernel short-time behavior and continuity diagnostics of the
representing measures.

The heat kernel is evaluated through the reduced combination
``E(x/(2t), y)``; for small times the polynomial series is replaced by the
damped half-plane system at angle 0, and the normalized short-time ratio
against the free Gaussian is formed with all exponential factors cancelled
analytically, so no overflow occurs even at ``t = 1e-6``.

Continuity of the representing measure attached to a regular point ``x``
is probed through ball averages of ``|E(i x, .)|^2``: an atom keeps the
average bounded away from zero while a continuous measure drives it to
zero, and the log-log slope of the average against the ball radius is the
desk-scale certificate (in rank one the decay rate is ``-min(1, 2k)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .asymptotics import field_F, phase_data
from .curves import Ray
from .errors import ConfigError, ConditionError, NumericError
from .groups import (ReflectionGroup, RootSystem, chamber_representative,
                     chamber_test, gamma_index, is_regular, make_root_system,
                     mehta_constant, unit_weight, weight)
from .odesolve import integrate_adaptive
from .polyops import kernel_series
from .specfun import gamma_fn

#: series/ODE switch: the series is used while |x||y|/(2t) stays below this
_SERIES_CAP = 8.0


@dataclass(frozen=True)
class HeatQuery:
    t: float
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if not self.t > 0:
            raise ConfigError(f"time must be positive; got {self.t}")
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))


def _u_e_real_axis(rs: RootSystem, group: ReflectionGroup, x, y, s: float,
                   tol: float = 1e-11) -> float:
    """``s^gamma e^{-s<x,y>} E(s x, y)`` for chamber ``x, y`` and real ``s``.

    Series below the moderate-argument cap, damped half-plane system
    beyond it; the result is real and positive.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gamma = gamma_index(rs)
    s_norm = s * float(np.linalg.norm(x) * np.linalg.norm(y))
    if s_norm <= _SERIES_CAP:
        e_val = kernel_series(rs, s * x, y, tol=1e-14, max_degree=60)
        val = s ** gamma * math.exp(-s * float(x @ y)) * complex(e_val)
        return float(val.real)
    if not (chamber_test(rs, x) and chamber_test(rs, y)):
        raise ConditionError("the small-time evaluation path needs chamber arguments")

    gy = group.elements @ y
    c = float(x @ y) - (gy @ x)
    c[0] = 0.0
    c = np.maximum(c, 0.0)
    pd = phase_data(group, rs, y)
    kvals = pd.kvals
    perm = pd.perm

    def rhs(sv, U):
        coup = np.zeros_like(U)
        for r in range(len(kvals)):
            coup += kvals[r] * U[perm[r]]
        return -c * U + coup / sv

    s0 = _SERIES_CAP / float(np.linalg.norm(x) * np.linalg.norm(y))
    U0 = np.empty(group.order, dtype=complex)
    for i in range(group.order):
        U0[i] = s0 ** gamma * math.exp(-s0 * float(x @ y)) * kernel_series(
            rs, s0 * x, gy[i], tol=1e-13, max_degree=60)
    c_max = float(np.max(c)) if len(c) else 0.0
    U_T, _ = integrate_adaptive(rhs, s0, U0, s, rtol=tol, atol=tol * 1e-2,
                                max_step_fn=lambda t: 1.5 / max(c_max, 1e-10))
    val = U_T[0]
    if abs(val.imag) > 1e-6 * max(1.0, abs(val.real)):
        raise NumericError("real-axis evaluation developed an imaginary part")
    return float(val.real)


def log_heat_kernel(rs: RootSystem, group: ReflectionGroup, q: HeatQuery) -> float:
    """Natural log of the heat kernel, safe against under/overflow."""
    n = rs.dim
    gamma = gamma_index(rs)
    s = 1.0 / (2.0 * q.t)
    u_e = _u_e_real_axis(rs, group, q.x, q.y, s)
    if not u_e > 0:
        raise NumericError("kernel evaluation lost positivity")
    # log E(s x, y) = s <x,y> - gamma log s + log U_e(s)
    log_e = s * float(q.x @ q.y) - gamma * math.log(s) + math.log(u_e)
    return (-(gamma + n / 2.0) * math.log(2.0 * q.t)
            - math.log(mehta_constant(rs))
            - (float(q.x @ q.x) + float(q.y @ q.y)) / (4.0 * q.t)
            + log_e)


def heat_kernel(rs: RootSystem, group: ReflectionGroup, q: HeatQuery) -> float:
    """Heat kernel value ``(2t)^{-gamma-N/2} c_k^{-1} e^{-(|x|^2+|y|^2)/4t} E(x/(2t), y)``."""
    return math.exp(log_heat_kernel(rs, group, q))


def free_heat_kernel(n: int, t: float, x, y) -> float:
    """The Gaussian baseline ``(4 pi t)^{-N/2} e^{-|x-y|^2 / 4t}``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (4.0 * math.pi * t) ** (-n / 2.0) * math.exp(
        -float((x - y) @ (x - y)) / (4.0 * t))


def shorttime_ratio_detail(rs: RootSystem, group: ReflectionGroup, x, y, t_grid):
    """Normalized heat ratio per time, with the evaluation path used.

    ``sqrt(w(x) w(y)) Gamma_t / Gamma0_t`` collapses analytically to
    ``sqrt(w(x) w(y)) (2 pi)^{N/2} c_k^{-1} U_e(1/(2t))``, which tends to 1
    as ``t -> 0``; returns ``[(t, ratio, path), ...]``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    amp = math.sqrt(weight(rs, x) * weight(rs, y))
    pref = amp * (2.0 * math.pi) ** (rs.dim / 2.0) / mehta_constant(rs)
    xy_norm = float(np.linalg.norm(x) * np.linalg.norm(y))
    out = []
    for t in t_grid:
        t = float(t)
        if not t > 0:
            raise ConfigError("the time grid must be positive")
        s = 1.0 / (2.0 * t)
        path = "series" if s * xy_norm <= _SERIES_CAP else "ode"
        out.append((t, pref * _u_e_real_axis(rs, group, x, y, s), path))
    return out


def shorttime_ratio(rs: RootSystem, group: ReflectionGroup, x, y, t_grid):
    """Just the ratios from :func:`shorttime_ratio_detail`."""
    return [r for _, r, _ in shorttime_ratio_detail(rs, group, x, y, t_grid)]


@dataclass(frozen=True)
class WienerScan:
    """Ball averages of the squared transform over increasing radii."""

    x: np.ndarray
    n_grid: tuple
    averages: tuple

    def rows(self):
        return list(zip(self.n_grid, self.averages))


def _angular_rule(rs: RootSystem, n_max: float):
    """Direction nodes and weights on the unit sphere inside the closed
    chamber; the node count scales with the largest radius so the
    direction dependence of the integrand stays resolved."""
    if rs.dim == 1:
        return [np.array([1.0])], [1.0]
    m = rs.family_param
    sector = math.pi / m
    n_nodes = int(max(24, min(96, 8 + 1.6 * n_max * sector)))
    nodes, wts = roots_legendre(n_nodes)
    angles = 0.5 * sector * (nodes + 1.0)
    weights = 0.5 * sector * wts
    return [np.array([math.cos(a), math.sin(a)]) for a in angles], list(weights)


def _radial_profile(rs: RootSystem, group: ReflectionGroup, omega, xc,
                    r_values, tol: float = 1e-9):
    """``int_0^r  s^{N-1} sum_g |E(i s omega, g xc)|^2 ds`` for each ``r``.

    The inner core is integrated by Gauss-Legendre on direct series
    values; past the series cap the squared field is accumulated as an
    extra quadrature component of the oscillation-locked integration
    along the ray through ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    xc = np.asarray(xc, dtype=float)
    n = rs.dim
    gx = group.elements @ xc
    r_values = [float(r) for r in r_values]
    r_max = max(r_values)
    seed = _SERIES_CAP / float(np.linalg.norm(xc))

    def core_integrand(s):
        total = 0.0
        for i in range(group.order):
            total += abs(kernel_series(rs, 1j * s * omega, gx[i], tol=1e-12)) ** 2
        return s ** (n - 1) * total

    nodes, wts = roots_legendre(40)

    def core_integral(a, b):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return half * float(np.sum(wts * np.array(
            [core_integrand(mid + half * u) for u in nodes])))

    out = {}
    small = [r for r in r_values if r <= seed]
    acc = 0.0
    prev = 0.0
    for r in sorted(small):
        acc += core_integral(prev, r)
        out[r] = acc
        prev = r
    if r_max <= seed:
        return [out[r] for r in r_values]

    core_to_seed = acc + core_integral(prev, seed)
    pd = phase_data(group, rs, xc)
    ray = Ray(omega)
    w_dir = unit_weight(rs, omega)
    w_xc = unit_weight(rs, xc)
    gamma = gamma_index(rs)
    kvals = pd.kvals
    perm = pd.perm
    roots = pd.roots
    ay = pd.ay
    a_om = roots @ omega

    def rhs(s, state):
        F = state[:-1]
        akap = s * a_om
        coef = kvals * (a_om / akap)
        phases = np.exp(-1j * akap[:, None] * ay)
        dF = np.sum(coef[:, None] * phases * F[perm], axis=0)
        dens = float(np.sum(np.abs(F) ** 2)) / (s ** (2.0 * gamma) * w_dir * w_xc)
        return np.concatenate([dF, [s ** (n - 1) * dens]])

    F0 = field_F(rs, group, seed * omega, xc)
    state0 = np.concatenate([F0, [0.0]])
    omega_max = float(np.max(np.abs(a_om[:, None] * ay)))
    cap = 0.25 * math.pi / omega_max if omega_max > 0 else math.inf
    large = sorted(r for r in r_values if r > seed)
    end, recorded = integrate_adaptive(rhs, seed, state0, large[-1],
                                       rtol=tol, atol=tol,
                                       max_step_fn=lambda t: cap,
                                       checkpoints=large[:-1])
    for t_c, st in recorded:
        out[t_c] = core_to_seed + float(st[-1].real)
    out[large[-1]] = core_to_seed + float(end[-1].real)
    return [out[r] for r in r_values]


def wiener_scan(rs: RootSystem, group: ReflectionGroup, x, n_grid,
                tol: float = 1e-9) -> WienerScan:
    """Ball averages ``n^{-N} int_{|xi| <= n} |E(i x, xi)|^2 d xi``.

    The integrand is invariant when ``x`` moves along its orbit, so ``x``
    is reduced to the chamber and the sphere restricted to chamber
    directions, summing the squared field over the group instead; radial
    factors far from the origin ride along the ray integration.
    """
    x = np.asarray(x, dtype=float)
    if not is_regular(rs, x):
        raise ConfigError("x must be regular (off every reflecting hyperplane)")
    xc, _ = chamber_representative(rs, group, x)
    n_grid = tuple(float(v) for v in n_grid)
    if any(v <= 0 for v in n_grid):
        raise ConfigError("ball radii must be positive")
    dirs, wts = _angular_rule(rs, max(n_grid))
    totals = np.zeros(len(n_grid))
    for omega, wt in zip(dirs, wts):
        prof = _radial_profile(rs, group, omega, xc, n_grid, tol)
        totals += wt * np.array(prof)
    averages = tuple(float(tot / nv ** rs.dim) for tot, nv in zip(totals, n_grid))
    return WienerScan(x, n_grid, averages)


def wiener_average(rs: RootSystem, group: ReflectionGroup, x, n: float,
                   tol: float = 1e-9) -> float:
    """Single ball average at radius ``n``."""
    return wiener_scan(rs, group, x, [n], tol).averages[0]


def continuity_slope(scan: WienerScan) -> float:
    """Least-squares slope of ``log(average)`` against ``log(n)``.

    A clearly negative slope certifies decay of the averages, which is
    the continuity signature; an atom pins the slope near zero.
    """
    if len(scan.n_grid) < 4:
        raise ConfigError("need at least 4 radii for a slope")
    avgs = np.asarray(scan.averages)
    if np.any(avgs <= 0):
        raise ConfigError("averages must be positive to fit a log slope")
    return float(np.polyfit(np.log(scan.n_grid), np.log(avgs), 1)[0])


def product_decomposition_check(rs: RootSystem, x, y, tol: float = 1e-12) -> float:
    """Residual of the splitting across zero-multiplicity coordinates.

    For the sign-change family with some coordinates carrying zero
    multiplicity, the kernel factors into the sub-kernel on the active
    coordinates times the plain exponential on the rest; returns
    ``|E(x,y) - E'(x',y') e^{<x'',y''>}|``.
    """
    if rs.family != "Z2":
        raise ConfigError("the product decomposition applies to the Z2^N family")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    active = [i for i, k in enumerate(rs.multiplicities) if k > 0]
    inactive = [i for i in range(rs.dim) if i not in active]
    full = kernel_series(rs, x, y, tol)
    exp_part = np.exp(np.sum(x[inactive] * y[inactive])) if inactive else 1.0
    if active:
        sub_rs = make_root_system("Z2", len(active),
                                  [rs.multiplicities[i] for i in active])
        sub = kernel_series(sub_rs, x[active], y[active], tol)
    else:
        sub = 1.0
    return abs(full - sub * exp_part)


def rank1_measure_cdf(k: float, x: float, u: float) -> float:
    """Distribution function of the one-dimensional representing measure.

    Gauss-Jacobi rules absorb the endpoint powers ``(1 -+ u/x)^{k-1}, ^k``
    exactly, so the value is accurate to about 1e-12 for any ``u``.
    """
    if not k > 0:
        raise ConfigError("rank1_measure_cdf requires k > 0 (k = 0 is an atom)")
    if x == 0:
        raise ConfigError("rank1_measure_cdf requires x != 0")
    ax = abs(x)
    t0 = u / ax if x > 0 else -u / ax
    if t0 <= -1:
        return 0.0
    if t0 >= 1:
        return 1.0
    norm = gamma_fn(k + 0.5) / (gamma_fn(0.5) * gamma_fn(k))

    def lower_piece(b):
        # int_{-1}^{b} (1-t)^{k-1} (1+t)^k dt  with the (1+t)^k weight
        nodes, wts = roots_jacobi(48, 0.0, k)
        half = 0.5 * (b + 1.0)
        t = -1.0 + half * (nodes + 1.0)
        vals = (1.0 - t) ** (k - 1.0)
        return half ** (k + 1.0) * float(np.sum(wts * vals))

    def upper_piece(a):
        # int_{a}^{1} (1-t)^{k-1} (1+t)^k dt  with the (1-t)^{k-1} weight
        nodes, wts = roots_jacobi(48, k - 1.0, 0.0)
        half = 0.5 * (1.0 - a)
        t = a + half * (nodes + 1.0)
        vals = (1.0 + t) ** k
        return half ** k * float(np.sum(wts * vals))

    if t0 <= 0:
        return norm * lower_piece(t0)
    return 1.0 - norm * upper_piece(t0)
