"""Admissible chamber curves: rays, bent polylines, and complex rays.

A curve is admissible when it stays inside a fixed cone ``C_delta``, its
norm grows without bound, and its derivative points into the (open)
chamber.  Rays through a chamber point trivially qualify; bent curves are
piecewise-linear paths whose corners are rounded over a small parameter
window by quadratic blends, which keeps the derivative inside the chamber
because the chamber is convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, ConfigError
from .groups import RootSystem, chamber_test


@dataclass(frozen=True)
class Ray:
    """``kappa(t) = t x`` for a fixed chamber direction ``x``."""

    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))

    def kappa(self, t: float) -> np.ndarray:
        return t * self.direction

    def kappa_prime(self, t: float) -> np.ndarray:
        return self.direction

    def breakpoints(self):
        return ()

    def descriptor(self) -> dict:
        return {"kind": "ray", "direction": [float(v) for v in self.direction]}


@dataclass(frozen=True)
class BentCurve:
    """Polyline through chamber waypoints with smoothed corners.

    The curve starts on the ray from the origin through the first
    waypoint, follows the straight connections between successive
    waypoints, and continues outward along the last waypoint's ray.  The
    parameter is arc length.  Corners are replaced by quadratic blends
    over ``blend_frac`` of the shorter adjacent segment, so the
    derivative interpolates between the two segment directions and stays
    in the chamber by convexity; the waypoint differences must themselves
    lie in the chamber for the curve to be admissible.
    """

    waypoints: tuple
    blend_frac: float = 0.01

    def __post_init__(self):
        pts = tuple(np.asarray(p, dtype=float) for p in self.waypoints)
        if len(pts) < 1:
            raise ConfigError("BentCurve needs at least one waypoint")
        object.__setattr__(self, "waypoints", pts)
        # nodes: origin-ray start point, then the waypoints
        first = pts[0]
        nodes = [np.zeros_like(first)] + list(pts)
        segs = []
        t_acc = 0.0
        knots = [0.0]
        for a, b in zip(nodes[:-1], nodes[1:]):
            d = b - a
            length = float(np.linalg.norm(d))
            if length <= 0:
                raise ConfigError("repeated waypoints are not allowed")
            segs.append((a.copy(), d / length, length))
            t_acc += length
            knots.append(t_acc)
        tail_dir = pts[-1] / np.linalg.norm(pts[-1])
        object.__setattr__(self, "_segs", segs)
        object.__setattr__(self, "_knots", knots)
        object.__setattr__(self, "_tail_dir", tail_dir)

    def _blend_half_width(self, i: int) -> float:
        # half-width of the rounding window at interior knot i (between
        # segment i-1 and segment i, or the tail ray)
        left = self._segs[i - 1][2]
        right = self._segs[i][2] if i < len(self._segs) else left
        return self.blend_frac * min(left, right)

    def kappa(self, t: float) -> np.ndarray:
        return self._eval(t)[0]

    def kappa_prime(self, t: float) -> np.ndarray:
        return self._eval(t)[1]

    def _eval(self, t: float):
        knots = self._knots
        segs = self._segs
        n_seg = len(segs)

        # corner blends take precedence; windows never overlap because the
        # half-width is at most 1% of the shorter adjacent segment
        for knot_i in range(1, n_seg + 1):
            h = self._blend_half_width(knot_i)
            tk = knots[knot_i]
            if abs(t - tk) < h:
                d_in = segs[knot_i - 1][1]
                d_out = segs[knot_i][1] if knot_i < n_seg else self._tail_dir
                u = (t - (tk - h)) / (2 * h)
                corner = segs[knot_i - 1][0] + segs[knot_i - 1][1] * segs[knot_i - 1][2]
                p0 = corner - h * d_in
                # quadratic blend with control point at the corner
                pos = ((1 - u) ** 2) * p0 + 2 * u * (1 - u) * corner + \
                    (u ** 2) * (corner + h * d_out)
                vel = (1 - u) * d_in + u * d_out
                return pos, vel

        if t >= knots[-1]:
            base = segs[-1][0] + segs[-1][1] * segs[-1][2]
            return base + (t - knots[-1]) * self._tail_dir, self._tail_dir

        j = int(np.searchsorted(knots, t, side="right")) - 1
        j = max(0, min(j, n_seg - 1))
        a, d, length = segs[j]
        return a + (t - knots[j]) * d, d

    def breakpoints(self):
        """Edges of the corner-blend windows; the integrator must land on
        these because the derivative is only piecewise smooth."""
        out = []
        for i in range(1, len(self._segs) + 1):
            h = self._blend_half_width(i)
            tk = self._knots[i]
            out.extend((tk - h, tk, tk + h))
        return tuple(out)

    def descriptor(self) -> dict:
        return {"kind": "bent",
                "waypoints": [[float(v) for v in p] for p in self.waypoints],
                "blend_frac": self.blend_frac}


@dataclass(frozen=True)
class ComplexRay:
    """Descriptor for the half-plane rays ``z = t e^{i theta}`` used by the
    complex-argument limit; consumed by the asymptotics module."""

    direction: np.ndarray
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))
        if not (0.0 <= self.theta <= math.pi / 2 + 1e-12):
            raise ConfigError("theta must lie in [0, pi/2]")

    def descriptor(self) -> dict:
        return {"kind": "complex_ray",
                "direction": [float(v) for v in self.direction],
                "theta": float(self.theta)}


def certify_admissible(curve, rs: RootSystem, t_lo: float, t_hi: float,
                       samples: int = 400) -> float:
    """Sample-based admissibility certificate.

    Checks ``kappa(t) in C_delta`` (returning the certified ``delta``),
    ``kappa'(t) in C``, and growth of ``|kappa|`` over a dense log grid.
    Raises :class:`AdmissibilityError` on violation.
    """
    ts = np.geomspace(max(t_lo, 1e-6), t_hi, samples)
    delta = math.inf
    prev_norm = -math.inf
    grow_violations = 0
    for t in ts:
        x = curve.kappa(float(t))
        v = curve.kappa_prime(float(t))
        nx = float(np.linalg.norm(x))
        if nx <= 0:
            raise AdmissibilityError(f"curve reaches the origin at t = {t}")
        pair = rs.positive_roots @ x
        delta = min(delta, float(np.min(pair)) / nx)
        if np.any(pair <= 0):
            raise AdmissibilityError(f"curve leaves the chamber at t = {t}")
        if not chamber_test(rs, v):
            raise AdmissibilityError(f"curve derivative leaves the chamber at t = {t}")
        if nx < prev_norm - 1e-9 * max(1.0, prev_norm):
            grow_violations += 1
        prev_norm = max(prev_norm, nx)
    if grow_violations:
        raise AdmissibilityError("curve norm is not eventually increasing")
    if delta <= 0:
        raise AdmissibilityError("no positive cone certificate")
    return delta


def solve_norm_time(curve, target_norm: float, t_hi_guess: float = 1.0) -> float:
    """Smallest ``t`` (by bisection on a bracket) with ``|kappa(t)| = target``."""
    t_lo, t_hi = 1e-9, t_hi_guess
    while np.linalg.norm(curve.kappa(t_hi)) < target_norm:
        t_hi *= 2
        if t_hi > 1e12:
            raise AdmissibilityError("curve norm does not reach the requested size")
    for _ in range(200):
        mid = 0.5 * (t_lo + t_hi)
        if np.linalg.norm(curve.kappa(mid)) < target_norm:
            t_lo = mid
        else:
            t_hi = mid
        if t_hi - t_lo < 1e-12 * max(1.0, t_hi):
            break
    return 0.5 * (t_lo + t_hi)
