"""Adaptive explicit Runge-Kutta integration for complex linear systems.

A plain Dormand-Prince 5(4) pair with a PI step controller.  The caller
supplies ``max_step_fn(t)`` so that the step never exceeds a fixed
fraction of the shortest local oscillation period of the system matrix;
the embedded error estimate then only has to handle accuracy, not
aliasing.  State vectors are complex ndarrays.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])
_ERR = _B5 - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_ORDER = 5.0


def integrate_adaptive(rhs, t0: float, y0: np.ndarray, t_end: float, *,
                       rtol: float = 1e-10, atol: float = 1e-12,
                       max_step_fn=None, checkpoints=(), breaks=(),
                       max_steps: int = 20_000_000):
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t_end``.

    Steps are clipped so the trajectory lands exactly on each requested
    checkpoint; ``breaks`` are additional forced landing points (used for
    curves whose derivative is only piecewise smooth) that are not
    recorded.  Returns ``(y_end, [(t_c, y_c), ...])``.
    """
    t = float(t0)
    y = np.array(y0, dtype=complex)
    record_set = {float(c) for c in checkpoints if t0 < c <= t_end}
    marks = sorted(record_set | {float(b) for b in breaks if t0 < b <= t_end})
    recorded = []

    def cap(tt):
        lim = t_end - tt
        if max_step_fn is not None:
            lim = min(lim, float(max_step_fn(tt)))
        return lim

    h = min(cap(t), 1e-2 * max(1.0, abs(t)))
    k = [None] * 7
    k[0] = rhs(t, y)
    next_mark = marks.pop(0) if marks else None
    steps = 0
    while t < t_end:
        if steps > max_steps:
            raise NumericError("integrator exceeded the step budget")
        h = min(h, cap(t))
        if next_mark is not None and t + h >= next_mark:
            h = next_mark - t
        if h <= 1e-14 * max(1.0, abs(t)):
            raise NumericError("step underflow: oscillation too fast for this range")

        for i in range(1, 7):
            incr = sum(_A[i][j] * k[j] for j in range(i))
            k[i] = rhs(t + _C[i] * h, y + h * incr)
        y5 = y + h * sum(_B5[j] * k[j] for j in range(7) if _B5[j] != 0.0)
        err_vec = h * sum(_ERR[j] * k[j] for j in range(7) if _ERR[j] != 0.0)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))

        if err <= 1.0:
            t = t + h
            y = y5
            k[0] = k[6]  # FSAL
            steps += 1
            if next_mark is not None and abs(t - next_mark) <= 1e-12 * max(1.0, abs(t)):
                if next_mark in record_set:
                    recorded.append((next_mark, y.copy()))
                next_mark = marks.pop(0) if marks else None
        factor = _SAFETY * (1.0 / err) ** (1.0 / _ORDER) if err > 0 else _MAX_FACTOR
        h = h * min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
    return y, recorded
