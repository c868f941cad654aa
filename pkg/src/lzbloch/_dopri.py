"""Dormand-Prince 5(4) stepper with PI step-size control and dense output.

Only what :mod:`lzbloch.dynamics` needs: integrate ``y' = f(t, y)`` from ``t0``
to exactly ``t1`` and return the solution at requested output times. The
caller passes the step size in and gets the next proposal back, so a run that
is split into segments keeps its step-size history.
"""

import numpy as np

from .errors import StepSizeUnderflow

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th- and embedded 4th-order weights
E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# 4th-order continuous extension, y(t + s h) = y + h K^T P [s, s^2, s^3, s^4]
P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
# PI controller exponents (Gustafsson / Hairer-Wanner DOPRI5 defaults)
BETA = 0.04
ALPHA = 0.2 - 0.75 * BETA


class StepperState:
    """Mutable step-size memory carried between segments."""

    __slots__ = ("h", "err_prev", "n_accepted", "n_rejected")

    def __init__(self, h):
        self.h = h
        self.err_prev = 1e-4
        self.n_accepted = 0
        self.n_rejected = 0


def integrate_segment(f, t0, t1, y0, rtol, atol, dt_max, state, t_out=()):
    """Advance ``y`` from ``t0`` to exactly ``t1``.

    Parameters
    ----------
    f : callable
        Right-hand side ``f(t, y) -> ndarray``.
    t_out : sequence of float
        Sorted output times inside ``(t0, t1]``.
    state : StepperState
        Step-size memory; updated in place.

    Returns
    -------
    y1 : ndarray
        Solution at ``t1``.
    y_out : ndarray, shape (len(t_out), n)
        Dense-output values at ``t_out``.
    """
    t_out = np.asarray(t_out, dtype=float)
    y = np.array(y0, dtype=float)
    y_out = np.empty((len(t_out), y.size))
    i_out = 0
    t = t0
    K = np.empty((7, y.size))
    K[0] = f(t, y)
    span = t1 - t0
    if span <= 0:
        return y, y_out
    h = min(state.h, dt_max)

    while t < t1:
        h_min = 16 * np.spacing(max(abs(t), abs(t1)))
        last = t + h >= t1 - h_min
        if last:
            h = t1 - t
        for i in range(1, 7):
            K[i] = f(t + C[i] * h, y + h * (A[i] @ K[:i]))
        y_new = y + h * (B @ K)
        K[6] = f(t + h, y_new)

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((h * (E @ K) / scale) ** 2))

        if err <= 1.0:
            t_new = t1 if last else t + h
            while i_out < len(t_out) and t_out[i_out] <= t_new:
                s = (t_out[i_out] - t) / h
                y_out[i_out] = y + h * ((K.T @ P) @ np.array([s, s * s, s**3, s**4]))
                i_out += 1
            err = max(err, 1e-10)
            factor = SAFETY * err**-ALPHA * state.err_prev**BETA
            factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
            state.err_prev = err
            state.n_accepted += 1
            t, y = t_new, y_new
            K[0] = K[6]
            if not last:
                state.h = h
            h = min(h * factor, dt_max)
        else:
            state.n_rejected += 1
            h *= max(MIN_FACTOR, SAFETY * err**-0.2)
            if h < h_min:
                raise StepSizeUnderflow("step size underflow", t)

    state.h = min(max(h, state.h), dt_max)
    # remaining outputs coincide with t1 up to rounding
    while i_out < len(t_out):
        y_out[i_out] = y
        i_out += 1
    return y, y_out
