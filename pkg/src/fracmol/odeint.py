"""Adaptive Dormand--Prince 5(4) integrator with dense output.

The classical seven-stage pair with first-same-as-last evaluation, error
control in a scaled RMS norm, a PI step-size controller and the fourth-order
continuous extension of the pair for output between accepted steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# fifth-order minus embedded fourth-order weights
E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension: y(t + s h) = y + h * K^T (P @ [s, s^2, s^3, s^4])
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
# PI exponents (Hairer & Wanner's DOPRI5 defaults)
BETA = 0.04
EXPO = 0.2 - 0.75 * BETA


class IntegrationError(RuntimeError):
    """Raised when the integrator cannot reach the final time."""


@dataclass(frozen=True)
class TolSettings:
    abs_tol: float = 1.0e-14
    rel_tol: float = 1.0e-12
    max_steps: int = 1_000_000
    initial_step: float | None = None

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class IvpProblem:
    rhs: Callable[[float, np.ndarray], np.ndarray]
    t0: float
    t_end: float
    y0: np.ndarray

    def __post_init__(self) -> None:
        if not self.t_end > self.t0:
            raise ValueError("t_end must exceed t0")

    @property
    def dimension(self) -> int:
        return int(np.size(self.y0))


@dataclass
class IvpSolution:
    """Accepted steps plus everything needed for dense output.

    ``dense[i]`` holds the ``(dim, 4)`` polynomial coefficients of the
    continuous extension on ``[times[i], times[i + 1]]``.
    """

    times: np.ndarray
    states: np.ndarray
    dense: np.ndarray = field(repr=False)
    accepted: int = 0
    rejected: int = 0
    rhs_evaluations: int = 0

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def __call__(self, t):
        return sample(self, t)


def _rms(v: np.ndarray) -> float:
    # an overflow here just means "reject the step"
    with np.errstate(over="ignore"):
        return float(np.sqrt(np.mean(v * v)))


def _initial_step(fun, t0, y0, f0, direction_span, order, atol, rtol) -> float:
    scale = atol + np.abs(y0) * rtol
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, direction_span)
    y1 = y0 + h0 * f0
    f1 = fun(t0 + h0, y1)
    d2 = _rms((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / (order + 1))
    return min(100 * h0, h1, direction_span)


def solve_ivp(problem: IvpProblem, tol: TolSettings = TolSettings()) -> IvpSolution:
    """Integrate ``problem`` from ``t0`` to ``t_end``.

    Raises :class:`IntegrationError` on step-size underflow, when
    ``tol.max_steps`` is exhausted, or when the right-hand side returns
    non-finite values.
    """
    t0, t_end = float(problem.t0), float(problem.t_end)
    y = np.array(problem.y0, dtype=float).ravel()
    dim = y.size
    atol, rtol = tol.abs_tol, tol.rel_tol
    span = t_end - t0
    nfev = 0

    def fun(t, yy):
        nonlocal nfev
        nfev += 1
        out = np.asarray(problem.rhs(t, yy), dtype=float).ravel()
        if out.shape != (dim,):
            raise IntegrationError(f"rhs returned shape {out.shape}, expected ({dim},)")
        if not np.all(np.isfinite(out)):
            raise IntegrationError(f"rhs returned non-finite values at t={t}")
        return out

    f = fun(t0, y)
    if tol.initial_step is not None:
        h = min(float(tol.initial_step), span)
    else:
        h = _initial_step(fun, t0, y, f, span, 4, atol, rtol)
    h_min = 1e-14 * span

    times = [t0]
    states = [y.copy()]
    dense_log = []
    K = np.empty((7, dim))
    t = t0
    err_old = 1e-4
    accepted = rejected = 0
    step_rejected = False

    while t < t_end:
        if accepted + rejected >= tol.max_steps:
            raise IntegrationError(f"max_steps={tol.max_steps} exceeded at t={t}")
        if h < h_min:
            raise IntegrationError(f"step size underflow (h={h:.3e}) at t={t}")
        last = t + h >= t_end or t_end - (t + h) < h_min
        if last:
            h = t_end - t

        K[0] = f
        for s in range(1, 7):
            dy = A[s] @ K[:s]
            K[s] = fun(t + C[s] * h, y + h * dy)
        y_new = y + h * (B @ K)
        f_new = K[6]

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(h * (E @ K) / scale)

        if err <= 1.0:
            t_new = t_end if last else t + h
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * err ** -EXPO * err_old**BETA
                factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
            if step_rejected:
                factor = min(1.0, factor)
            err_old = max(err, 1e-4)
            dense_log.append(h * (K.T @ P))
            t, y, f = t_new, y_new, f_new
            times.append(t)
            states.append(y.copy())
            accepted += 1
            step_rejected = False
            h = h * factor
        else:
            factor = max(MIN_FACTOR, SAFETY * err ** -EXPO)
            h = h * factor
            rejected += 1
            step_rejected = True

    return IvpSolution(
        times=np.asarray(times),
        states=np.asarray(states),
        dense=np.asarray(dense_log).reshape(len(dense_log), dim, 4),
        accepted=accepted,
        rejected=rejected,
        rhs_evaluations=nfev,
    )


def sample(solution: IvpSolution, t):
    """Dense output at time ``t`` (scalar or array).

    Returns a vector for scalar ``t`` and an array of shape ``(len(t), dim)``
    otherwise.
    """
    tq = np.asarray(t, dtype=float)
    scalar = tq.ndim == 0
    tq = np.atleast_1d(tq)
    times = solution.times
    span = times[-1] - times[0]
    slack = 1e-13 * max(span, 1.0)
    if np.any(tq < times[0] - slack) or np.any(tq > times[-1] + slack):
        raise ValueError(f"t outside [{times[0]}, {times[-1]}]")
    tq = np.clip(tq, times[0], times[-1])

    idx = np.searchsorted(times, tq, side="right") - 1
    idx = np.clip(idx, 0, len(times) - 2)
    out = np.empty((tq.size, solution.states.shape[1]))
    for q, (i, tt) in enumerate(zip(idx, tq)):
        if tt == times[i]:
            out[q] = solution.states[i]
            continue
        if tt == times[i + 1]:
            out[q] = solution.states[i + 1]
            continue
        s = (tt - times[i]) / (times[i + 1] - times[i])
        out[q] = solution.states[i] + solution.dense[i] @ np.array([s, s * s, s**3, s**4])
    return out[0] if scalar else out


def observed_order(errors, step_counts) -> float:
    """Convergence order estimated from a tolerance sweep.

    With ``N`` accepted steps a method of order ``p`` has global error of
    size ``N**-p``, so ``p`` is minus the least-squares slope of
    ``log(error)`` against ``log(N)``.
    """
    x = np.log(np.asarray(step_counts, dtype=float))
    yv = np.log(np.asarray(errors, dtype=float))
    return float(-np.polyfit(x, yv, 1)[0])
