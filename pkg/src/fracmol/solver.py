r"""Method-of-lines solver for two-sided space-fractional advection--diffusion.

The problem on :math:`0 < x < \ell`, :math:`0 \le t \le T` is

.. math::

    u_t + c_\alpha^+\, {}_0D_x^\alpha u + c_\alpha^-\, {}_xD_\ell^\alpha u
        = c_\beta^+\, {}_0D_x^\beta u + c_\beta^-\, {}_xD_\ell^\beta u + s,

with :math:`u(x, 0) = f(x)` and :math:`u(0, t) = u(\ell, t) = 0`. Expanding
:math:`u` in the basis :math:`\varphi_k` and collocating at the shifted
Gauss--Jacobi(1, 1) nodes gives the explicit system

.. math::

    \dot a = M^{-1}\big[-C_\alpha^+ D_\alpha^+ - C_\alpha^- D_\alpha^-
        + C_\beta^+ D_\beta^+ + C_\beta^- D_\beta^-\big] a + M^{-1} s(t),
    \qquad a(0) = M^{-1} F,

which is integrated with :func:`fracmol.odeint.solve_ivp`.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from fracmol.basis import BasisSpec, initial_projection_rhs, phi_matrix
from fracmol.odeint import IntegrationError, IvpProblem, IvpSolution, TolSettings, sample, solve_ivp
from fracmol.operators import (
    CollocationGrid,
    FractionalOperatorSet,
    build_fractional_matrices,
    build_grid,
)

log = logging.getLogger(__name__)

CoefficientFn = Callable[[np.ndarray, float], np.ndarray]

#: number of uniform report times used by :func:`error_metrics`
REPORT_INTERVALS = 100


class MissingExactSolutionError(ValueError):
    pass


class CoefficientWarning(UserWarning):
    pass


def _zero(x, t=0.0):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ProblemSpec:
    """A complete problem instance.

    Coefficient, source and exact-solution callables take ``(x, t)`` with
    ``x`` a numpy array and return an array of the same shape; ``initial``
    takes ``x`` only. ``steady_coefficients`` promises that the four
    coefficients do not depend on ``t``, which lets the solver fold them
    into a single constant matrix.
    """

    alpha: float
    beta: float
    ell: float
    horizon: float
    c_alpha_plus: CoefficientFn = _zero
    c_alpha_minus: CoefficientFn = _zero
    c_beta_plus: CoefficientFn = _zero
    c_beta_minus: CoefficientFn = _zero
    source: CoefficientFn = _zero
    initial: Callable[[np.ndarray], np.ndarray] = _zero
    exact: Optional[CoefficientFn] = None
    steady_coefficients: bool = False
    name: str = "problem"
    incompatible_boundary_data: bool = field(default=False, init=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 1.0 < self.beta <= 2.0:
            raise ValueError(f"beta must lie in (1, 2], got {self.beta}")
        if not self.ell > 0:
            raise ValueError(f"ell must be positive, got {self.ell}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        ends = np.asarray(self.initial(np.array([0.0, self.ell])), dtype=float)
        object.__setattr__(
            self, "incompatible_boundary_data", bool(np.any(np.abs(ends) > 1e-12))
        )


@dataclass
class SpectralSolution:
    spec: ProblemSpec
    n: int
    grid: CollocationGrid
    operators: FractionalOperatorSet
    coefficients: IvpSolution
    wall_time: float = 0.0

    def coefficients_at(self, t) -> np.ndarray:
        return sample(self.coefficients, t)

    def __call__(self, x, t):
        return evaluate(self, x, t)


def _sample_coefficient(fn: CoefficientFn, x: np.ndarray, t: float, label: str) -> np.ndarray:
    vals = np.broadcast_to(np.asarray(fn(x, t), dtype=float), x.shape)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError(f"{label} is not finite at t={t}")
    return vals


def semidiscretize(spec: ProblemSpec, n: int, *, operators: FractionalOperatorSet | None = None,
                   grid: CollocationGrid | None = None) -> IvpProblem:
    """Reduce ``spec`` to an ODE system for the ``n + 1`` basis coefficients."""
    if n < 1:
        raise ValueError("n must be >= 1")
    basis = BasisSpec(spec.ell, n)
    grid = grid or build_grid(spec.ell, n)
    ops = operators or build_fractional_matrices(grid, basis, spec.alpha, spec.beta)
    x = grid.nodes
    minv = ops.mass_inv

    coeffs = [
        ("c_alpha_plus", spec.c_alpha_plus, ops.d_alpha_left, -1.0),
        ("c_alpha_minus", spec.c_alpha_minus, ops.d_alpha_right, -1.0),
        ("c_beta_plus", spec.c_beta_plus, ops.d_beta_left, 1.0),
        ("c_beta_minus", spec.c_beta_minus, ops.d_beta_right, 1.0),
    ]
    probe = np.linspace(0.0, spec.ell, 257)
    for label, fn, _, _ in coeffs:
        for t in (0.0, spec.horizon):
            if np.any(_sample_coefficient(fn, probe, t, label) < 0):
                warnings.warn(f"{label} is negative somewhere on the domain", CoefficientWarning,
                              stacklevel=2)
                break

    def operator_at(t: float) -> np.ndarray:
        total = np.zeros((n + 1, n + 1))
        for label, fn, mat, sign in coeffs:
            c = _sample_coefficient(fn, x, t, label)
            if np.any(c != 0):
                total += sign * c[:, None] * mat
        return minv @ total

    def source_at(t: float) -> np.ndarray:
        return minv @ _sample_coefficient(spec.source, x, t, "source")

    if spec.steady_coefficients:
        system = operator_at(0.0)

        def rhs(t, a):
            return system @ a + source_at(t)
    else:
        def rhs(t, a):
            return operator_at(t) @ a + source_at(t)

    f_nodes = initial_projection_rhs(basis, spec.initial, grid)
    a0 = minv @ f_nodes
    return IvpProblem(rhs=rhs, t0=0.0, t_end=float(spec.horizon), y0=a0)


def solve(spec: ProblemSpec, n: int, tol: TolSettings = TolSettings()) -> SpectralSolution:
    """Assemble, integrate to ``spec.horizon`` and wrap the result."""
    start = time.perf_counter()
    basis = BasisSpec(spec.ell, n)
    grid = build_grid(spec.ell, n)
    ops = build_fractional_matrices(grid, basis, spec.alpha, spec.beta)
    ivp = semidiscretize(spec, n, operators=ops, grid=grid)
    try:
        traj = solve_ivp(ivp, tol)
    except IntegrationError as exc:
        raise IntegrationError(
            f"{spec.name}: n={n}, alpha={spec.alpha}, beta={spec.beta}: {exc}"
        ) from exc
    elapsed = time.perf_counter() - start
    log.info("%s n=%d: %d steps (%d rejected) in %.3fs", spec.name, n, traj.accepted,
             traj.rejected, elapsed)
    return SpectralSolution(spec=spec, n=n, grid=grid, operators=ops, coefficients=traj,
                            wall_time=elapsed)


def evaluate(solution: SpectralSolution, x, t):
    r"""Evaluate :math:`\tilde u_n(x, t) = \sum_k a_k(t) \varphi_k(x)`.

    ``x`` and ``t`` may be scalars or 1-D arrays; with two arrays the result
    has shape ``(len(t), len(x))``.
    """
    spec = solution.spec
    xa = np.asarray(x, dtype=float)
    ta = np.asarray(t, dtype=float)
    if np.any(xa < 0) or np.any(xa > spec.ell):
        raise ValueError(f"x outside [0, {spec.ell}]")
    if np.any(ta < 0) or np.any(ta > spec.horizon * (1 + 1e-14)):
        raise ValueError(f"t outside [0, {spec.horizon}]")
    basis = phi_matrix(spec.ell, solution.n, np.ravel(xa))
    coef = np.atleast_2d(sample(solution.coefficients, np.ravel(ta)))
    values = coef @ basis.T
    if ta.ndim == 0 and xa.ndim == 0:
        return float(values[0, 0])
    if ta.ndim == 0:
        return values[0].reshape(xa.shape)
    if xa.ndim == 0:
        return values[:, 0]
    return values


def report_times(horizon: float) -> np.ndarray:
    return np.arange(REPORT_INTERVALS + 1) * (horizon / REPORT_INTERVALS)


def error_metrics(solution: SpectralSolution) -> tuple[float, float]:
    r"""The ``(E_2, E_inf)`` errors on the collocation nodes and ``T j / 100``.

    :math:`E_2 = \sqrt{\frac{1}{100 n}\sum_{i=0}^n\sum_{j=0}^{100} e_{ij}^2}`
    and :math:`E_\infty = \max_{ij} |e_{ij}|`, with :math:`e_{ij}` the error at
    node ``i`` and report time ``j``.
    """
    spec = solution.spec
    if spec.exact is None:
        raise MissingExactSolutionError(f"{spec.name} has no exact solution")
    nodes = solution.grid.nodes
    times = report_times(spec.horizon)
    approx = evaluate(solution, nodes, times)
    exact = np.array([np.broadcast_to(spec.exact(nodes, tj), nodes.shape) for tj in times])
    err = exact - approx
    e2 = float(np.sqrt(np.sum(err**2) / (REPORT_INTERVALS * solution.n)))
    einf = float(np.max(np.abs(err)))
    return e2, einf
