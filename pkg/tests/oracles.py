"""Brute-force reference implementations used only by the test suite.

Nothing here imports the library's closed forms; polynomials are evaluated
with :func:`scipy.special.eval_jacobi`.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special
from scipy.linalg import solve_banded


LD = np.longdouble


def gl_weights(sigma: float, count: int) -> np.ndarray:
    """Grünwald weights ``(-1)^j binom(sigma, j)`` for ``j = 0..count-1``."""
    g = np.empty(count, dtype=LD)
    g[0] = 1
    j = np.arange(1, count, dtype=LD)
    g[1:] = np.cumprod(1 - (LD(sigma) + 1) / j)
    return g


def _gl_sum(f, sigma: float, x: float, length: float, npoints: int, direction: int) -> float:
    # direction=+1: left derivative on [x - length, x]; -1: right on [x, x + length]
    # sums run in extended precision; h**-sigma amplifies rounding badly
    shift = 1 if sigma > 1 else 0
    h = LD(length) / npoints
    j = np.arange(npoints + shift + 1, dtype=LD)
    pts = LD(x) - direction * (j - shift) * h
    vals = np.asarray(f(pts), dtype=LD)
    return float(np.dot(gl_weights(sigma, j.size), vals) / h ** LD(sigma))


def _richardson(values: list[float]) -> float:
    # values at h, h/2, h/4, ...; error expansion in integer powers of h
    table = list(values)
    for order in range(1, len(values)):
        table = [(2**order * table[i + 1] - table[i]) / (2**order - 1) for i in range(len(table) - 1)]
    return table[0]


def gl_left(f, sigma: float, x: float, ell: float = 1.0, resolution: int = 2**10, levels: int = 5) -> float:
    """Left Riemann--Liouville derivative on ``[0, x]`` by extrapolated Grünwald sums.

    ``f`` must accept arrays and be defined slightly beyond ``x`` when
    ``sigma > 1`` (the sum is shifted by one node for stability).
    """
    if x <= 0:
        raise ValueError("x must be positive")
    return _richardson([_gl_sum(f, sigma, x, x, resolution * 2**i, +1) for i in range(levels)])


def gl_right(f, sigma: float, x: float, ell: float = 1.0, resolution: int = 2**10, levels: int = 5) -> float:
    """Right Riemann--Liouville derivative on ``[x, ell]``."""
    if x >= ell:
        raise ValueError("x must be below ell")
    return _richardson([_gl_sum(f, sigma, x, ell - x, resolution * 2**i, -1) for i in range(levels)])


def rl_power(p: float, sigma: float, x):
    """Closed-form left RL derivative of ``x**p``."""
    return math.gamma(p + 1) / math.gamma(p + 1 - sigma) * np.asarray(x, dtype=float) ** (p - sigma)


def basis_function(ell: float, k: int):
    """phi_k built from scipy's Jacobi evaluator; defined on the whole real line."""
    lam = (k + 2) * (2 * k + 3) / ((k + 1) * ell**3)

    def f(x):
        x = np.asarray(x, dtype=float)
        return lam * x * (ell - x) * special.eval_jacobi(k, 1.0, 1.0, 2 * x / ell - 1)

    return f


def exact_basis_function(ell: float, k: int):
    """phi_k with exact rational Jacobi coefficients, evaluated in extended precision.

    The polynomial comes from sympy and is evaluated by Horner's rule in
    ``2x/ell - 1``, so it shares no code with the library's recurrences.
    """
    import sympy

    y = sympy.symbols("y")
    coeffs = sympy.Poly(sympy.jacobi(k, 1, 1, y), y).all_coeffs()
    coeffs = [LD(str(sympy.N(c, 30))) for c in coeffs]
    lam = LD((k + 2) * (2 * k + 3)) / (LD(k + 1) * LD(ell) ** 3)
    ell_ld = LD(ell)

    def f(x):
        x = np.asarray(x, dtype=LD)
        yy = 2 * x / ell_ld - 1
        acc = np.zeros_like(x)
        for c in coeffs:
            acc = acc * yy + c
        return lam * x * (ell_ld - x) * acc

    return f


def fd_heat(u0, ell: float, horizon: float, diffusivity: float = 1.0,
            nx: int = 400, nt: int = 400, source=None):
    """Crank--Nicolson solution of ``u_t = D u_xx + s`` with zero Dirichlet data.

    Returns ``(x, t, u)`` with ``u`` of shape ``(nt + 1, nx + 1)``.
    """
    x = np.linspace(0.0, ell, nx + 1)
    t = np.linspace(0.0, horizon, nt + 1)
    dx, dt = x[1] - x[0], t[1] - t[0]
    r = diffusivity * dt / dx**2
    m = nx - 1
    ab = np.zeros((3, m))
    ab[0, 1:] = -r / 2
    ab[1, :] = 1 + r
    ab[2, :-1] = -r / 2
    u = np.zeros((nt + 1, nx + 1))
    u[0] = u0(x)
    u[0, [0, -1]] = 0.0
    for step in range(nt):
        v = u[step, 1:-1]
        rhs = (1 - r) * v
        rhs[1:] += r / 2 * v[:-1]
        rhs[:-1] += r / 2 * v[1:]
        if source is not None:
            rhs += dt / 2 * (source(x[1:-1], t[step]) + source(x[1:-1], t[step + 1]))
        u[step + 1, 1:-1] = solve_banded((1, 1), ab, rhs)
    return x, t, u
