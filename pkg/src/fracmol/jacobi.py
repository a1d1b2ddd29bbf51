r"""Jacobi polynomials :math:`P_j^{(a,b)}` and Gauss--Jacobi quadrature.

Polynomials are evaluated with the forward three-term recurrence, which is
stable on :math:`[-1, 1]` for the parameter ranges used here. Gauss nodes are
seeded from the Golub--Welsch eigenvalues and polished by Newton iteration on
the recurrence; weights come from the closed form involving the squared
derivative at each node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.linalg import eigh_tridiagonal

_DOMAIN_SLACK = 1.0e-14


class QuadratureError(RuntimeError):
    """Raised when Gauss--Jacobi nodes cannot be computed."""


@dataclass(frozen=True)
class JacobiParams:
    """Exponents of the weight :math:`(1 - x)^a (1 + x)^b`."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a > -1 and self.b > -1):
            raise ValueError(f"Jacobi parameters must be > -1, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss--Jacobi nodes and weights on :math:`(-1, 1)`."""

    params: JacobiParams
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        """Apply the rule to ``f``, which must accept an array of nodes."""
        return float(np.dot(self.weights, f(self.nodes)))


def _as_params(params) -> JacobiParams:
    if isinstance(params, JacobiParams):
        return params
    a, b = params
    return JacobiParams(float(a), float(b))


def recurrence_coefficients(a: float, b: float, j: int) -> tuple[float, float, float]:
    r"""Coefficients :math:`(A_j, B_j, C_j)` of
    :math:`P_{j+1} = (A_j x - B_j) P_j - C_j P_{j-1}`, valid for ``j >= 1``.
    """
    s = a + b
    den = 2.0 * (j + 1) * (s + j + 1)
    A = (s + 2 * j + 1) * (s + 2 * j + 2) / den
    B = (b * b - a * a) * (s + 2 * j + 1) / (den * (s + 2 * j))
    C = 2.0 * (a + j) * (b + j) * (s + 2 * j + 2) / (den * (s + 2 * j))
    return A, B, C


def _recurrence(a: float, b: float, j: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(P_j, P_{j-1})`` at ``x``; ``P_{-1}`` is taken as zero."""
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    if j == 0:
        return p, p_prev
    p_prev, p = p, 0.5 * ((a + b + 2.0) * x + a - b)
    for i in range(1, j):
        A, B, C = recurrence_coefficients(a, b, i)
        p_prev, p = p, (A * x - B) * p - C * p_prev
    return p, p_prev


def jacobi_eval(params, j: int, x):
    r"""Evaluate :math:`P_j^{(a,b)}(x)` for ``x`` in :math:`[-1, 1]`.

    ``x`` may be a scalar or an array; negative ``j`` gives zero so that
    index-shifted formulas need no special cases.
    """
    p = _as_params(params)
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0 + _DOMAIN_SLACK):
        raise ValueError("jacobi_eval: x outside [-1, 1]")
    if j < 0:
        out = np.zeros_like(xa)
    else:
        out, _ = _recurrence(p.a, p.b, int(j), xa)
    return float(out) if out.ndim == 0 else out


def jacobi_eval_unchecked(a: float, b: float, j: int, x: np.ndarray) -> np.ndarray:
    """Like :func:`jacobi_eval` but without the domain check; for internal hot loops."""
    x = np.asarray(x, dtype=float)
    if j < 0:
        return np.zeros_like(x)
    return _recurrence(a, b, j, x)[0]


def jacobi_deriv(params, j: int, m: int, x):
    r"""``m``-th derivative of :math:`P_j^{(a,b)}` at ``x``.

    Uses :math:`\frac{d^m}{dx^m} P_j^{(a,b)} = d_{j,m}^{a,b} P_{j-m}^{(a+m,b+m)}`.
    Returns zero when ``j < m``.
    """
    if m < 1:
        raise ValueError("derivative order must be >= 1")
    p = _as_params(params)
    if j < m:
        xa = np.asarray(x, dtype=float)
        out = np.zeros_like(xa)
        return float(out) if out.ndim == 0 else out
    # when a+b+1 is a non-positive integer the gamma ratio is a finite
    # polynomial in j; evaluate it as a product to avoid lgamma poles
    s = p.a + p.b
    const = 1.0
    for i in range(m):
        const *= (j + s + 1 + i) / 2.0
    return const * jacobi_eval(JacobiParams(p.a + m, p.b + m), j - m, x)


def _value_and_derivative(a: float, b: float, n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p, _ = _recurrence(a, b, n, x)
    dp = 0.5 * (n + a + b + 1) * _recurrence(a + 1, b + 1, n - 1, x)[0]
    return p, dp


def _golub_welsch_nodes(a: float, b: float, npoints: int) -> np.ndarray:
    if npoints == 1:
        return np.array([(b - a) / (a + b + 2)])
    s = a + b
    k = np.arange(npoints, dtype=float)
    diag = np.empty(npoints)
    diag[0] = (b - a) / (s + 2)
    kd = k[1:]
    diag[1:] = (b * b - a * a) / ((2 * kd + s) * (2 * kd + s + 2))
    off2 = np.empty(npoints - 1)
    # k = 1 written with the (k + s) / (2k + s - 1) factor cancelled
    off2[0] = 4 * (1 + a) * (1 + b) / ((2 + s) ** 2 * (3 + s))
    kk = k[2:]
    off2[1:] = (
        4 * kk * (kk + a) * (kk + b) * (kk + s)
        / ((2 * kk + s) ** 2 * (2 * kk + s + 1) * (2 * kk + s - 1))
    )
    return eigh_tridiagonal(diag, np.sqrt(off2), eigvals_only=True)


def gauss_jacobi(params, npoints: int, *, maxiter: int = 20) -> QuadratureRule:
    r"""Gauss--Jacobi rule with ``npoints`` nodes.

    Exact for polynomials of degree ``2 * npoints - 1`` against the weight
    :math:`(1 - x)^a (1 + x)^b`.
    """
    p = _as_params(params)
    if npoints < 1:
        raise ValueError("npoints must be >= 1")
    a, b, n = p.a, p.b, int(npoints)

    x = _golub_welsch_nodes(a, b, n)
    for _ in range(maxiter):
        val, dval = _value_and_derivative(a, b, n, x)
        dx = val / dval
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    else:
        if np.max(np.abs(dx)) > 1e-12:
            raise QuadratureError(f"Newton polish did not converge for n={n}, a={a}, b={b}")
    x = np.sort(x)
    if np.any(np.abs(x) >= 1.0) or np.any(np.diff(x) <= 0):
        raise QuadratureError("Gauss--Jacobi nodes are not simple interior points")

    _, dval = _value_and_derivative(a, b, n, x)
    # Gamma(n+a+1) Gamma(n+b+1) / (Gamma(n+1) Gamma(n+a+b+1)) as two pochhammers
    const = 2.0 ** (a + b + 1) * special.poch(n + 1, a) / special.poch(n + b + 1, a)
    w = const / ((1.0 - x) * (1.0 + x) * dval**2)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(params=p, nodes=x, weights=w)


def weight_mass(params) -> float:
    r"""Total mass :math:`2^{a+b+1} B(a+1, b+1)` of the Jacobi weight."""
    p = _as_params(params)
    return math.exp(
        (p.a + p.b + 1) * math.log(2.0)
        + math.lgamma(p.a + 1)
        + math.lgamma(p.b + 1)
        - math.lgamma(p.a + p.b + 2)
    )


def norm_squared(params, j: int) -> float:
    r"""Squared norm :math:`\gamma_j^{a,b}` of :math:`P_j^{(a,b)}`."""
    p = _as_params(params)
    a, b = p.a, p.b
    if j == 0:
        return weight_mass(p)
    return math.exp(
        (a + b + 1) * math.log(2.0)
        + math.lgamma(j + a + 1)
        + math.lgamma(j + b + 1)
        - math.lgamma(j + 1)
        - math.lgamma(j + a + b + 1)
    ) / (2 * j + a + b + 1)


def jacobi_table(a: float, b: float, n: int, x) -> np.ndarray:
    r"""Values :math:`P_0^{(a,b)}(x), \dots, P_n^{(a,b)}(x)` as columns.

    Returns an array of shape ``(len(x), n + 1)``; ``n = -1`` gives an empty
    table.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, max(n + 1, 0)))
    if n < 0:
        return out
    out[:, 0] = 1.0
    if n >= 1:
        out[:, 1] = 0.5 * ((a + b + 2.0) * x + a - b)
    for j in range(1, n):
        A, B, C = recurrence_coefficients(a, b, j)
        out[:, j + 1] = (A * x - B) * out[:, j] - C * out[:, j - 1]
    return out
