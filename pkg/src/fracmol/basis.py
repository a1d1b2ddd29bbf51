r"""Modified Jacobi functions and the collocation basis.

The basis is

.. math::

    \varphi_k(x) = \lambda_k\, x (\ell - x)\, P_k^{(1,1)}(2x/\ell - 1),
    \qquad \lambda_k = \frac{(k + 2)(2k + 3)}{\ell^3 (k + 1)},

which vanishes at both ends of :math:`[0, \ell]`. Its left Riemann--Liouville
derivatives :math:`\psi_k^{\sigma+}` have a closed form built from shifted
Jacobi polynomials.

Right-sided derivatives and their sign
--------------------------------------
Reflecting the right-sided definition through :math:`x \mapsto \ell - x` gives
:math:`{}_x D_\ell^\sigma g(x) = {}_0 D_x^\sigma [g(\ell - \cdot)](\ell - x)`
for every order :math:`\sigma`, with no :math:`(-1)^m` factor. Combined with
:math:`\varphi_k(\ell - x) = (-1)^k \varphi_k(x)` this yields

.. math::

    \psi_k^{\sigma-}(x) = (-1)^k\, \psi_k^{\sigma+}(\ell - x),

so the sign depends on the basis index ``k`` only, never on the integer part
of ``sigma``. This is what :func:`psi_right` returns; the test suite checks it
entrywise against Grünwald--Letnikov sums of the right-sided definition for
``sigma`` in both ``(0, 1)`` and ``(1, 2)`` and odd and even ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fracmol.jacobi import jacobi_eval_unchecked, jacobi_table
from fracmol.specfun import gamma_ratio

_EDGE_SLACK = 1.0e-14


class SingularValueError(ValueError):
    """Raised when a fractional derivative is requested where it is infinite."""


class UnsupportedOrderError(ValueError):
    """Raised for fractional orders outside ``(0, 1) U (1, 2]``."""


@dataclass(frozen=True)
class BasisSpec:
    """Basis :math:`\\varphi_0, \\dots, \\varphi_n` on :math:`[0, \\ell]`."""

    ell: float
    n: int

    def __post_init__(self) -> None:
        if not self.ell > 0:
            raise ValueError(f"domain length must be positive, got {self.ell}")
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")


@dataclass(frozen=True)
class MJFParams:
    a: float
    b: float
    rho: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not (self.a > -1 and self.b > -1):
            raise ValueError("MJF Jacobi exponents must be > -1")
        if self.rho < 0 or self.theta < 0:
            raise ValueError("MJF boundary exponents must be >= 0")


def _check_domain(x, ell: float) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    if np.any(xa < -_EDGE_SLACK * ell) or np.any(xa > ell * (1 + _EDGE_SLACK)):
        raise ValueError(f"x outside [0, {ell}]")
    return np.clip(xa, 0.0, ell)


def _scalar_or_array(v: np.ndarray):
    return float(v) if np.ndim(v) == 0 else v


def check_order(sigma: float) -> None:
    if sigma == 1.0:
        raise UnsupportedOrderError("order 1 is excluded; use the classical first derivative")
    if not (0.0 < sigma <= 2.0):
        raise UnsupportedOrderError(f"fractional order must lie in (0, 1) U (1, 2], got {sigma}")


def mjf_eval(params: MJFParams, ell: float, k: int, x):
    r""":math:`x^\rho (\ell - x)^\theta P_k^{(a,b)}(2x/\ell - 1)`."""
    xa = _check_domain(x, ell)
    p = jacobi_eval_unchecked(params.a, params.b, k, 2.0 * xa / ell - 1.0)
    out = xa**params.rho * (ell - xa) ** params.theta * p
    return _scalar_or_array(out)


def scale(ell: float, k):
    r"""Normalisation :math:`\lambda_k`; ``k`` may be an integer array."""
    k = np.asarray(k, dtype=float)
    return (k + 2) * (2 * k + 3) / ((k + 1) * ell**3)


def phi(spec: BasisSpec, k: int, x):
    if not 0 <= k <= spec.n:
        raise IndexError(f"basis index {k} outside 0..{spec.n}")
    xa = _check_domain(x, spec.ell)
    ell = spec.ell
    p = jacobi_eval_unchecked(1.0, 1.0, k, 2.0 * xa / ell - 1.0)
    return _scalar_or_array(scale(ell, k) * xa * (ell - xa) * p)


def phi_matrix(ell: float, n: int, x) -> np.ndarray:
    """Matrix with entry ``(i, k) = phi_k(x_i)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    table = jacobi_table(1.0, 1.0, n, 2.0 * x / ell - 1.0)
    return (x * (ell - x))[:, None] * table * scale(ell, np.arange(n + 1))[None, :]


def psi_left_matrix(ell: float, n: int, sigma: float, x) -> np.ndarray:
    r"""Matrix with entry ``(i, k)`` equal to :math:`\psi_k^{\sigma+}(x_i)`.

    All ``x`` must lie in ``(0, ell]``; for ``sigma < 1`` the point ``0`` is
    also allowed.
    """
    check_order(sigma)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if sigma > 1 and np.any(x <= 0):
        raise SingularValueError(f"left derivative of order {sigma} is singular at x = 0")
    k = np.arange(n + 1, dtype=float)
    xi = 2.0 * x / ell - 1.0

    if sigma == 2.0:
        lam = scale(ell, k)
        p11 = jacobi_table(1.0, 1.0, n, xi)
        p22 = np.zeros_like(p11)
        p33 = np.zeros_like(p11)
        p22[:, 1:] = jacobi_table(2.0, 2.0, n - 1, xi)
        p33[:, 2:] = jacobi_table(3.0, 3.0, n - 2, xi)
        xx = x[:, None]
        return (lam / ell**2) * (
            (k + 4) * (k + 3) * xx * (ell - xx) * p33
            + 2 * ell * (k + 3) * (ell - 2 * xx) * p22
            - 2 * ell**2 * p11
        )

    c1 = (2 * k + 3) * (k + 2) / (k + 1) * gamma_ratio(k + 2, k + 2 - sigma) / ell**2
    c2 = (k + 2) / (k + 1) * gamma_ratio(k + 4, k + 3 - sigma) / ell**3
    c3 = gamma_ratio(k + 3, k + 2 - sigma) / ell**3
    pa = jacobi_table(1.0 + sigma, 1.0 - sigma, n, xi)
    pb = jacobi_table(1.0 + sigma, 2.0 - sigma, n, xi)
    pb_shift = np.zeros_like(pb)
    pb_shift[:, 1:] = pb[:, :-1]
    xx = x[:, None]
    # group the three Jacobi terms first, then apply the singular power
    inner = c1 * pa - xx * (c2 * pb + c3 * pb_shift)
    with np.errstate(divide="ignore"):
        power = x ** (1.0 - sigma)
    return power[:, None] * inner


def psi_right_matrix(ell: float, n: int, sigma: float, x) -> np.ndarray:
    r"""Matrix with entry ``(i, k)`` equal to :math:`\psi_k^{\sigma-}(x_i)`."""
    check_order(sigma)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if sigma > 1 and np.any(x >= ell):
        raise SingularValueError(f"right derivative of order {sigma} is singular at x = {ell}")
    signs = (-1.0) ** np.arange(n + 1)
    return psi_left_matrix(ell, n, sigma, ell - x) * signs[None, :]


def psi_left(spec: BasisSpec, sigma: float, k: int, x):
    r"""Left Riemann--Liouville derivative :math:`{}_0D_x^\sigma \varphi_k`."""
    if not 0 <= k <= spec.n:
        raise IndexError(f"basis index {k} outside 0..{spec.n}")
    xa = _check_domain(x, spec.ell)
    col = psi_left_matrix(spec.ell, k, sigma, np.ravel(xa))[:, k]
    return _scalar_or_array(col.reshape(xa.shape))


def psi_right(spec: BasisSpec, sigma: float, k: int, x):
    r"""Right Riemann--Liouville derivative :math:`{}_xD_\ell^\sigma \varphi_k`."""
    if not 0 <= k <= spec.n:
        raise IndexError(f"basis index {k} outside 0..{spec.n}")
    xa = _check_domain(x, spec.ell)
    col = psi_right_matrix(spec.ell, k, sigma, np.ravel(xa))[:, k]
    return _scalar_or_array(col.reshape(xa.shape))


def initial_projection_rhs(spec: BasisSpec, f, grid) -> np.ndarray:
    """Sample the initial data ``f`` at the collocation nodes.

    ``grid`` is either a :class:`~fracmol.operators.CollocationGrid` or an
    array of nodes; ``f`` must accept an array.
    """
    nodes = np.asarray(getattr(grid, "nodes", grid), dtype=float)
    values = np.asarray(f(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape).copy()
    return values
