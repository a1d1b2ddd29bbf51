r"""Collocation grid and dense operator matrices.

Every matrix uses the same orientation: **row = collocation node, column =
basis index**. So ``mass @ a`` returns the expansion
:math:`\sum_k a_k \varphi_k` sampled at the nodes, and ``d_beta_left @ a``
its left derivative of order :math:`\beta` at the nodes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fracmol.basis import BasisSpec, phi_matrix, psi_left_matrix, psi_right_matrix
from fracmol.jacobi import QuadratureRule, gauss_jacobi, jacobi_table


@dataclass(frozen=True)
class CollocationGrid:
    """Gauss--Jacobi(1, 1) nodes mapped from :math:`(-1, 1)` onto :math:`(0, \\ell)`."""

    ell: float
    nodes: np.ndarray
    raw: QuadratureRule

    @property
    def n(self) -> int:
        return self.nodes.size - 1


@dataclass(frozen=True)
class FractionalOperatorSet:
    n: int
    alpha: float
    beta: float
    mass: np.ndarray
    mass_inv: np.ndarray
    d_alpha_left: np.ndarray
    d_alpha_right: np.ndarray
    d_beta_left: np.ndarray
    d_beta_right: np.ndarray

    def matrices(self) -> dict[str, np.ndarray]:
        return {
            "mass": self.mass,
            "mass_inv": self.mass_inv,
            "d_alpha_left": self.d_alpha_left,
            "d_alpha_right": self.d_alpha_right,
            "d_beta_left": self.d_beta_left,
            "d_beta_right": self.d_beta_right,
        }


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def build_grid(ell: float, n: int) -> CollocationGrid:
    """The ``n + 1`` shifted Gauss--Jacobi(1, 1) nodes on ``(0, ell)``."""
    spec = BasisSpec(ell, n)
    rule = gauss_jacobi((1.0, 1.0), spec.n + 1)
    nodes = 0.5 * spec.ell * (rule.nodes + 1.0)
    return CollocationGrid(ell=spec.ell, nodes=_frozen(nodes), raw=rule)


def _check_compatible(grid: CollocationGrid, spec: BasisSpec) -> None:
    if grid.ell != spec.ell or grid.n != spec.n:
        raise ValueError(
            f"grid (ell={grid.ell}, n={grid.n}) does not match basis (ell={spec.ell}, n={spec.n})"
        )


def build_mass(grid: CollocationGrid, spec: BasisSpec) -> np.ndarray:
    """Mass matrix with entry ``(i, k) = phi_k(node_i)``."""
    _check_compatible(grid, spec)
    return _frozen(phi_matrix(spec.ell, spec.n, grid.nodes))


def build_mass_inverse(grid: CollocationGrid, spec: BasisSpec) -> np.ndarray:
    r"""Closed-form inverse of :func:`build_mass`.

    Entry ``(k, i)`` is :math:`\ell w_i P_k^{(1,1)}(\xi_i) / (2(1 - \xi_i^2))`
    where :math:`\xi_i, w_i` are the unshifted Gauss--Jacobi(1, 1) nodes and
    weights. No linear solve is involved.
    """
    _check_compatible(grid, spec)
    xi, w = grid.raw.nodes, grid.raw.weights
    node_factor = spec.ell * w / (2.0 * (1.0 - xi) * (1.0 + xi))
    table = jacobi_table(1.0, 1.0, spec.n, xi)
    return _frozen(table.T * node_factor[None, :])


def build_fractional_matrices(
    grid: CollocationGrid, spec: BasisSpec, alpha: float, beta: float
) -> FractionalOperatorSet:
    """Assemble the mass matrix, its inverse and the four fractional matrices.

    ``d_*_right`` hold the true right-sided Riemann--Liouville derivatives of
    the basis at the nodes, so no extra sign bookkeeping is needed when the
    right-hand side is formed.
    """
    _check_compatible(grid, spec)
    x = grid.nodes
    ops = FractionalOperatorSet(
        n=spec.n,
        alpha=float(alpha),
        beta=float(beta),
        mass=build_mass(grid, spec),
        mass_inv=build_mass_inverse(grid, spec),
        d_alpha_left=_frozen(psi_left_matrix(spec.ell, spec.n, alpha, x)),
        d_alpha_right=_frozen(psi_right_matrix(spec.ell, spec.n, alpha, x)),
        d_beta_left=_frozen(psi_left_matrix(spec.ell, spec.n, beta, x)),
        d_beta_right=_frozen(psi_right_matrix(spec.ell, spec.n, beta, x)),
    )
    for name, mat in ops.matrices().items():
        if not np.all(np.isfinite(mat)):
            raise FloatingPointError(f"non-finite entries in {name}")
    return ops


def dump_matrices(ops: FractionalOperatorSet, directory) -> list[Path]:
    """Write each matrix as a row-major CSV with 17 significant digits."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, mat in ops.matrices().items():
        path = directory / f"{name}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            for row in mat:
                writer.writerow([f"{v:.17g}" for v in row])
        paths.append(path)
    return paths
