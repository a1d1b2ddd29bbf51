# The basis phi_k(x) = lambda_k x (l - x) P_k^{(1,1)}(2x/l - 1) and the dense
# matrices the method of lines is built from.
import numpy as np

from fracmol.basis import BasisSpec, phi_matrix
from fracmol.operators import build_fractional_matrices, build_grid

ell, n = 1.0, 6
grid = build_grid(ell, n)
ops = build_fractional_matrices(grid, BasisSpec(ell, n), alpha=0.5, beta=1.5)
print("collocation nodes:", np.round(grid.nodes, 4))

# the inverse mass matrix is closed form, not a linear solve
err = np.abs(ops.mass @ ops.mass_inv - np.eye(n + 1)).sum(axis=1).max()
print("||M Minv - I||_inf =", err)

# Interpolate u(x) = x (1-x) and apply the operators. For this quadratic the
# left derivative of order 1.5 is known in closed form:
#   D^{1.5} x = x^{-0.5}/Gamma(0.5),  D^{1.5} x^2 = 2 x^{0.5}/Gamma(1.5)
from math import gamma

x = grid.nodes
a = ops.mass_inv @ (x * (1 - x))
exact = x**-0.5 / gamma(0.5) - 2 * x**0.5 / gamma(1.5)
print("left 1.5 derivative, max error:", np.abs(ops.d_beta_left @ a - exact).max())
# u is symmetric about 1/2, so the right derivative is the mirror image
print("right/left mirror check:", np.abs(ops.d_beta_right @ a - (ops.d_beta_left @ a)[::-1]).max())

# the expansion reproduces u between nodes as well
xs = np.linspace(0, 1, 5)
print("u on a fine grid:", phi_matrix(ell, n, xs) @ a)
