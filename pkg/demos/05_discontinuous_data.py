# Example 4: block initial data and a diffusion coefficient that jumps at x = 4.5.
# No exact solution exists, so we just look at the solution.
import numpy as np

from fracmol import builtin, evaluate, solve

x = np.linspace(0, 7, 15)
for case in (1, 2):
    sol = solve(builtin(4, case=case), 120)
    print(f"case {'I' if case == 1 else 'II'}  ({sol.wall_time:.1f}s)")
    for t in (0.0, 0.5, 1.0):
        print(f"  t={t:.1f}", np.round(evaluate(sol, x, t), 2))

# Collocating a discontinuous function gives Gibbs ripples at t = 0, and
# moving n shifts the ripples. The diffusion smooths them where it is strong
# (x < 4.5 in case I, x > 4.5 in case II).
