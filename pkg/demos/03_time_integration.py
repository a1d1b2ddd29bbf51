# The Dormand-Prince 5(4) integrator on its own.
import math

import numpy as np

from fracmol.odeint import IvpProblem, TolSettings, observed_order, sample, solve_ivp

prob = IvpProblem(rhs=lambda t, y: -y, t0=0.0, t_end=1.0, y0=np.array([1.0]))
sol = solve_ivp(prob)
print("y(1) error at default tolerances:", abs(sol.states[-1, 0] - math.exp(-1)))
print("accepted/rejected/rhs calls:", sol.accepted, sol.rejected, sol.rhs_evaluations)

# dense output between steps
t = np.linspace(0, 1, 7)
print("dense output error:", np.abs(sample(sol, t)[:, 0] - np.exp(-t)).max())

errors, steps = [], []
for tol in [1e-6, 1e-8, 1e-10, 1e-12]:
    s = solve_ivp(prob, TolSettings(abs_tol=tol, rel_tol=tol))
    errors.append(abs(s.states[-1, 0] - math.exp(-1)))
    steps.append(s.accepted)
    print(f"tol={tol:.0e}  steps={s.accepted:5d}  error={errors[-1]:.2e}")
print("observed order:", round(observed_order(errors, steps), 2))
