# Describe a problem in JSON, solve it from Python, then from the command line.
import json
import subprocess
import sys
import tempfile
from pathlib import Path

from fracmol import TolSettings, error_metrics, load_config, solve

config = {
    "alpha": 0.5, "beta": 2.0, "ell": 3.141592653589793, "horizon": 1.0,
    # u_t = u_xx written as two halves of a second derivative
    "c_beta_plus": "0.5", "c_beta_minus": "0.5",
    "initial": "sin(x)",
    "exact": "exp(-t)*sin(x)",
}
work = Path(tempfile.mkdtemp())
path = work / "heat.json"
path.write_text(json.dumps(config, indent=2))

spec = load_config(path).to_spec()
sol = solve(spec, 12)
print("heat equation, n=12: E2=%.2e Einf=%.2e" % error_metrics(sol))
# A second-order operator makes the system stiff: the explicit integrator runs
# at its stability limit (note the rejected steps) and its tolerance, not the
# spatial resolution, sets the error. Tighter tolerances remove that floor.
print("  accepted/rejected:", sol.coefficients.accepted, sol.coefficients.rejected)
sol = solve(spec, 12, TolSettings(abs_tol=1e-16, rel_tol=1e-14))
print("  tighter tolerances: E2=%.2e Einf=%.2e" % error_metrics(sol))

# the same thing through the CLI, with a convergence table
out = work / "out"
cmd = [sys.executable, "-m", "fracmol", "convergence", "--config", str(path),
       "--nmin", "4", "--nmax", "12", "--nstep", "4", "--out", str(out)]
sys.stdout.flush()
subprocess.run(cmd, check=True)
print((out / "errors.csv").read_text())
