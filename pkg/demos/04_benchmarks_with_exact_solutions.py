# The three benchmarks with known solutions, and their error metrics.
from fracmol import builtin, error_metrics, solve

# Example 1: the exact solution lies in the span already at n = 4
sol = solve(builtin(1), 4)
e2, einf = error_metrics(sol)
print(f"example 1, n=4: E2={e2:.2e}  Einf={einf:.2e}  ({sol.wall_time:.2f}s)")

# Example 2: t^2 exp(alpha t) x^2 (1-x)^2, exact once n >= 2
for n in (1, 2, 3):
    e2, einf = error_metrics(solve(builtin(2, alpha=0.2, beta=1.2, gamma=2.0), n))
    print(f"example 2, n={n}: E2={e2:.2e}  Einf={einf:.2e}")

# Example 3: exp(-t) sin(4x) is not a polynomial, so the error decays spectrally
for n in (5, 10, 15, 20, 25):
    e2, einf = error_metrics(solve(builtin(3), n))
    print(f"example 3, n={n:2d}: E2={e2:.2e}  Einf={einf:.2e}")
