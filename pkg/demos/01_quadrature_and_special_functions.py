# Gauss-Jacobi quadrature and the special functions the solver leans on.
import numpy as np

from fracmol.jacobi import gauss_jacobi, jacobi_eval, weight_mass
from fracmol.specfun import fresnel_c, fresnel_s, gamma

# A rule with 6 points integrates polynomials up to degree 11 against
# the weight (1-x)^a (1+x)^b exactly.
rule = gauss_jacobi((1.0, 1.0), 6)
print("nodes  ", np.round(rule.nodes, 6))
print("weights", np.round(rule.weights, 6))
print("sum of weights", rule.weights.sum(), "vs", weight_mass((1.0, 1.0)))

# x^10 against (1-x^2): exact value 2/11 - 2/13
print("int x^10 (1-x^2) dx =", rule.integrate(lambda x: x**10), "exact", 2 / 11 - 2 / 13)

# the rule's nodes are the zeros of P_6^{(1,1)}
print("P_6 at the nodes:", np.abs(jacobi_eval((1, 1), 6, rule.nodes)).max())

print("gamma(0.5)^2 =", gamma(0.5) ** 2, "(pi)")
x = np.array([0.5, 1.0, 2.0, 5.0])
print("C(x) =", fresnel_c(x))
print("S(x) =", fresnel_s(x))
