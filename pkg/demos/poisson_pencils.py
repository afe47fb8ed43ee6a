"""
Quadratic Poisson structures compatible with so(3)
==================================================

For the cotangent algebroid of pi_1 = Lie-Poisson(so(3)) a bivector pi_2 gives
the 2-cochain Omega = Koszul bracket of pi_2.  delta Omega = 0 exactly when
[pi_1, pi_2] = 0, and Omega is itself a Lie bracket exactly when pi_2 is Poisson.
"""

from collections import Counter

from algebroids import SO3, cocycle_check, jacobiator, lie_poisson, lie_poisson_bivector, schouten
from algebroids.gallery import bracket_cochain_of, quadratic_candidate, quadratic_sweep

A = lie_poisson(3, SO3, "lie_poisson(so3)")
pi1 = lie_poisson_bivector(3, SO3)

# pi_2 = i_W vol with W = (x1^2, x2^2, x3^2): compatible and Poisson
M = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
pi2 = quadratic_candidate(M)
print("[pi1, pi2] = 0:", schouten(pi1, pi2).is_zero(), " [pi2, pi2] = 0:", schouten(pi2, pi2).is_zero())
omega = bracket_cochain_of(pi2, A)
print("Omega closed:", cocycle_check(A, omega), " Omega is a bracket:", jacobiator(A, omega).is_zero)

# the whole family (a few seconds per thousand candidates)
outs = quadratic_sweep()
print(Counter((o.compatible, o.poisson) for o in outs))
print("closedness matches compatibility everywhere:", all(o.consistent for o in outs))
