"""
Deforming a bracket
===================

A 2-cochain D gives the family [ , ]_t = [ , ] + t D with anchor a + t sigma_D.
The t^1 part of the Jacobi residual is the cocycle condition and the t^2 part
is the jacobiator of D.
"""

from algebroids import SL2, MultiDerivation, abelian, deform, delta, is_lie_family, lie_algebra, mc_check
from algebroids import nijenhuis_torsion, tangent_algebroid, to_jet_cochain, triviality_check

sl2 = lie_algebra(3, SL2, "sl2")

# a coboundary deforms trivially to first order
D = delta(sl2, MultiDerivation.from_endomorphism(sl2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
rep = is_lie_family(deform(sl2, D))
print("delta(Id) on sl2 gives a Lie family:", rep.ok)

# an so(3) bracket on an abelian algebra solves Maurer-Cartan exactly
ab = abelian(3)
one, z = ab.ring.one(), ab.ring.zero()
so3 = MultiDerivation(2, 3, 0, ab.ring, {(0, 1): (z, z, one), (1, 2): (one, z, z), (0, 2): (z, -one, z)})
mc = mc_check(ab, to_jet_cochain(so3))
print("so(3) on R^3: cocycle", mc.cocycle_ok, "quadratic", mc.quadratic_ok)

# a skew product that is not Jacobi: only the quadratic residual survives
bad = MultiDerivation(2, 3, 0, ab.ring, {(0, 1): (one, z, z), (0, 2): (one, z, z), (1, 2): (z, one, z)})
rep = is_lie_family(deform(ab, bad))
print("t^1 vanishes:", rep.vanishes_at(1), " t^2 vanishes:", rep.vanishes_at(2))
for idx, v in rep.jacobi[2].items():
    print("  t^2 residual on", idx, "=", [str(p) for p in v])

# Nijenhuis operators give trivial deformations: (Id + tN) intertwines [ , ]_t and [ , ]
t2 = tangent_algebroid(2)
x1, x2 = t2.x(0), t2.x(1)
N = [[x1, t2.ring.zero()], [t2.ring.zero(), x2]]
print("diag(x1, x2) torsion:", nijenhuis_torsion(t2, N), " trivial:", triviality_check(t2, N).identity_holds)
print("ad_h on sl2 trivial:", triviality_check(sl2, [[0, 0, 0], [0, 2, 0], [0, 0, -2]]).identity_holds)
