"""
Deformation cohomology of small Lie algebras
============================================

Over a point a Lie algebroid is a Lie algebra and the deformation complex is
the Chevalley-Eilenberg complex with adjoint coefficients.
"""

from algebroids import HEISENBERG, SL2, abelian, cohomology_dims, h0, h1, lie_algebra

# sl(2) is semisimple: every cohomology group vanishes, so it is rigid
sl2 = lie_algebra(3, SL2, "sl2")
for d in cohomology_dims(sl2, 3):
    print(f"sl2   H^{d.k}: dim C = {d.dim_C}, dim Z = {d.dim_Z}, dim B = {d.dim_B}, dim H = {d.dim_H}")

# the Heisenberg algebra has a center and outer derivations
heis = lie_algebra(3, HEISENBERG, "heisenberg")
print("heisenberg H^0..H^3:", [d.dim_H for d in cohomology_dims(heis, 3)])

# H^0 is the center, H^1 is Der / Inn
r1 = h1(heis)
print("center:", [[str(p) for p in u] for u in h0(heis).basis])
print(f"Der = {r1.dim_der}, Inn = {r1.dim_inn}, H^1 = {r1.dim_h1}")

# with zero bracket the coboundary vanishes: dim H^k = n * C(n, k)
print("abelian(3):", [d.dim_H for d in cohomology_dims(abelian(3), 3)])
