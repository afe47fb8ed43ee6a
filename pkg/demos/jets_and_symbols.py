"""
Multiderivations as cochains on the jet algebroid
=================================================

A k-multiderivation of A is a cochain on the first jet algebroid JA with
values in A.  The Chevalley-Eilenberg differential of JA acting on A through
pi(u, theta)(w) = [u, w] - theta(a(w)) is conjugate to the deformation
coboundary.
"""

import random

from algebroids import SO3, CochainSpace, Slice, bracket, delta, jet_bracket, lie_poisson, pi_rep, prolong
from algebroids import d_jet_via_direct, md_evaluate, random_cochain, symbol_identity_jet, symbol_identity_residual
from algebroids import to_jet_cochain, to_multiderivation

A = lie_poisson(3, SO3, "lie_poisson(so3)")
x1, x2, x3 = (A.x(m) for m in range(3))

# the anchor of the cotangent algebroid of the Lie-Poisson bivector
print("a(dx1) =", [str(p) for p in A.a(0)])

# prolongation is a bracket morphism
e1, e2 = A.unit(0), A.unit(1)
u = tuple(x1 * p for p in e1)
print("j[u, e2] == [ju, je2]:", prolong(A, bracket(A, u, e2)) == jet_bracket(A, prolong(A, u), prolong(A, e2)))
print("pi(j e1)(e2) =", [str(p) for p in md_evaluate(A, pi_rep(A, prolong(A, e1)), e2)])

# the conjugation, checked through the direct Chevalley-Eilenberg formula on JA
sp = CochainSpace(A, 1, Slice(1))
agree = sum(d_jet_via_direct(A, to_jet_cochain(sp.element(b))) == delta(A, sp.element(b)) for b in sp.basis)
print(f"conjugation holds on {agree} of {sp.dim} slice basis 1-cochains")

# both symbol identities on random cochains
rng = random.Random(0)
D = random_cochain(A, 2, 2, rng)
print("symbol identity residuals:", symbol_identity_residual(A, D), symbol_identity_jet(A, to_jet_cochain(D)))
print("round trip:", to_multiderivation(A, to_jet_cochain(D)) == D)
