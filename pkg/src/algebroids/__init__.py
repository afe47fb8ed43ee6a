"""Exact computations with Lie algebroids given by polynomial structure data."""

from .deformation import (
    CochainSpace, MultiDerivation, Slice, VectorCochain, coboundary_check, cocycle_basis, cocycle_check,
    cohomology_dims, deform, delta, delta_on_symbol, family_cocycle, is_lie_family, jacobiator, md_evaluate,
    nijenhuis_cochain, nijenhuis_torsion, random_cochain, symbol_identity_residual, triviality_check,
)
from .errors import (
    AlgebroidError, ArityError, AxiomError, DimensionMismatchError, RingMismatchError, SliceNotClosedError,
    WireFormatError,
)
from .jet import (
    JetCochain, JetSection, d_jet, d_jet_direct, d_jet_via_direct, embed_hom, h0, h1, jet_bracket, jet_evaluate, lie_derivative, lift_symbol,
    mc_check, pairing, pi_rep, prolong, symbol_identity_jet, symbol_of, to_jet_cochain, to_multiderivation,
)
from .linalg import QMatrix, mat_rank_kernel, span_membership
from .model import (
    HEISENBERG, SL2, SO3, LieAlgebroid, abelian, anchor_apply, bracket, cotangent_algebroid, direct_sum_with_center, lie_algebra,
    lie_poisson, tangent_algebroid, validate,
)
from .multivector import Multivector, lie_poisson_bivector, schouten
from .poly import Poly, Ring, poly_add, poly_mul, poly_partial, poly_scale

__all__ = [name for name in dir() if not name.startswith("_")]
