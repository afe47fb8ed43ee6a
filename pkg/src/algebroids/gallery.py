"""Named example algebroids, each with executable expected properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Callable, Iterable, Iterator

from .deformation import (
    CochainSpace, MultiDerivation, Slice, cocycle_basis, cocycle_check, coboundary_check, cohomology_dims,
    delta, jacobiator, nijenhuis_cochain, nijenhuis_torsion, symbol_identity_residual, triviality_check,
)
from .jet import d_jet_via_direct, h0, h1, to_jet_cochain
from .model import (
    HEISENBERG, SL2, SO3, LieAlgebroid, abelian, anchor_apply, cotangent_algebroid, direct_sum_with_center,
    lie_algebra, lie_poisson, tangent_algebroid, validate,
)
from .multivector import Multivector, lie_poisson_bivector, schouten
from .poly import Ring

PROVENANCE = ("PAPER", "TRIVIAL", "DERIVED")


@dataclass(frozen=True)
class Expectation:
    name: str
    expected: object
    provenance: str
    check: Callable[[LieAlgebroid], tuple[bool, object]] = field(compare=False, repr=False)

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    build: Callable[[], LieAlgebroid] = field(repr=False)
    expectations: tuple[Expectation, ...]
    description: str = ""


@dataclass(frozen=True)
class ExpectationResult:
    name: str
    provenance: str
    expected: object
    passed: bool
    observed: object

    def to_dict(self) -> dict:
        return {"name": self.name, "provenance": self.provenance, "expected": self.expected,
                "passed": self.passed, "observed": self.observed}


@dataclass(frozen=True)
class GalleryReport:
    example: str
    results: tuple[ExpectationResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"example": self.example, "ok": self.ok, "results": [r.to_dict() for r in self.results]}


# -- reusable checks -------------------------------------------------------

def _validates(A: LieAlgebroid) -> tuple[bool, object]:
    rep = validate(A)
    return rep.ok, rep.to_dict()


def _dims(k_max: int, expected: list[int], slc: Slice | None = None):
    def check(A):
        got = [d.dim_H for d in cohomology_dims(A, k_max, slc)]
        return got == expected, got
    return check


def _h0h1(exp_h0: int, exp: tuple[int, int, int], slc: Slice | None = None):
    def check(A):
        r0 = h0(A, slc)
        r1 = h1(A, slc)
        got = {"h0": r0.dim, "der": r1.dim_der, "inn": r1.dim_inn, "h1": r1.dim_h1, "lemma_ok": r1.lemma_ok}
        return (r0.dim, (r1.dim_der, r1.dim_inn, r1.dim_h1), r1.lemma_ok) == (exp_h0, exp, True), got
    return check


def _delta_squared(k_max: int, slc: Slice | None):
    def check(A):
        bad = []
        for k in range(k_max + 1):
            sp = CochainSpace(A, k, slc)
            for b in sp.basis:
                if not delta(A, delta(A, sp.element(b))).is_zero:
                    bad.append(str(b))
        return not bad, {"failures": bad[:5]}
    return check


def _rigid(slc: Slice):
    def check(A):
        missing = []
        basis = cocycle_basis(A, 2, slc)
        for Z in basis:
            if coboundary_check(A, Z, slc) is None:
                missing.append(str(Z))
        return not missing, {"closed_2_cochains": len(basis), "without_primitive": len(missing)}
    return check


def _symbol_identities(slc: Slice, k_max: int = 2):
    def check(A):
        bad = 0
        count = 0
        for k in range(k_max + 1):
            sp = CochainSpace(A, k, slc)
            for b in sp.basis:
                count += 1
                if symbol_identity_residual(A, sp.element(b)):
                    bad += 1
        return bad == 0, {"checked": count, "failures": bad}
    return check


def _conjugation(slc: Slice | None, k_max: int = 2):
    def check(A):
        bad = 0
        count = 0
        for k in range(k_max + 1):
            sp = CochainSpace(A, k, slc)
            for b in sp.basis:
                D = sp.element(b)
                count += 1
                if d_jet_via_direct(A, to_jet_cochain(D)) != delta(A, D):
                    bad += 1
        return bad == 0, {"checked": count, "failures": bad}
    return check


def _bracket_jacobiator_zero(A):
    J = jacobiator(A, MultiDerivation.bracket_cochain(A))
    return J.is_zero, {"nonzero_triples": len(J.triples), "nonzero_anchor": len(J.anchor)}


# -- h4 = so(3) + center ---------------------------------------------------

def omega_d(A: LieAlgebroid, D) -> MultiDerivation:
    """Omega_D on g + R e (e the last frame element): Omega_D(X, e) = D(X), zero on g x g.

    ``D[k][i]`` is the k-th component of D(e_i) for the first rank-1 frame elements.
    """
    g = A.rank - 1
    z = A.ring.zero()
    coeffs = {}
    for i in range(g):
        coeffs[(i, g)] = tuple(A.ring.const(Fraction(D[k][i])) for k in range(g)) + (z,)
    return MultiDerivation(2, A.rank, A.base_dim, A.ring, coeffs)


def is_derivation_matrix(g: LieAlgebroid, D) -> bool:
    """D[X, Y] = [DX, Y] + [X, DY] on the frame of a Lie algebra."""
    r = g.rank

    def apply(v):
        return tuple(sum((Fraction(D[k][i]) * v[i].constant_value() for i in range(r)), Fraction(0))
                     for k in range(r))

    def br(x, y):
        return tuple(sum((x[i] * y[j] * g.structure[k][i][j].constant_value()
                          for i in range(r) for j in range(r)), Fraction(0)) for k in range(r))

    units = [tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]
    for i, j in combinations(range(r), 2):
        ei, ej = units[i], units[j]
        lhs = apply(g.c(i, j))
        rhs = tuple(a + b for a, b in zip(br(apply(g.unit(i)), ej), br(ei, apply(g.unit(j)))))
        if lhs != rhs:
            return False
    return True


def omega_grid(values=(-1, 0, 1), rank: int = 3) -> Iterator[tuple[tuple[int, ...], ...]]:
    for flat in product(values, repeat=rank * rank):
        yield tuple(tuple(flat[k * rank:(k + 1) * rank]) for k in range(rank))


def _omega_sweep(A: LieAlgebroid, grid: Iterable | None = None) -> tuple[bool, object]:
    g = lie_algebra(3, SO3, "so3")
    mismatches, closed = 0, 0
    total = 0
    for D in (grid if grid is not None else omega_grid()):
        total += 1
        c = cocycle_check(A, omega_d(A, D))
        closed += c
        if c != is_derivation_matrix(g, D):
            mismatches += 1
    return mismatches == 0, {"grid_points": total, "closed": closed, "mismatches": mismatches}


# -- quadratic Poisson candidates ------------------------------------------

def quadratic_candidate(M) -> Multivector:
    """pi_2 = i_W (d1^d2^d3) with W_k = sum_l M[k][l] x_l^2, i.e.
    pi^12 = W_3, pi^23 = W_1, pi^13 = -W_2."""
    ring = Ring.base(3)
    W = [sum((ring.var(l, 2) * M[k][l] for l in range(3)), ring.zero()) for k in range(3)]
    return Multivector.bivector(ring, 3, {(0, 1): W[2], (1, 2): W[0], (0, 2): -W[1]})


def quadratic_candidates(values=(-1, 0, 1), prune_sign: bool = True) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All 3x3 coefficient matrices; with ``prune_sign`` only one of M, -M
    (both tested conditions are invariant under pi_2 -> -pi_2)."""
    for flat in product(values, repeat=9):
        if prune_sign:
            first = next((v for v in flat if v), 0)
            if first < 0:
                continue
        yield tuple(tuple(flat[3 * k:3 * k + 3]) for k in range(3))


def bracket_cochain_of(pi2: Multivector, A: LieAlgebroid) -> MultiDerivation:
    """Omega_{pi_2}: the Koszul bracket of pi_2 as a 2-cochain on A = T*R^n."""
    B = cotangent_algebroid(pi2)
    if (B.rank, B.ring) != (A.rank, A.ring):
        raise ValueError("pi_2 must live on the base of A")
    return MultiDerivation.bracket_cochain(B)


@dataclass(frozen=True)
class QuadraticOutcome:
    M: tuple
    compatible: bool
    closed: bool
    poisson: bool
    bracket_valid: bool

    @property
    def consistent(self) -> bool:
        return self.compatible == self.closed and self.poisson == self.bracket_valid


def quadratic_outcome(A: LieAlgebroid, pi1: Multivector, M) -> QuadraticOutcome:
    pi2 = quadratic_candidate(M)
    omega = bracket_cochain_of(pi2, A)
    return QuadraticOutcome(
        M,
        compatible=schouten(pi1, pi2).is_zero(),
        closed=cocycle_check(A, omega),
        poisson=schouten(pi2, pi2).is_zero(),
        bracket_valid=jacobiator(A, omega).is_zero,
    )


def _quadratic_worker(M) -> QuadraticOutcome:
    return quadratic_outcome(lie_poisson(3, SO3, "lie_poisson(so3)"), lie_poisson_bivector(3, SO3), M)


def quadratic_sweep(candidates: Iterable | None = None, jobs: int = 1) -> list[QuadraticOutcome]:
    cands = list(candidates if candidates is not None else quadratic_candidates())
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_quadratic_worker, cands, chunksize=64))
    A = lie_poisson(3, SO3, "lie_poisson(so3)")
    pi1 = lie_poisson_bivector(3, SO3)
    return [quadratic_outcome(A, pi1, M) for M in cands]


def _quadratic_check(sample_stride: int = 97):
    """Gallery-scale check on a deterministic subsample; the full sweep is a separate run."""
    def check(A):
        cands = list(quadratic_candidates())[::sample_stride]
        outs = [quadratic_outcome(A, lie_poisson_bivector(3, SO3), M) for M in cands]
        bad = [o.M for o in outs if not o.consistent]
        return not bad, {"candidates": len(outs), "compatible": sum(o.compatible for o in outs),
                         "poisson": sum(o.poisson for o in outs), "inconsistent": [list(map(list, m)) for m in bad]}
    return check


# -- registry --------------------------------------------------------------

def _nijenhuis_scalar_checks(c: int = 2) -> tuple[Expectation, ...]:
    def cochain(A):
        N = [[c if i == j else 0 for j in range(A.rank)] for i in range(A.rank)]
        ok = nijenhuis_cochain(A, N) == MultiDerivation.bracket_cochain(A).scale(c)
        return ok, {}

    def torsion(A):
        N = [[c if i == j else 0 for j in range(A.rank)] for i in range(A.rank)]
        T = nijenhuis_torsion(A, N)
        return not T, {"nonzero_pairs": len(T)}

    def trivial(A):
        N = [[c if i == j else 0 for j in range(A.rank)] for i in range(A.rank)]
        rep = triviality_check(A, N)
        return rep.identity_holds, {"bracket_residuals": len(rep.bracket_residual),
                                    "anchor_residuals": len(rep.anchor_residual)}

    return (
        Expectation(f"nijenhuis_cochain(N={c}Id) = {c} * bracket", True, "TRIVIAL", cochain),
        Expectation("torsion vanishes", True, "TRIVIAL", torsion),
        Expectation("(Id+tN)[u,v]_t = [(Id+tN)u,(Id+tN)v]", True, "TRIVIAL", trivial),
    )


def _anchor_so3(A):
    got = anchor_apply(A, A.unit(0))
    x = [A.x(m) for m in range(3)]
    return tuple(got) == (A.ring.zero(), x[2], -x[1]), [str(p) for p in got]


def _abelian_entry(n: int) -> ExampleEntry:
    return ExampleEntry(
        f"abelian({n})", lambda: abelian(n),
        (
            Expectation("validate", True, "TRIVIAL", _validates),
            Expectation("dim H^k = n*C(n,k)", [n * comb(n, k) for k in range(n + 1)], "TRIVIAL",
                        _dims(n, [n * comb(n, k) for k in range(n + 1)])),
            Expectation("h0, Der, Inn, H^1", {"h0": n, "der": n * n, "inn": 0, "h1": n * n}, "TRIVIAL",
                        _h0h1(n, (n * n, 0, n * n))),
            Expectation("delta^2 = 0 on C^0..C^3", True, "TRIVIAL", _delta_squared(min(n, 3), None)),
        ),
        f"abelian Lie algebra of dimension {n}",
    )


_REGISTRY: dict[str, ExampleEntry] = {}


def _register(e: ExampleEntry) -> None:
    _REGISTRY[e.name] = e


_register(_abelian_entry(2))
_register(_abelian_entry(3))
_register(ExampleEntry(
    "sl2", lambda: lie_algebra(3, SL2, "sl2"),
    (
        Expectation("validate", True, "DERIVED", _validates),
        Expectation("dim H^0..H^3", [0, 0, 0, 0], "DERIVED", _dims(3, [0, 0, 0, 0])),
        Expectation("h0, Der, Inn, H^1", {"h0": 0, "der": 3, "inn": 3, "h1": 0}, "DERIVED", _h0h1(0, (3, 3, 0))),
        Expectation("jacobiator(bracket) = 0", True, "TRIVIAL", _bracket_jacobiator_zero),
        Expectation("delta^2 = 0 on C^0..C^3", True, "TRIVIAL", _delta_squared(3, None)),
        Expectation("d_jet conjugate to delta", True, "PAPER", _conjugation(None)),
    ),
    "sl(2) with [h,e]=2e, [h,f]=-2f, [e,f]=h",
))
_register(ExampleEntry(
    "heisenberg", lambda: lie_algebra(3, HEISENBERG, "heisenberg"),
    (
        Expectation("validate", True, "TRIVIAL", _validates),
        Expectation("dim H^0, H^1", [1, 4], "DERIVED", _dims(1, [1, 4])),
        Expectation("h0, Der, Inn, H^1", {"h0": 1, "der": 6, "inn": 2, "h1": 4}, "DERIVED", _h0h1(1, (6, 2, 4))),
        Expectation("delta^2 = 0 on C^0..C^3", True, "TRIVIAL", _delta_squared(3, None)),
    ),
    "Heisenberg algebra [e1,e2]=e3",
))
_register(ExampleEntry(
    "so3", lambda: lie_algebra(3, SO3, "so3"),
    (
        Expectation("validate", True, "DERIVED", _validates),
        Expectation("dim H^0..H^3", [0, 0, 0, 0], "DERIVED", _dims(3, [0, 0, 0, 0])),
        Expectation("h0, Der, Inn, H^1", {"h0": 0, "der": 3, "inn": 3, "h1": 0}, "DERIVED", _h0h1(0, (3, 3, 0))),
    ),
    "so(3) with [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2",
))
for _n in (1, 2):
    _register(ExampleEntry(
        f"tangent({_n})", (lambda n=_n: tangent_algebroid(n)),
        (
            Expectation("validate", True, "TRIVIAL", _validates),
            Expectation("slice rigidity: closed 2-cochains of degree <= 1 are exact", True, "PAPER",
                        _rigid(Slice(1))),
            Expectation("delta^2 = 0 on slice degree <= 2", True, "TRIVIAL", _delta_squared(3, Slice(2))),
            Expectation("d_jet conjugate to delta (slice <= 1)", True, "PAPER", _conjugation(Slice(1))),
        ),
        f"tangent algebroid of R^{_n}",
    ))
_register(ExampleEntry(
    "lie_poisson(so3)", lambda: lie_poisson(3, SO3, "lie_poisson(so3)"),
    (
        Expectation("validate", True, "DERIVED", _validates),
        Expectation("anchor(dx1) = (0, x3, -x2)", True, "DERIVED", _anchor_so3),
        Expectation("symbol identity on slice degree <= 1", True, "DERIVED", _symbol_identities(Slice(1))),
        Expectation("d_jet conjugate to delta (slice <= 1)", True, "PAPER", _conjugation(Slice(1))),
    ),
    "cotangent algebroid of the Lie-Poisson structure of so(3)",
))
_register(ExampleEntry(
    "h4_central", lambda: direct_sum_with_center(lie_algebra(3, SO3, "so3"), 1, "h4_central"),
    (
        Expectation("validate", True, "TRIVIAL", _validates),
        Expectation("Omega_D closed iff D in Der(so3), grid {-1,0,1}^9", True, "PAPER", _omega_sweep),
    ),
    "so(3) plus a one-dimensional center e; Omega_D(X, e) = D(X)",
))
_register(ExampleEntry(
    "nijenhuis_scalar", lambda: lie_algebra(3, SL2, "nijenhuis_scalar"),
    (Expectation("validate", True, "TRIVIAL", _validates),) + _nijenhuis_scalar_checks(2),
    "sl(2) with N = 2 Id",
))
_register(ExampleEntry(
    "quadratic_poisson_candidates", lambda: lie_poisson(3, SO3, "quadratic_poisson_candidates"),
    (
        Expectation("validate", True, "DERIVED", _validates),
        Expectation("closed iff [pi1,pi2]=0 and bracket iff [pi2,pi2]=0 (subsample)", True, "PAPER",
                    _quadratic_check()),
    ),
    "pi1 = Lie-Poisson so(3); candidates pi2 = i_W vol with W_k = sum M_kl x_l^2, M in {-1,0,1}^(3x3)",
))


def list_examples() -> list[str]:
    return list(_REGISTRY)


def get_entry(name: str) -> ExampleEntry:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(_REGISTRY)}") from None


def load_example(name: str) -> tuple[LieAlgebroid, tuple[Expectation, ...]]:
    e = get_entry(name)
    return e.build(), e.expectations


def run_expectations(name: str, algebroid: LieAlgebroid | None = None) -> GalleryReport:
    """Run every expectation of an entry, optionally against substitute data."""
    e = get_entry(name)
    A = algebroid if algebroid is not None else e.build()
    results = []
    for x in e.expectations:
        try:
            passed, observed = x.check(A)
        except Exception as exc:  # a broken algebroid can make later checks raise
            passed, observed = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append(ExpectationResult(x.name, x.provenance, x.expected, bool(passed), observed))
    return GalleryReport(name, tuple(results))
