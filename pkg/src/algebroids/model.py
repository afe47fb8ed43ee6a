"""Lie algebroids on trivialized bundles over R^n with polynomial structure data.

Frame ``e_0..e_{r-1}``, coordinates ``x_1..x_n``.  The bracket is

    [e_i, e_j] = sum_k c[k][i][j] e_k,      a(e_i) = sum_mu a[mu][i] d_mu

and is extended to arbitrary polynomial sections by the Leibniz rule.  The
coefficient ring may carry extra trailing parameters (``t``); derivatives only
ever act on the first ``n`` variables.

Sections and vector fields are plain tuples of :class:`Poly`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import AxiomError, DimensionMismatchError
from .multivector import Multivector, lie_poisson_bivector, sharp
from .poly import Poly, Ring

Section = tuple[Poly, ...]
VectorField = tuple[Poly, ...]


# -- tuple-of-poly helpers -------------------------------------------------

def vadd(u: Sequence[Poly], v: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[Poly], v: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(-a for a in u)


def vscale(f, u: Sequence[Poly]) -> tuple[Poly, ...]:
    """Multiply every component by a polynomial or a rational."""
    return tuple(a * f for a in u)


def vzero(ring: Ring, length: int) -> tuple[Poly, ...]:
    z = ring.zero()
    return (z,) * length


def is_zero_vec(u: Sequence[Poly]) -> bool:
    return all(a.is_zero() for a in u)


def apply_vf(v: Sequence[Poly], f: Poly) -> Poly:
    """v(f) = sum_mu v^mu d_mu f."""
    total = f.ring.zero()
    for mu, vm in enumerate(v):
        if vm.terms:
            d = f.partial(mu)
            if d.terms:
                total = total + vm * d
    return total


def vf_bracket(v: Sequence[Poly], w: Sequence[Poly]) -> VectorField:
    return tuple(apply_vf(v, w[nu]) - apply_vf(w, v[nu]) for nu in range(len(v)))


# -- the algebroid ---------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebroid:
    """Rank-``rank`` trivialized bundle over R^``base_dim``.

    ``structure[k][i][j]`` is c^k_ij and ``anchor[mu][i]`` is a^mu_i.
    """

    base_dim: int
    rank: int
    structure: tuple[tuple[tuple[Poly, ...], ...], ...]
    anchor: tuple[tuple[Poly, ...], ...]
    name: str = ""
    ring: Ring = None  # type: ignore[assignment]
    _bracket_frame: dict = field(default=None, repr=False, compare=False)  # type: ignore[assignment]
    _anchor_frame: tuple = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        n, r = self.base_dim, self.rank
        if n < 0 or r < 1:
            raise DimensionMismatchError(f"need base_dim >= 0 and rank >= 1, got {n}, {r}")
        ring = self.ring if self.ring is not None else Ring.base(n)
        if ring.nvars < n or ring.names[:n] != Ring.base(n).names:
            raise DimensionMismatchError(f"ring {ring.names} does not start with the {n} base coordinates")
        object.__setattr__(self, "ring", ring)
        st = tuple(tuple(tuple(row) for row in mat) for mat in self.structure)
        an = tuple(tuple(row) for row in self.anchor)
        if len(st) != r or any(len(m) != r or any(len(row) != r for row in m) for m in st):
            raise DimensionMismatchError(f"structure must be {r}x{r}x{r}")
        if len(an) != n or any(len(row) != r for row in an):
            raise DimensionMismatchError(f"anchor must be {n}x{r}")
        for p in _flatten(st) + _flatten(an):
            if not isinstance(p, Poly) or p.ring != ring:
                raise DimensionMismatchError("structure data must be polynomials over the algebroid ring")
        object.__setattr__(self, "structure", st)
        object.__setattr__(self, "anchor", an)
        object.__setattr__(self, "_bracket_frame",
                           {(i, j): tuple(st[k][i][j] for k in range(r)) for i in range(r) for j in range(r)})
        object.__setattr__(self, "_anchor_frame", tuple(tuple(an[mu][i] for mu in range(n)) for i in range(r)))

    # frame data
    def c(self, i: int, j: int) -> Section:
        """[e_i, e_j] as a section."""
        return self._bracket_frame[(i, j)]

    def a(self, i: int) -> VectorField:
        """a(e_i) as a vector field."""
        return self._anchor_frame[i]

    def zero_section(self) -> Section:
        return vzero(self.ring, self.rank)

    def zero_field(self) -> VectorField:
        return vzero(self.ring, self.base_dim)

    def unit(self, i: int) -> Section:
        z, one = self.ring.zero(), self.ring.one()
        return tuple(one if k == i else z for k in range(self.rank))

    def section(self, comps: Sequence) -> Section:
        """Coerce rationals/polys to a section over this ring."""
        if len(comps) != self.rank:
            raise DimensionMismatchError(f"section needs {self.rank} components")
        return tuple(self._coerce(x) for x in comps)

    def _coerce(self, x) -> Poly:
        if isinstance(x, Poly):
            return x.extend(self.ring) if x.ring != self.ring else x
        return self.ring.const(Fraction(x))

    def x(self, mu: int) -> Poly:
        return self.ring.var(mu)

    @property
    def is_abelian(self) -> bool:
        return all(p.is_zero() for p in _flatten(self.structure)) and all(p.is_zero() for p in _flatten(self.anchor))

    def extend_ring(self, ring: Ring) -> "LieAlgebroid":
        """Same structure, coefficients embedded in a larger ring (e.g. with t)."""
        if ring == self.ring:
            return self
        st = tuple(tuple(tuple(p.extend(ring) for p in row) for row in m) for m in self.structure)
        an = tuple(tuple(p.extend(ring) for p in row) for row in self.anchor)
        return LieAlgebroid(self.base_dim, self.rank, st, an, self.name, ring)


def _flatten(x) -> list:
    if isinstance(x, Poly):
        return [x]
    out = []
    for y in x:
        out.extend(_flatten(y))
    return out


def from_arrays(base_dim: int, rank: int, structure, anchor, name: str = "", ring: Ring | None = None,
                check: bool = False) -> LieAlgebroid:
    """Build from nested arrays of polys or rationals; ``check`` validates."""
    ring = ring if ring is not None else Ring.base(base_dim)

    def co(x):
        return x if isinstance(x, Poly) else ring.const(Fraction(x))

    st = tuple(tuple(tuple(co(x) for x in row) for row in m) for m in structure)
    an = tuple(tuple(co(x) for x in row) for row in anchor)
    A = LieAlgebroid(base_dim, rank, st, an, name, ring)
    if check:
        report = validate(A)
        if not report.ok:
            raise AxiomError(report)
    return A


def from_bracket_table(base_dim: int, rank: int, table: Mapping[tuple[int, int], Mapping[int, object]],
                       anchor: Mapping[int, Mapping[int, object]] | None = None, name: str = "",
                       ring: Ring | None = None, check: bool = True) -> LieAlgebroid:
    """``table[(i, j)] = {k: c^k_ij}`` for i < j (skew completion implied);
    ``anchor[i] = {mu: a^mu_i}``."""
    ring = ring if ring is not None else Ring.base(base_dim)
    z = ring.zero()
    st = [[[z] * rank for _ in range(rank)] for _ in range(rank)]
    for (i, j), out in table.items():
        if not i < j:
            raise DimensionMismatchError(f"bracket table entries need i < j, got ({i}, {j})")
        for k, v in out.items():
            p = v if isinstance(v, Poly) else ring.const(Fraction(v))
            st[k][i][j] = st[k][i][j] + p
            st[k][j][i] = st[k][j][i] - p
    an = [[z] * rank for _ in range(base_dim)]
    for i, out in (anchor or {}).items():
        for mu, v in out.items():
            an[mu][i] = v if isinstance(v, Poly) else ring.const(Fraction(v))
    return from_arrays(base_dim, rank, st, an, name, ring, check=check)


# -- operations ------------------------------------------------------------

def anchor_apply(A: LieAlgebroid, X: Sequence[Poly]) -> VectorField:
    out = list(A.zero_field())
    for i, xi in enumerate(X):
        if xi.terms:
            for mu, am in enumerate(A.a(i)):
                if am.terms:
                    out[mu] = out[mu] + xi * am
    return tuple(out)


def bracket(A: LieAlgebroid, X: Sequence[Poly], Y: Sequence[Poly]) -> Section:
    """[X,Y]^k = sum X^i Y^j c^k_ij + a(X)(Y^k) - a(Y)(X^k)."""
    if len(X) != A.rank or len(Y) != A.rank:
        raise DimensionMismatchError("section length does not match the rank")
    r = A.rank
    out = list(A.zero_section())
    for i in range(r):
        xi = X[i]
        if not xi.terms:
            continue
        for j in range(r):
            yj = Y[j]
            if not yj.terms:
                continue
            cij = A.c(i, j)
            w = None
            for k in range(r):
                if cij[k].terms:
                    if w is None:
                        w = xi * yj
                    out[k] = out[k] + w * cij[k]
    if A.base_dim:
        aX = anchor_apply(A, X)
        aY = anchor_apply(A, Y)
        for k in range(r):
            out[k] = out[k] + apply_vf(aX, Y[k]) - apply_vf(aY, X[k])
    return tuple(out)


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    indices: tuple[int, ...]
    component: str
    residual: Poly

    def to_dict(self) -> dict:
        from .poly import poly_to_wire

        return {"indices": list(self.indices), "component": self.component,
                "residual": poly_to_wire(self.residual), "residual_text": str(self.residual)}


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    witnesses: tuple[Witness, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        out = {"axiom": self.axiom, "passed": self.passed, "witnesses": [w.to_dict() for w in self.witnesses]}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)

    def summary(self) -> str:
        parts = []
        for c in self.checks:
            if c.passed:
                parts.append(f"{c.axiom}: pass")
            elif not c.witnesses:
                parts.append(f"{c.axiom}: FAIL ({c.note})")
            else:
                w = c.witnesses[0]
                parts.append(f"{c.axiom}: FAIL at {w.indices} ({w.component}: {w.residual})")
        return "; ".join(parts)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def jacobiator_frame(A: LieAlgebroid, i: int, j: int, k: int) -> Section:
    """[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    ei, ej, ek = A.unit(i), A.unit(j), A.unit(k)
    return vadd(vadd(bracket(A, A.c(i, j), ek), bracket(A, A.c(j, k), ei)), bracket(A, A.c(k, i), ej))


def anchor_defect_frame(A: LieAlgebroid, i: int, j: int) -> VectorField:
    """a([e_i,e_j]) - [a(e_i), a(e_j)]."""
    return vsub(anchor_apply(A, A.c(i, j)), vf_bracket(A.a(i), A.a(j)))


def validate(A: LieAlgebroid) -> ValidationReport:
    """Check skewness, Jacobi on frame triples, and the anchor-morphism identity.

    Jacobi is evaluated through the Leibniz-extended bracket, so the anchor
    derivative terms carry the signs of that expansion.
    """
    r, n = A.rank, A.base_dim
    skew = []
    for i in range(r):
        for j in range(i, r):
            for k in range(r):
                res = A.structure[k][i][j] + A.structure[k][j][i]
                if not res.is_zero():
                    skew.append(Witness((i, j, k), f"c^{k}_({i},{j}) + c^{k}_({j},{i})", res))
    jac = []
    if not skew:
        for i, j, k in combinations(range(r), 3):
            for ell, res in enumerate(jacobiator_frame(A, i, j, k)):
                if not res.is_zero():
                    jac.append(Witness((i, j, k), f"e_{ell}", res))
    anc = []
    if n:
        for i, j in combinations(range(r), 2):
            for mu, res in enumerate(anchor_defect_frame(A, i, j)):
                if not res.is_zero():
                    anc.append(Witness((i, j), f"d_{mu}", res))
    return ValidationReport((
        AxiomCheck("skewness", not skew, tuple(skew)),
        AxiomCheck("jacobi", not skew and not jac, tuple(jac), "not checked: skewness fails" if skew else ""),
        AxiomCheck("anchor_morphism", not anc, tuple(anc)),
    ))


# -- constructors ----------------------------------------------------------

SL2 = {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}
SO3 = {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}
HEISENBERG = {(0, 1): {2: 1}}


def lie_algebra(rank: int, constants: Mapping[tuple[int, int], Mapping[int, object]], name: str = "") -> LieAlgebroid:
    """Lie algebra as an algebroid over a point; validated."""
    return from_bracket_table(0, rank, constants, name=name or f"lie_algebra({rank})", check=True)


def abelian(rank: int, base_dim: int = 0) -> LieAlgebroid:
    return from_bracket_table(base_dim, rank, {}, name=f"abelian({rank})", check=True)


def tangent_algebroid(n: int) -> LieAlgebroid:
    ring = Ring.base(n)
    z, one = ring.zero(), ring.one()
    st = tuple(tuple((z,) * n for _ in range(n)) for _ in range(n))
    an = tuple(tuple(one if mu == i else z for i in range(n)) for mu in range(n))
    return LieAlgebroid(n, n, st, an, f"tangent({n})", ring)


def cotangent_algebroid(pi: Multivector, name: str = "") -> LieAlgebroid:
    """T*R^n with the Koszul bracket of ``pi``: [dx^i, dx^j] = d(pi^ij), anchor pi^#.

    Not validated: the result is a Lie algebroid exactly when pi is Poisson.
    """
    if pi.degree != 2:
        raise DimensionMismatchError("cotangent_algebroid needs a bivector")
    n, ring = pi.n, pi.ring
    st = tuple(tuple(tuple(pi.get((i, j)).partial(k) for j in range(n)) for i in range(n)) for k in range(n))
    sharps = [sharp(pi, i) for i in range(n)]
    an = tuple(tuple(sharps[i][mu] for i in range(n)) for mu in range(n))
    return LieAlgebroid(n, n, st, an, name or "cotangent", ring)


def lie_poisson(rank: int, constants: Mapping[tuple[int, int], Mapping[int, object]], name: str = "") -> LieAlgebroid:
    """Cotangent algebroid of the Lie-Poisson structure on g*; validated."""
    A = cotangent_algebroid(lie_poisson_bivector(rank, constants), name or "lie_poisson")
    report = validate(A)
    if not report.ok:
        raise AxiomError(report)
    return A


def direct_sum_with_center(g: LieAlgebroid, extra_rank: int, name: str = "") -> LieAlgebroid:
    """g + R^extra_rank with the new frame elements central."""
    if g.base_dim:
        raise DimensionMismatchError("direct_sum_with_center expects a Lie algebra (base_dim 0)")
    r = g.rank + extra_rank
    table = {}
    for i, j in combinations(range(g.rank), 2):
        out = {k: p for k, p in enumerate(g.c(i, j)) if not p.is_zero()}
        if out:
            table[(i, j)] = out
    return from_bracket_table(0, r, table, name=name or f"{g.name}+center({extra_rank})", check=True)
