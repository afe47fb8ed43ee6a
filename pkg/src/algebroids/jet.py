"""The jet Lie algebroid JA and its representation on A.

A jet section is kept as a pair (u, theta) meaning j1(u) + theta, with theta a
Hom(TM, A)-valued matrix ``theta[k][mu]`` (the term theta^k_mu dx^mu (x) e_k).
Function multiplication follows j1(f u) = df (x) u + f j1(u):

    f . (u, theta) = (f u, f theta - df (x) u).

Jet cochains are stored by their multiderivation body; mixed arguments are
evaluated by expanding each slot into its prolonged part and its theta part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from .deformation import (
    CochainSpace, Index, JacobiatorResult, MultiDerivation, Slice, VectorCochain, anchored, delta,
    delta_on_symbol, jacobiator, md_evaluate, multiderivation_from_evaluator, symbol_apply, symbol_cochain,
)
from .errors import ArityError, DimensionMismatchError, SliceNotClosedError
from .linalg import QMatrix, mat_rank, mat_rank_kernel
from .model import (
    LieAlgebroid, Section, VectorField, anchor_apply, apply_vf, bracket, is_zero_vec, vadd, vf_bracket,
    vneg, vscale, vsub,
)
from .poly import Poly

Theta = tuple[tuple[Poly, ...], ...]


@dataclass(frozen=True)
class JetSection:
    u: tuple[Poly, ...]
    theta: Theta

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "theta", tuple(tuple(row) for row in self.theta))
        n = {len(row) for row in self.theta}
        if len(self.theta) != len(self.u) or len(n) > 1:
            raise DimensionMismatchError("theta must be a rank x base_dim matrix")

    @property
    def rank(self) -> int:
        return len(self.u)

    @property
    def base_dim(self) -> int:
        return len(self.theta[0]) if self.theta else 0

    def p(self) -> Section:
        """First projection JA -> A."""
        return self.u

    @property
    def is_zero(self) -> bool:
        return is_zero_vec(self.u) and all(is_zero_vec(row) for row in self.theta)

    def __add__(self, other: "JetSection") -> "JetSection":
        return JetSection(vadd(self.u, other.u), tuple(vadd(a, b) for a, b in zip(self.theta, other.theta)))

    def __neg__(self) -> "JetSection":
        return JetSection(vneg(self.u), tuple(vneg(row) for row in self.theta))

    def __sub__(self, other: "JetSection") -> "JetSection":
        return self + (-other)

    def scale(self, c) -> "JetSection":
        """Multiplication by a constant (no derivative term)."""
        return JetSection(vscale(c, self.u), tuple(vscale(c, row) for row in self.theta))

    def times(self, f: Poly) -> "JetSection":
        """Module action of a function: (f u, f theta - df (x) u)."""
        theta = tuple(tuple(f * self.theta[k][mu] - f.partial(mu) * self.u[k] for mu in range(self.base_dim))
                      for k in range(self.rank))
        return JetSection(vscale(f, self.u), theta)


def zero_jet(A: LieAlgebroid) -> JetSection:
    z = A.ring.zero()
    return JetSection(A.zero_section(), tuple((z,) * A.base_dim for _ in range(A.rank)))


def prolong(A: LieAlgebroid, X: Sequence[Poly]) -> JetSection:
    return JetSection(tuple(X), zero_jet(A).theta)


def theta_jet(A: LieAlgebroid, theta) -> JetSection:
    """The pure Hom(TM, A) element with the given matrix."""
    return JetSection(A.zero_section(), tuple(tuple(A._coerce(p) for p in row) for row in theta))


def form_tensor(A: LieAlgebroid, omega: Sequence[Poly], v: Sequence[Poly]) -> JetSection:
    """omega (x) v for a 1-form omega and a section v."""
    return theta_jet(A, [[omega[mu] * v[k] for mu in range(A.base_dim)] for k in range(A.rank)])


def differential(A: LieAlgebroid, f: Poly) -> tuple[Poly, ...]:
    return tuple(f.partial(mu) for mu in range(A.base_dim))


def theta_apply(A: LieAlgebroid, theta: Theta, V: Sequence[Poly]) -> Section:
    """theta(V) as a section: sum_mu theta^k_mu V^mu."""
    out = []
    for row in theta:
        total = A.ring.zero()
        for t, v in zip(row, V):
            if t.terms and v.terms:
                total = total + t * v
        out.append(total)
    return tuple(out)


def _theta_sign(theta: Theta) -> bool:
    return any(not is_zero_vec(row) for row in theta)


# -- derivations and the representation ------------------------------------

def jd(D: MultiDerivation) -> VectorField:
    """Symbol of a derivation (degree-1 multiderivation)."""
    if D.k != 1:
        raise ArityError("jd is defined on derivations")
    return D.symbol_value(())


def pairing(A: LieAlgebroid, mu: JetSection, d: MultiDerivation) -> Section:
    """<(u, theta), d> = d u + theta(jd d)."""
    return vadd(md_evaluate(A, d, mu.u), theta_apply(A, mu.theta, jd(d)))


def pi_rep(A: LieAlgebroid, mu: JetSection) -> MultiDerivation:
    """pi(u, theta)(w) = [u, w] - theta(a(w)), with symbol a(u)."""
    frames = {}
    for i in range(A.rank):
        frames[(i,)] = vsub(bracket(A, mu.u, A.unit(i)), theta_apply(A, mu.theta, A.a(i)))
    sym = {(): anchor_apply(A, mu.u)} if A.base_dim else {}
    return MultiDerivation(1, A.rank, A.base_dim, A.ring, frames, sym)


def anchor_of_jet(A: LieAlgebroid, mu: JetSection) -> VectorField:
    return jd(pi_rep(A, mu))


def lie_derivative_form(X: Sequence[Poly], omega: Sequence[Poly]) -> tuple[Poly, ...]:
    """(L_X omega)_nu = X(omega_nu) + sum_mu omega_mu d_nu X^mu."""
    n = len(X)
    out = []
    for nu in range(n):
        total = apply_vf(X, omega[nu])
        for mu in range(n):
            if omega[mu].terms:
                total = total + omega[mu] * X[mu].partial(nu)
        out.append(total)
    return tuple(out)


def _bracket_j_theta(A: LieAlgebroid, u: Sequence[Poly], theta: Theta) -> JetSection:
    """[j1 u, sum_k omega_k (x) e_k] = sum_k L_{a(u)} omega_k (x) e_k + omega_k (x) [u, e_k]."""
    au = anchor_apply(A, u)
    r, n = A.rank, A.base_dim
    out = [[A.ring.zero()] * n for _ in range(r)]
    for k in range(r):
        omega = theta[k]
        if is_zero_vec(omega):
            continue
        L = lie_derivative_form(au, omega)
        for nu in range(n):
            out[k][nu] = out[k][nu] + L[nu]
        w = bracket(A, u, A.unit(k))
        for m in range(r):
            if w[m].terms:
                for nu in range(n):
                    if omega[nu].terms:
                        out[m][nu] = out[m][nu] + omega[nu] * w[m]
    return theta_jet(A, out)


def _bracket_theta_theta(A: LieAlgebroid, theta: Theta, eta: Theta) -> JetSection:
    """[omega (x) u, zeta (x) v] = <a(u), zeta> omega (x) v - <a(v), omega> zeta (x) u on frames."""
    r, n = A.rank, A.base_dim
    out = [[A.ring.zero()] * n for _ in range(r)]
    for k in range(r):
        omega = theta[k]
        if is_zero_vec(omega):
            continue
        for l in range(r):
            zeta = eta[l]
            if is_zero_vec(zeta):
                continue
            c1 = _contract(A, A.a(k), zeta)
            c2 = _contract(A, A.a(l), omega)
            for nu in range(n):
                out[l][nu] = out[l][nu] + c1 * omega[nu]
                out[k][nu] = out[k][nu] - c2 * zeta[nu]
    return theta_jet(A, out)


def _contract(A: LieAlgebroid, V: Sequence[Poly], omega: Sequence[Poly]) -> Poly:
    total = A.ring.zero()
    for v, w in zip(V, omega):
        if v.terms and w.terms:
            total = total + v * w
    return total


def jet_bracket(A: LieAlgebroid, mu: JetSection, nu: JetSection) -> JetSection:
    """Bracket of JA through the generator formulas on the pair splitting."""
    out = prolong(A, bracket(A, mu.u, nu.u))
    if A.base_dim:
        out = out + _bracket_j_theta(A, mu.u, nu.theta) - _bracket_j_theta(A, nu.u, mu.theta)
        out = out + _bracket_theta_theta(A, mu.theta, nu.theta)
    return out


def lie_derivative(A: LieAlgebroid, d: MultiDerivation, mu: JetSection) -> JetSection:
    """L_d(j1 u + theta) = j1(d u) + L_d theta, with
    L_d(f dx^m (x) e_k) = f dx^m (x) d e_k + f d(s^m) (x) e_k + s(f) dx^m (x) e_k."""
    s = jd(d)
    r, n = A.rank, A.base_dim
    out = [[A.ring.zero()] * n for _ in range(r)]
    for k in range(r):
        dek = md_evaluate(A, d, A.unit(k))
        for m in range(n):
            f = mu.theta[k][m]
            if not f.terms:
                continue
            for j in range(r):
                if dek[j].terms:
                    out[j][m] = out[j][m] + f * dek[j]
            for nu in range(n):
                ds = s[m].partial(nu)
                if ds.terms:
                    out[k][nu] = out[k][nu] + f * ds
            out[k][m] = out[k][m] + apply_vf(s, f)
    return prolong(A, md_evaluate(A, d, mu.u)) + theta_jet(A, out)


def md_commutator(A: LieAlgebroid, d1: MultiDerivation, d2: MultiDerivation) -> MultiDerivation:
    """[d1, d2] = d1 d2 - d2 d1 for derivations."""
    if d1.k != 1 or d2.k != 1:
        raise ArityError("commutator is taken between derivations")
    return multiderivation_from_evaluator(
        A, 1, lambda u: vsub(md_evaluate(A, d1, md_evaluate(A, d2, u)), md_evaluate(A, d2, md_evaluate(A, d1, u))))


# -- jet cochains ----------------------------------------------------------

@dataclass(frozen=True)
class JetCochain:
    """Element of Hom(wedge^k JA, A)_{DA}, stored by its multiderivation body."""

    body: MultiDerivation

    @property
    def k(self) -> int:
        return self.body.k

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero


def to_jet_cochain(D: MultiDerivation) -> JetCochain:
    return JetCochain(D)


def jet_evaluate(A: LieAlgebroid, d: JetCochain, *mus: JetSection) -> Section:
    """d(mu_1..mu_k): the body on the projections plus the single-theta slot
    terms (-1)^(k-s) theta_s(sigma(u_1..^s..u_k)); two theta slots give 0."""
    D = d.body
    k = D.k
    if len(mus) != k:
        raise ArityError(f"{k}-cochain evaluated on {len(mus)} jet sections")
    us = [m.u for m in mus]
    out = md_evaluate(A, D, *us)
    if k >= 1 and A.base_dim and D.symbol:
        for s in range(k):
            if not _theta_sign(mus[s].theta):
                continue
            sig = symbol_apply(D, us[:s] + us[s + 1:])
            term = theta_apply(A, mus[s].theta, sig)
            out = vsub(out, term) if (k - 1 - s) % 2 else vadd(out, term)
    return out


def read_jet_cochain(A: LieAlgebroid, k: int, fn: Callable[..., Section]) -> MultiDerivation:
    """Body of a jet cochain given as an evaluator on jet sections.

    Frame values from prolonged frames; the symbol from the slot rule
    d(j1 e_J, dx^mu (x) e_0) = sigma(e_J)(x_mu) e_0.
    """
    r, n = A.rank, A.base_dim
    pro = [prolong(A, A.unit(i)) for i in range(r)]
    coeffs = {idx: fn(*[pro[i] for i in idx]) for idx in combinations(range(r), k)}
    symbol = {}
    if k >= 1 and n:
        for idx in combinations(range(r), k - 1):
            comps = []
            for mu in range(n):
                dx = tuple(A.ring.one() if m == mu else A.ring.zero() for m in range(n))
                val = fn(*[pro[i] for i in idx], form_tensor(A, dx, A.unit(0)))
                comps.append(val[0])
            symbol[idx] = tuple(comps)
    return MultiDerivation(k, r, n, A.ring, coeffs, symbol)


def to_multiderivation(A: LieAlgebroid, d: JetCochain) -> MultiDerivation:
    """D_d(u_1..u_k) = d(j1 u_1, .., j1 u_k), read off by jet evaluation."""
    return read_jet_cochain(A, d.k, lambda *mus: jet_evaluate(A, d, *mus))


def d_jet(A: LieAlgebroid, d: JetCochain) -> JetCochain:
    """Coboundary of the jet complex, transported through the body."""
    return JetCochain(delta(A, d.body))


def d_jet_direct(A: LieAlgebroid, d: JetCochain, *mus: JetSection) -> Section:
    """sum (-1)^i pi(mu_i) d(..^i..) + sum_{i<j} (-1)^(i+j) d([mu_i, mu_j], ..), on jet sections."""
    k = d.k
    if len(mus) != k + 1:
        raise ArityError(f"coboundary of a {k}-cochain takes {k + 1} jet sections")
    total = A.zero_section()
    for i in range(k + 1):
        rest = mus[:i] + mus[i + 1:]
        term = md_evaluate(A, pi_rep(A, mus[i]), jet_evaluate(A, d, *rest))
        total = vsub(total, term) if i % 2 else vadd(total, term)
    for i, j in combinations(range(k + 1), 2):
        rest = [m for s, m in enumerate(mus) if s != i and s != j]
        term = jet_evaluate(A, d, jet_bracket(A, mus[i], mus[j]), *rest)
        total = vsub(total, term) if (i + j) % 2 else vadd(total, term)
    return total


def d_jet_via_direct(A: LieAlgebroid, d: JetCochain) -> MultiDerivation:
    """Body of d_J d computed from the direct formula."""
    return read_jet_cochain(A, d.k + 1, lambda *mus: d_jet_direct(A, d, *mus))


def embed_hom(A: LieAlgebroid, phi: Mapping[Index, Sequence[Poly]], k: int) -> JetCochain:
    """Bundle map Phi in Hom(wedge^k A, A), acting through the projection p."""
    return JetCochain(MultiDerivation(k, A.rank, A.base_dim, A.ring, phi, {}))


def symbol_of(d: JetCochain) -> VectorCochain:
    return symbol_cochain(d.body)


def lift_symbol(A: LieAlgebroid, lam: VectorCochain) -> JetCochain:
    """A jet cochain with symbol lam and zero values on prolonged frames."""
    if lam.symbol is not None:
        raise DimensionMismatchError("the lifted symbol must be tensorial")
    return JetCochain(MultiDerivation(lam.k + 1, A.rank, A.base_dim, A.ring, {}, lam.frames))


def symbol_identity_jet(A: LieAlgebroid, d: JetCochain) -> dict[Index, VectorField]:
    """jd(d_J d) - [delta(jd d) + (-1)^(k+1) a o d o j1] on frames; {} when the identity holds.

    The left side is read from the direct formula, the right side from the
    Hom(wedge A, TM) coboundary.
    """
    k = d.k
    lhs = d_jet_via_direct(A, d).symbol
    sign = -1 if (k + 1) % 2 else 1
    aD = anchored(A, d.body).frames
    rhs = {i: vscale(sign, v) for i, v in aD.items()}
    if k >= 1:
        for i, v in delta_on_symbol(A, symbol_of(d)).frames.items():
            rhs[i] = vadd(rhs[i], v) if i in rhs else v
    out = {}
    zero = A.zero_field()
    for idx in set(lhs) | set(rhs):
        res = vsub(lhs.get(idx, zero), rhs.get(idx, zero))
        if not is_zero_vec(res):
            out[idx] = res
    return out


def restriction_vanishes(A: LieAlgebroid, d: JetCochain) -> bool:
    """Whether d vanishes on prolonged sections j1(e_i) and j1(x_mu e_i)."""
    r, n = A.rank, A.base_dim
    gens = [prolong(A, A.unit(i)) for i in range(r)]
    gens += [prolong(A, vscale(A.x(mu), A.unit(i))) for mu in range(n) for i in range(r)]
    k = d.k
    if k == 0:
        return is_zero_vec(jet_evaluate(A, d))
    for tup in combinations(range(len(gens)), k):
        if not is_zero_vec(jet_evaluate(A, d, *[gens[i] for i in tup])):
            return False
    return True


# -- Maurer-Cartan ---------------------------------------------------------

@dataclass(frozen=True)
class MCReport:
    cocycle: MultiDerivation
    quadratic: JacobiatorResult

    @property
    def cocycle_ok(self) -> bool:
        return self.cocycle.is_zero

    @property
    def quadratic_ok(self) -> bool:
        return self.quadratic.is_zero

    @property
    def ok(self) -> bool:
        return self.cocycle_ok and self.quadratic_ok


def mc_check(A: LieAlgebroid, d: JetCochain) -> MCReport:
    """Maurer-Cartan for a 2-cochain: first order residual d_J d and the jacobiator of the body."""
    if d.k != 2:
        raise ArityError("mc_check needs a 2-cochain")
    return MCReport(d_jet(A, d).body, jacobiator(A, d.body))


# -- H^0 and H^1 -----------------------------------------------------------

def _section_space(A: LieAlgebroid, slc: Slice | None) -> list[Section]:
    if A.base_dim and slc is None:
        raise ValueError("a slice is required over a positive-dimensional base")
    if not A.base_dim:
        return [A.unit(i) for i in range(A.rank)]
    out = []
    for i in range(A.rank):
        for e in A.ring.monomials_up_to(slc.max_poly_degree, A.base_dim):
            out.append(vscale(A.ring.monomial(e), A.unit(i)))
    return out


def _collect(rows: dict, key, col: int, ncols: int, val: Fraction) -> None:
    rows.setdefault(key, [Fraction(0)] * ncols)[col] += val


def _solve_kernel(columns: list[list[tuple[object, Fraction]]], ncols: int) -> list[tuple[Fraction, ...]]:
    rows: dict = {}
    for c, entries in enumerate(columns):
        for key, val in entries:
            _collect(rows, key, c, ncols, val)
    M = QMatrix.from_rows([rows[k] for k in sorted(rows, key=repr)], ncols) if rows else QMatrix.zeros(0, ncols)
    if not M.rows:
        return [tuple(Fraction(int(i == c)) for i in range(ncols)) for c in range(ncols)]
    _, ker = mat_rank_kernel(M)
    return ker


def _vec_entries(tag, v: Sequence[Poly]) -> list[tuple[object, Fraction]]:
    return [((tag, m, e), c) for m, p in enumerate(v) for e, c in p.terms.items()]


def _combine_sections(A: LieAlgebroid, basis: list[Section], vec) -> Section:
    out = A.zero_section()
    for b, c in zip(basis, vec):
        if c:
            out = vadd(out, vscale(c, b))
    return out


@dataclass(frozen=True)
class H0Result:
    dim: int
    basis: tuple[Section, ...]


def h0(A: LieAlgebroid, slc: Slice | None = None) -> H0Result:
    """Center of Gamma(A) in the slice: [u, e_i] = 0 for all i and a(u) = 0."""
    space = _section_space(A, slc)
    cols = []
    for u in space:
        entries = []
        for i in range(A.rank):
            entries += _vec_entries(("br", i), bracket(A, u, A.unit(i)))
        entries += _vec_entries(("anchor",), anchor_apply(A, u))
        cols.append(entries)
    ker = _solve_kernel(cols, len(space))
    return H0Result(len(ker), tuple(_combine_sections(A, space, v) for v in ker))


@dataclass(frozen=True)
class H1Result:
    dim_der: int
    dim_inn: int
    derivations: tuple[MultiDerivation, ...]
    lemma_residuals: tuple[dict, ...]

    @property
    def dim_h1(self) -> int:
        return self.dim_der - self.dim_inn

    @property
    def lemma_ok(self) -> bool:
        return not any(self.lemma_residuals)


def derivation_defect(A: LieAlgebroid, d: MultiDerivation, X: Section, Y: Section) -> Section:
    """d[X, Y] - [dX, Y] - [X, dY]."""
    return vsub(vsub(md_evaluate(A, d, bracket(A, X, Y)), bracket(A, md_evaluate(A, d, X), Y)),
                bracket(A, X, md_evaluate(A, d, Y)))


def lemma_residual(A: LieAlgebroid, d: MultiDerivation) -> dict[int, VectorField]:
    """a(d e_i) + [a(e_i), jd d] on the frame; {} for a derivation."""
    s = jd(d)
    out = {}
    for i in range(A.rank):
        res = vadd(anchor_apply(A, md_evaluate(A, d, A.unit(i))), vf_bracket(A.a(i), s))
        if not is_zero_vec(res):
            out[i] = res
    return out


def h1(A: LieAlgebroid, slc: Slice | None = None) -> H1Result:
    """Der(A) / Inn(A) in the slice.

    Derivations solve d[X, Y] = [dX, Y] + [X, dY] for X, Y among the frame
    and x_mu e_j; inner ones are pi(j1 u) = [u, .] for sections u of the slice.
    """
    space = CochainSpace(A, 1, slc)
    gens = [A.unit(i) for i in range(A.rank)]
    gens += [vscale(A.x(mu), A.unit(i)) for mu in range(A.base_dim) for i in range(A.rank)]
    cols = []
    for b in space.basis:
        d = space.element(b)
        entries = []
        for p, q in combinations(range(len(gens)), 2):
            entries += _vec_entries(("der", p, q), derivation_defect(A, d, gens[p], gens[q]))
        cols.append(entries)
    ker = _solve_kernel(cols, space.dim)
    ders = tuple(space.combination(v) for v in ker)
    inner = []
    for u in _section_space(A, slc):
        ad = pi_rep(A, prolong(A, u))
        vec, esc = space.coordinates(ad)
        if esc is not None:
            kind, idx, comp, e, c = esc
            raise SliceNotClosedError(0, str(u), f"{kind}{list(idx)}[{comp}] {c}*x^{list(e)}")
        inner.append(vec)
    dim_inn = mat_rank(QMatrix.from_rows(inner, space.dim)) if inner else 0
    return H1Result(len(ders), dim_inn, ders, tuple(lemma_residual(A, d) for d in ders))
