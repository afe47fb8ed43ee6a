"""The deformation complex of a Lie algebroid.

A degree-k cochain is a skew multiderivation D stored by its frame values
``D(e_I)`` (I strictly increasing, |I| = k) together with its symbol
``sigma_D(e_J)`` (|J| = k-1), a vector field.  Off the frame D is extended by

    D(..., f u_s, ...) = f D(...) + (-1)^(k-s) sigma_D(..., u_s omitted, ...)(f) u_s

(slots counted from 1), which is the last-slot Leibniz rule moved through
skew-symmetry.  The coboundary is the Chevalley-Eilenberg type operator

    dD(u_0..u_k) = sum_i (-1)^i [u_i, D(..^u_i..)]
                 + sum_{i<j} (-1)^(i+j) D([u_i,u_j], ..^u_i..^u_j..)

and its symbol is sigma_{dD} = d(sigma_D) + (-1)^(k+1) a o D.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Mapping, Sequence

from .errors import ArityError, DimensionMismatchError, SliceNotClosedError
from .linalg import QMatrix, mat_rank, mat_rank_kernel, mat_solve
from .model import (
    LieAlgebroid, Section, VectorField, anchor_apply, apply_vf, bracket, is_zero_vec, validate, vadd,
    vf_bracket, vneg, vscale, vsub, vzero,
)
from .poly import Exponent, Poly, Ring

Index = tuple[int, ...]


def _sort_sign(idx: Sequence[int]) -> tuple[int, Index]:
    """(sign, sorted index) of an index tuple; sign 0 when an index repeats."""
    if len(set(idx)) != len(idx):
        return 0, ()
    lst = list(idx)
    sign = 1
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign, tuple(lst)


def _det(rows: list[list[Poly]], zero: Poly) -> Poly:
    k = len(rows)
    if k == 0:
        return zero + 1
    if k == 1:
        return rows[0][0]
    total = zero
    for c, p in enumerate(rows[0]):
        if p.is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for row in rows[1:]]
        m = _det(minor, zero)
        if m.is_zero():
            continue
        term = p * m
        total = total + term if c % 2 == 0 else total - term
    return total


def _tensor_eval(table: Mapping[Index, tuple[Poly, ...]], args: Sequence[Sequence[Poly]],
                 length: int, ring: Ring) -> tuple[Poly, ...]:
    """sum_I det[args[s][I_t]] * table[I] for a skew tensorial map."""
    zero = ring.zero()
    out = [zero] * length
    if not args:
        val = table.get(())
        return tuple(val) if val is not None else tuple(out)
    supports = [frozenset(i for i, p in enumerate(a) if p.terms) for a in args]
    for idx, val in table.items():
        if any(not s.intersection(idx) for s in supports):
            continue
        w = _det([[a[i] for i in idx] for a in args], zero)
        if w.is_zero():
            continue
        for m, v in enumerate(val):
            if v.terms:
                out[m] = out[m] + w * v
    return tuple(out)


# -- cochains --------------------------------------------------------------

@dataclass(frozen=True)
class MultiDerivation:
    """Degree-k cochain: frame values ``coeffs[I]`` (length rank) and symbol
    ``symbol[J]`` (vector field, length base_dim).  Zero entries are dropped."""

    k: int
    rank: int
    base_dim: int
    ring: Ring
    coeffs: Mapping[Index, tuple[Poly, ...]] = field(default_factory=dict)
    symbol: Mapping[Index, tuple[Poly, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 0:
            raise ArityError("negative cochain degree")
        object.__setattr__(self, "coeffs", self._clean(self.coeffs, self.k, self.rank))
        sym = self._clean(self.symbol, self.k - 1, self.base_dim) if self.k >= 1 else {}
        if self.k == 0 and any(not is_zero_vec(v) for v in self.symbol.values()):
            raise ArityError("a 0-cochain has no symbol")
        object.__setattr__(self, "symbol", sym)

    def _clean(self, table, length: int, width: int) -> dict:
        out = {}
        for idx, val in table.items():
            idx = tuple(idx)
            if len(idx) != length or any(not 0 <= i < self.rank for i in idx) or list(idx) != sorted(set(idx)):
                raise DimensionMismatchError(f"index {idx} is not a strictly increasing {length}-tuple < {self.rank}")
            val = tuple(val)
            if len(val) != width:
                raise DimensionMismatchError(f"value at {idx} has {len(val)} components, expected {width}")
            if any(p.ring != self.ring for p in val):
                raise DimensionMismatchError("cochain entries must live in the cochain ring")
            if not is_zero_vec(val):
                out[idx] = val
        return dict(sorted(out.items()))

    # constructors
    @classmethod
    def zero(cls, A: LieAlgebroid, k: int) -> "MultiDerivation":
        return cls(k, A.rank, A.base_dim, A.ring)

    @classmethod
    def from_section(cls, A: LieAlgebroid, u: Sequence[Poly]) -> "MultiDerivation":
        return cls(0, A.rank, A.base_dim, A.ring, {(): tuple(u)})

    @classmethod
    def from_endomorphism(cls, A: LieAlgebroid, N: Sequence[Sequence]) -> "MultiDerivation":
        """Bundle map N (N[k][i] = k-th component of N e_i) as a 1-cochain with zero symbol."""
        N = _as_matrix(A, N)
        return cls(1, A.rank, A.base_dim, A.ring, {(i,): tuple(N[k][i] for k in range(A.rank)) for i in range(A.rank)})

    @classmethod
    def bracket_cochain(cls, A: LieAlgebroid) -> "MultiDerivation":
        """The bracket of A itself: frame values c_ij, symbol the anchor."""
        coeffs = {(i, j): A.c(i, j) for i, j in combinations(range(A.rank), 2)}
        symbol = {(i,): A.a(i) for i in range(A.rank)}
        return cls(2, A.rank, A.base_dim, A.ring, coeffs, symbol)

    # access
    @property
    def is_zero(self) -> bool:
        return not self.coeffs and not self.symbol

    def value(self, idx: Sequence[int]) -> tuple[Poly, ...]:
        sign, key = _sort_sign(idx)
        v = self.coeffs.get(key) if sign else None
        if v is None:
            return vzero(self.ring, self.rank)
        return v if sign > 0 else vneg(v)

    def symbol_value(self, idx: Sequence[int]) -> tuple[Poly, ...]:
        sign, key = _sort_sign(idx)
        v = self.symbol.get(key) if sign else None
        if v is None:
            return vzero(self.ring, self.base_dim)
        return v if sign > 0 else vneg(v)

    def max_degree(self) -> float | int:
        degs = [p.base_degree(self.base_dim) for v in list(self.coeffs.values()) + list(self.symbol.values()) for p in v]
        return max(degs, default=float("-inf"))

    # linear structure
    def _check(self, other: "MultiDerivation") -> None:
        if (self.k, self.rank, self.base_dim, self.ring) != (other.k, other.rank, other.base_dim, other.ring):
            raise DimensionMismatchError("cochains of different shape")

    def __add__(self, other: "MultiDerivation") -> "MultiDerivation":
        self._check(other)
        return MultiDerivation(self.k, self.rank, self.base_dim, self.ring,
                               _table_add(self.coeffs, other.coeffs), _table_add(self.symbol, other.symbol))

    def __neg__(self) -> "MultiDerivation":
        return self.scale(-1)

    def __sub__(self, other: "MultiDerivation") -> "MultiDerivation":
        return self + (-other)

    def scale(self, c) -> "MultiDerivation":
        return MultiDerivation(self.k, self.rank, self.base_dim, self.ring,
                               {i: vscale(c, v) for i, v in self.coeffs.items()},
                               {i: vscale(c, v) for i, v in self.symbol.items()})

    def extend(self, ring: Ring) -> "MultiDerivation":
        return MultiDerivation(self.k, self.rank, self.base_dim, ring,
                               {i: tuple(p.extend(ring) for p in v) for i, v in self.coeffs.items()},
                               {i: tuple(p.extend(ring) for p in v) for i, v in self.symbol.items()})

    def __str__(self) -> str:
        parts = [f"D{list(i)} = ({', '.join(map(str, v))})" for i, v in self.coeffs.items()]
        parts += [f"sigma{list(i)} = ({', '.join(map(str, v))})" for i, v in self.symbol.items()]
        return f"<{self.k}-cochain " + ("; ".join(parts) or "0") + ">"


def _table_add(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for i, v in b.items():
        out[i] = vadd(out[i], v) if i in out else v
    return out


def _as_matrix(A: LieAlgebroid, N) -> tuple[tuple[Poly, ...], ...]:
    if len(N) != A.rank or any(len(row) != A.rank for row in N):
        raise DimensionMismatchError(f"endomorphism must be {A.rank}x{A.rank}")
    return tuple(tuple(A._coerce(x) for x in row) for row in N)


def apply_endomorphism(A: LieAlgebroid, N, u: Sequence[Poly]) -> Section:
    N = _as_matrix(A, N)
    r = A.rank
    out = []
    for k in range(r):
        total = A.ring.zero()
        for i in range(r):
            if N[k][i].terms and u[i].terms:
                total = total + N[k][i] * u[i]
        out.append(total)
    return tuple(out)


# -- evaluation ------------------------------------------------------------

def symbol_apply(D: MultiDerivation, args: Sequence[Sequence[Poly]]) -> VectorField:
    """sigma_D(X_1..X_{k-1}) as a vector field (tensorial in the arguments)."""
    if len(args) != D.k - 1:
        raise ArityError(f"symbol of a {D.k}-cochain takes {D.k - 1} arguments, got {len(args)}")
    return _tensor_eval(D.symbol, args, D.base_dim, D.ring)


def md_evaluate(A: LieAlgebroid, D: MultiDerivation, *args: Sequence[Poly]) -> Section:
    """D(X_1, ..., X_k) on arbitrary polynomial sections."""
    k = D.k
    if len(args) != k:
        raise ArityError(f"{k}-cochain evaluated on {len(args)} sections")
    for X in args:
        if len(X) != A.rank:
            raise DimensionMismatchError("section length does not match the rank")
    if k == 0:
        return D.value(())
    out = list(_tensor_eval(D.coeffs, args, A.rank, A.ring))
    if D.symbol and A.base_dim:
        for s in range(k):
            X = args[s]
            if all(p.is_constant() for p in X):
                continue
            sig = symbol_apply(D, args[:s] + args[s + 1:])
            if is_zero_vec(sig):
                continue
            neg = (k - 1 - s) % 2 == 1
            for j in range(A.rank):
                d = apply_vf(sig, X[j])
                if d.terms:
                    out[j] = out[j] - d if neg else out[j] + d
    return tuple(out)


def multiderivation_from_evaluator(A: LieAlgebroid, k: int, fn: Callable[..., Section]) -> MultiDerivation:
    """Read frame values and the Leibniz defect of a k-ary multiderivation.

    The symbol is sigma(e_J)(x_mu) e_0 = fn(e_J, x_mu e_0) - x_mu fn(e_J, e_0).
    """
    r, n = A.rank, A.base_dim
    units = [A.unit(i) for i in range(r)]
    coeffs = {idx: fn(*[units[i] for i in idx]) for idx in combinations(range(r), k)}
    symbol = {}
    if k >= 1 and n:
        e0 = units[0]
        for idx in combinations(range(r), k - 1):
            front = [units[i] for i in idx]
            base = fn(*front, e0)
            comps = []
            for mu in range(n):
                xm = A.x(mu)
                defect = vsub(fn(*front, vscale(xm, e0)), vscale(xm, base))
                comps.append(defect[0])
            symbol[idx] = tuple(comps)
    return MultiDerivation(k, r, n, A.ring, coeffs, symbol)


# -- coboundary ------------------------------------------------------------

def delta_formula(A: LieAlgebroid, D: MultiDerivation, us: Sequence[Sequence[Poly]]) -> Section:
    """The displayed coboundary formula evaluated on k+1 arbitrary sections."""
    k = D.k
    if len(us) != k + 1:
        raise ArityError(f"delta of a {k}-cochain takes {k + 1} sections")
    total = list(A.zero_section())
    for i in range(k + 1):
        rest = list(us[:i]) + list(us[i + 1:])
        term = bracket(A, us[i], md_evaluate(A, D, *rest))
        total = list(vsub(total, term) if i % 2 else vadd(total, term))
    for i, j in combinations(range(k + 1), 2):
        rest = [u for s, u in enumerate(us) if s != i and s != j]
        term = md_evaluate(A, D, bracket(A, us[i], us[j]), *rest)
        total = list(vsub(total, term) if (i + j) % 2 else vadd(total, term))
    return tuple(total)


@dataclass(frozen=True)
class VectorCochain:
    """TM-valued cochain V: frame values (vector fields) plus an optional
    symbol with V(.., f u) = f V(.., u) + sigma(..)(f) a(u).

    Symbols of multiderivations are tensorial (``symbol is None``); a o D is
    not, and carries sigma_D as its symbol.
    """

    k: int
    rank: int
    base_dim: int
    ring: Ring
    frames: Mapping[Index, tuple[Poly, ...]] = field(default_factory=dict)
    symbol: "VectorCochain | None" = None

    def __post_init__(self):
        clean = {}
        for idx, v in self.frames.items():
            idx = tuple(idx)
            if len(idx) != self.k or list(idx) != sorted(set(idx)):
                raise DimensionMismatchError(f"bad index {idx} for a {self.k}-cochain")
            if len(v) != self.base_dim:
                raise DimensionMismatchError("frame value must be a vector field")
            if not is_zero_vec(v):
                clean[idx] = tuple(v)
        object.__setattr__(self, "frames", dict(sorted(clean.items())))

    @property
    def is_zero(self) -> bool:
        return not self.frames and (self.symbol is None or self.symbol.is_zero)

    def same_frames(self, other: "VectorCochain") -> bool:
        return self.k == other.k and self.frames == other.frames

    def scale(self, c) -> "VectorCochain":
        return VectorCochain(self.k, self.rank, self.base_dim, self.ring,
                             {i: vscale(c, v) for i, v in self.frames.items()},
                             None if self.symbol is None else self.symbol.scale(c))


def symbol_cochain(D: MultiDerivation) -> VectorCochain:
    """sigma_D as a tensorial TM-valued (k-1)-cochain."""
    if D.k == 0:
        raise ArityError("a 0-cochain has no symbol")
    return VectorCochain(D.k - 1, D.rank, D.base_dim, D.ring, D.symbol)


def anchored(A: LieAlgebroid, D: MultiDerivation) -> VectorCochain:
    """D_a = a o D."""
    units = [A.unit(i) for i in range(A.rank)]
    frames = {idx: anchor_apply(A, md_evaluate(A, D, *[units[i] for i in idx]))
              for idx in combinations(range(A.rank), D.k)}
    sym = symbol_cochain(D) if D.k >= 1 else None
    return VectorCochain(D.k, A.rank, A.base_dim, A.ring, frames, sym)


def vector_evaluate(A: LieAlgebroid, V: VectorCochain, *args: Sequence[Poly]) -> VectorField:
    if len(args) != V.k:
        raise ArityError(f"{V.k}-cochain evaluated on {len(args)} sections")
    out = _tensor_eval(V.frames, args, A.base_dim, A.ring)
    if V.symbol is not None and V.k >= 1:
        for s in range(V.k):
            X = args[s]
            if all(p.is_constant() for p in X):
                continue
            sig = vector_evaluate(A, V.symbol, *(args[:s] + args[s + 1:]))
            if is_zero_vec(sig):
                continue
            shift = anchor_apply(A, tuple(apply_vf(sig, X[j]) for j in range(A.rank)))
            out = vsub(out, shift) if (V.k - 1 - s) % 2 else vadd(out, shift)
    return out


def delta_on_symbol(A: LieAlgebroid, V: VectorCochain) -> VectorCochain:
    """dV(u_0..u_k) = sum (-1)^i [a(u_i), V(..)] + sum_{i<j} (-1)^(i+j) V([u_i,u_j], ..)."""
    k, r = V.k, A.rank
    units = [A.unit(i) for i in range(r)]
    frames = {}
    for idx in combinations(range(r), k + 1):
        us = [units[i] for i in idx]
        total = A.zero_field()
        for i in range(k + 1):
            term = vf_bracket(A.a(idx[i]), vector_evaluate(A, V, *(us[:i] + us[i + 1:])))
            total = vsub(total, term) if i % 2 else vadd(total, term)
        for i, j in combinations(range(k + 1), 2):
            rest = [u for s, u in enumerate(us) if s != i and s != j]
            term = vector_evaluate(A, V, A.c(idx[i], idx[j]), *rest)
            total = vsub(total, term) if (i + j) % 2 else vadd(total, term)
        frames[idx] = total
    sign = -1 if (k + 1) % 2 else 1
    own = {i: vscale(sign, v) for i, v in V.frames.items()}
    if V.symbol is not None:
        inner = delta_on_symbol(A, V.symbol).frames
        own = _table_add(inner, own)
    sym = VectorCochain(k, r, A.base_dim, A.ring, own)
    return VectorCochain(k + 1, r, A.base_dim, A.ring, frames, sym)


def delta(A: LieAlgebroid, D: MultiDerivation) -> MultiDerivation:
    """Coboundary: frame values from the displayed formula, symbol from
    sigma_{dD} = d(sigma_D) + (-1)^(k+1) a o D."""
    k, r = D.k, A.rank
    if (D.rank, D.base_dim) != (A.rank, A.base_dim):
        raise DimensionMismatchError("cochain does not belong to this algebroid")
    units = [A.unit(i) for i in range(r)]
    coeffs = {idx: delta_formula(A, D, [units[i] for i in idx]) for idx in combinations(range(r), k + 1)}
    symbol = {}
    if A.base_dim:
        sign = -1 if (k + 1) % 2 else 1
        ds = delta_on_symbol(A, symbol_cochain(D)).frames if k >= 1 else {}
        for idx in combinations(range(r), k):
            aD = anchor_apply(A, md_evaluate(A, D, *[units[i] for i in idx]))
            val = vscale(sign, aD)
            if idx in ds:
                val = vadd(ds[idx], val)
            symbol[idx] = val
    return MultiDerivation(k + 1, r, A.base_dim, A.ring, coeffs, symbol)


def leibniz_symbol_of_delta(A: LieAlgebroid, D: MultiDerivation) -> MultiDerivation:
    """delta(D) re-read entirely from the displayed formula (symbol by Leibniz defect).

    Independent of the symbol identity used inside :func:`delta`.
    """
    return multiderivation_from_evaluator(A, D.k + 1, lambda *us: delta_formula(A, D, us))


def symbol_identity_residual(A: LieAlgebroid, D: MultiDerivation) -> dict[Index, VectorField]:
    """sigma_{dD} (via the Leibniz defect of the formula) minus d(sigma_D) + (-1)^(k+1) D_a."""
    read = leibniz_symbol_of_delta(A, D)
    rhs = delta(A, D)
    out = {}
    for idx in set(read.symbol) | set(rhs.symbol):
        res = vsub(read.symbol_value(idx), rhs.symbol_value(idx))
        if not is_zero_vec(res):
            out[idx] = res
    return out


# -- Jacobi and deformations ----------------------------------------------

@dataclass(frozen=True)
class JacobiatorResult:
    """D(D(e_i,e_j),e_l)+c.p. on frame triples and, over a positive-dimensional
    base, the symbol morphism defect sigma(D(e_i,e_j)) - [sigma e_i, sigma e_j]."""

    triples: Mapping[Index, Section]
    anchor: Mapping[Index, VectorField]

    @property
    def is_zero(self) -> bool:
        return not self.triples and not self.anchor


def jacobiator(A: LieAlgebroid, D: MultiDerivation) -> JacobiatorResult:
    if D.k != 2:
        raise ArityError("jacobiator needs a 2-cochain")
    r = A.rank
    units = [A.unit(i) for i in range(r)]
    triples = {}
    for i, j, l in combinations(range(r), 3):
        ei, ej, el = units[i], units[j], units[l]
        total = vadd(vadd(md_evaluate(A, D, D.value((i, j)), el), md_evaluate(A, D, D.value((j, l)), ei)),
                     md_evaluate(A, D, D.value((l, i)), ej))
        if not is_zero_vec(total):
            triples[(i, j, l)] = total
    anchor = {}
    if A.base_dim:
        for i, j in combinations(range(r), 2):
            sig_ij = symbol_apply(D, [D.value((i, j))])
            res = vsub(sig_ij, vf_bracket(D.symbol_value((i,)), D.symbol_value((j,))))
            if not is_zero_vec(res):
                anchor[(i, j)] = res
    return JacobiatorResult(triples, anchor)


@dataclass(frozen=True)
class DeformedFamily:
    """Algebroid A_t whose structure lives in the ring with ``t`` appended."""

    algebroid: LieAlgebroid
    base: LieAlgebroid

    def at(self, t) -> LieAlgebroid:
        """Specialize t to a rational value."""
        ring = self.base.ring
        F = self.algebroid
        st = tuple(tuple(tuple(p.substitute_last(t, ring) for p in row) for row in m) for m in F.structure)
        an = tuple(tuple(p.substitute_last(t, ring) for p in row) for row in F.anchor)
        return LieAlgebroid(F.base_dim, F.rank, st, an, self.base.name, ring)


def deform(A: LieAlgebroid, D: MultiDerivation) -> DeformedFamily:
    """[X,Y]_t = [X,Y] + t D(X,Y), a_t = a + t sigma_D."""
    if D.k != 2:
        raise ArityError("deform needs a 2-cochain")
    ring = A.ring.extended()
    t = ring.var(ring.nvars - 1)
    r, n = A.rank, A.base_dim
    st = [[[A.structure[k][i][j].extend(ring) + D.value((i, j))[k].extend(ring) * t for j in range(r)]
           for i in range(r)] for k in range(r)]
    an = [[A.anchor[mu][i].extend(ring) + D.symbol_value((i,))[mu].extend(ring) * t for i in range(r)]
          for mu in range(n)]
    F = LieAlgebroid(n, r, st, an, f"{A.name}_t" if A.name else "family", ring)
    return DeformedFamily(F, A)


@dataclass(frozen=True)
class FamilyReport:
    """Jacobi and anchor-morphism residuals split by powers of t."""

    jacobi: Mapping[int, Mapping[Index, Section]]
    anchor: Mapping[int, Mapping[Index, VectorField]]
    skew_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.skew_ok and not any(self.jacobi.values()) and not any(self.anchor.values())

    def residual_at(self, power: int) -> tuple[Mapping[Index, Section], Mapping[Index, VectorField]]:
        return self.jacobi.get(power, {}), self.anchor.get(power, {})

    def vanishes_at(self, power: int) -> bool:
        j, a = self.residual_at(power)
        return not j and not a

    @property
    def powers(self) -> list[int]:
        return sorted({p for p, v in self.jacobi.items() if v} | {p for p, v in self.anchor.items() if v})


def _split_vec(v: Sequence[Poly], base: Ring) -> dict[int, tuple[Poly, ...]]:
    pieces: dict[int, list[Poly]] = {}
    for c, p in enumerate(v):
        for power, q in p.split_last(base).items():
            pieces.setdefault(power, [base.zero()] * len(v))[c] = q
    return {p: tuple(q) for p, q in sorted(pieces.items())}


def is_lie_family(F: DeformedFamily) -> FamilyReport:
    """Validate A_t over Q[x, t] and decompose each residual by t-degree.

    For F = deform(A, D): the t^1 part is the cocycle condition (Jacobi part
    equals -dD on frame triples, anchor part equals -sigma_{dD}) and the t^2
    part is the jacobiator of D.
    """
    from .model import anchor_defect_frame, jacobiator_frame

    A = F.algebroid
    base = F.base.ring
    r = A.rank
    report = validate(A)
    jac: dict[int, dict[Index, Section]] = {}
    anc: dict[int, dict[Index, VectorField]] = {}
    if report["skewness"].passed:
        for i, j, l in combinations(range(r), 3):
            for power, piece in _split_vec(jacobiator_frame(A, i, j, l), base).items():
                if not is_zero_vec(piece):
                    jac.setdefault(power, {})[(i, j, l)] = piece
    if A.base_dim:
        for i, j in combinations(range(r), 2):
            for power, piece in _split_vec(anchor_defect_frame(A, i, j), base).items():
                if not is_zero_vec(piece):
                    anc.setdefault(power, {})[(i, j)] = piece
    return FamilyReport(jac, anc, report["skewness"].passed)


def family_cocycle(F: DeformedFamily) -> MultiDerivation:
    """c_0 = d/dt [.,.]_t at t = 0, with its symbol d/dt a_t at t = 0."""
    A, base = F.algebroid, F.base.ring
    r, n = A.rank, A.base_dim

    def t1(p: Poly) -> Poly:
        return p.split_last(base).get(1, base.zero())

    coeffs = {(i, j): tuple(t1(A.structure[k][i][j]) for k in range(r)) for i, j in combinations(range(r), 2)}
    symbol = {(i,): tuple(t1(A.anchor[mu][i]) for mu in range(n)) for i in range(r)} if n else {}
    return MultiDerivation(2, r, n, base, coeffs, symbol)


# -- slices and cohomology -------------------------------------------------

def anchor_degree(A: LieAlgebroid) -> int:
    """Largest polynomial degree among the anchor coefficients (0 if a = 0)."""
    degs = [p.base_degree(A.base_dim) for row in A.anchor for p in row]
    return max([int(d) for d in degs if d != float("-inf")], default=0)


@dataclass(frozen=True)
class Slice:
    """Cochains whose frame values have degree <= max_poly_degree.

    Symbols are allowed ``symbol_shift`` extra degrees; by default the shift
    is the anchor degree of the algebroid, because the a o D term of the
    symbol of dD raises degree by exactly that much.
    """

    max_poly_degree: int = 0
    symbol_shift: int | None = None

    def symbol_cap(self, A: LieAlgebroid) -> int:
        shift = anchor_degree(A) if self.symbol_shift is None else self.symbol_shift
        return self.max_poly_degree + shift

    def to_wire(self) -> dict:
        out: dict = {"max_poly_degree": self.max_poly_degree}
        if self.symbol_shift is not None:
            out["symbol_shift"] = self.symbol_shift
        return out


@dataclass(frozen=True)
class BasisElement:
    kind: str  # "coeff" or "symbol"
    idx: Index
    comp: int
    exponent: Exponent

    def __str__(self) -> str:
        return f"{self.kind}{list(self.idx)}[{self.comp}]*x^{list(self.exponent)}"


class CochainSpace:
    """Monomial basis of the degree-k cochains inside a slice."""

    def __init__(self, A: LieAlgebroid, k: int, slc: Slice | None):
        if A.base_dim and slc is None:
            raise ValueError("a slice is required over a positive-dimensional base")
        self.A, self.k = A, k
        cap = slc.max_poly_degree if slc is not None else 0
        scap = slc.symbol_cap(A) if slc is not None else 0
        self.cap, self.symbol_cap = cap, scap
        monos = A.ring.monomials_up_to(cap, A.base_dim) if A.base_dim else [(0,) * A.ring.nvars]
        smonos = A.ring.monomials_up_to(scap, A.base_dim) if A.base_dim else monos
        self.monomials = monos
        basis = []
        for idx in combinations(range(A.rank), k):
            for m in range(A.rank):
                for e in monos:
                    basis.append(BasisElement("coeff", idx, m, e))
        if k >= 1 and A.base_dim:
            for idx in combinations(range(A.rank), k - 1):
                for mu in range(A.base_dim):
                    for e in smonos:
                        basis.append(BasisElement("symbol", idx, mu, e))
        self.basis = basis
        self.position = {(b.kind, b.idx, b.comp, b.exponent): n for n, b in enumerate(basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, b: BasisElement) -> MultiDerivation:
        A = self.A
        mono = A.ring.monomial(b.exponent)
        if b.kind == "coeff":
            val = tuple(mono if m == b.comp else A.ring.zero() for m in range(A.rank))
            return MultiDerivation(self.k, A.rank, A.base_dim, A.ring, {b.idx: val})
        val = tuple(mono if mu == b.comp else A.ring.zero() for mu in range(A.base_dim))
        return MultiDerivation(self.k, A.rank, A.base_dim, A.ring, {}, {b.idx: val})

    def combination(self, vec: Sequence) -> MultiDerivation:
        A = self.A
        coeffs: dict[Index, list[Poly]] = {}
        symbol: dict[Index, list[Poly]] = {}
        for b, c in zip(self.basis, vec):
            if not c:
                continue
            term = A.ring.monomial(b.exponent, c)
            if b.kind == "coeff":
                row = coeffs.setdefault(b.idx, [A.ring.zero()] * A.rank)
            else:
                row = symbol.setdefault(b.idx, [A.ring.zero()] * A.base_dim)
            row[b.comp] = row[b.comp] + term
        return MultiDerivation(self.k, A.rank, A.base_dim, A.ring,
                               {i: tuple(v) for i, v in coeffs.items()}, {i: tuple(v) for i, v in symbol.items()})

    def coordinates(self, D: MultiDerivation) -> tuple[tuple[Fraction, ...], tuple | None]:
        """(coordinate vector, first escaping term or None)."""
        vec = [Fraction(0)] * self.dim
        escaping = None
        for kind, table in (("coeff", D.coeffs), ("symbol", D.symbol)):
            for idx, val in table.items():
                for comp, p in enumerate(val):
                    for e, c in p.terms.items():
                        pos = self.position.get((kind, idx, comp, e))
                        if pos is None:
                            if escaping is None:
                                escaping = (kind, idx, comp, e, c)
                            continue
                        vec[pos] = c
        return tuple(vec), escaping


def _delta_column(args):
    A, k, slc, b = args
    src = CochainSpace(A, k, slc)
    dst = CochainSpace(A, k + 1, slc)
    image = delta(A, src.element(b))
    vec, esc = dst.coordinates(image)
    return vec, esc


def coboundary_matrix(A: LieAlgebroid, k: int, slc: Slice | None, jobs: int = 1) -> QMatrix:
    """Matrix of delta: C^k -> C^(k+1) on the slice bases; checks closure."""
    src = CochainSpace(A, k, slc)
    dst = CochainSpace(A, k + 1, slc)
    tasks = [(A, k, slc, b) for b in src.basis]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_delta_column, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_delta_column(t) for t in tasks]
    for b, (vec, esc) in zip(src.basis, results):
        if esc is not None:
            kind, idx, comp, e, c = esc
            raise SliceNotClosedError(k, str(b), f"{kind}{list(idx)}[{comp}] {c}*x^{list(e)}")
    return QMatrix.from_columns([vec for vec, _ in results], dst.dim)


@dataclass(frozen=True)
class CohomologyDims:
    k: int
    dim_C: int
    dim_Z: int
    dim_B: int

    @property
    def dim_H(self) -> int:
        return self.dim_Z - self.dim_B

    def to_dict(self) -> dict:
        return {"k": self.k, "dim_C": self.dim_C, "dim_Z": self.dim_Z, "dim_B": self.dim_B, "dim_H": self.dim_H}


def cohomology_dims(A: LieAlgebroid, k_max: int, slc: Slice | None = None, jobs: int = 1) -> list[CohomologyDims]:
    """Exact dim Z^k, B^k, H^k for k = 0..k_max by rank-nullity on the slice."""
    ranks = {}
    dims = {}
    for k in range(0, k_max + 1):
        M = coboundary_matrix(A, k, slc, jobs)
        dims[k] = M.cols
        ranks[k] = mat_rank(M) if M.rows and M.cols else 0
    out = []
    for k in range(0, k_max + 1):
        dim_Z = dims[k] - ranks[k]
        dim_B = ranks[k - 1] if k >= 1 else 0
        out.append(CohomologyDims(k, dims[k], dim_Z, dim_B))
    return out


def cocycle_check(A: LieAlgebroid, D: MultiDerivation) -> bool:
    return delta(A, D).is_zero


def coboundary_check(A: LieAlgebroid, D: MultiDerivation, slc: Slice | None) -> MultiDerivation | None:
    """A primitive T with delta(T) = D inside the slice, or None."""
    if D.k == 0:
        return None if not D.is_zero else D
    src = CochainSpace(A, D.k - 1, slc)
    dst = CochainSpace(A, D.k, slc)
    M = coboundary_matrix(A, D.k - 1, slc)
    target, esc = dst.coordinates(D)
    if esc is not None:
        return None
    if not M.cols:
        return MultiDerivation.zero(A, D.k - 1) if D.is_zero else None
    sol = mat_solve(M, target)
    if sol is None:
        return None
    return src.combination(sol)


def cocycle_basis(A: LieAlgebroid, k: int, slc: Slice | None) -> list[MultiDerivation]:
    space = CochainSpace(A, k, slc)
    M = coboundary_matrix(A, k, slc)
    if not M.rows:
        return [space.element(b) for b in space.basis]
    _, ker = mat_rank_kernel(M)
    return [space.combination(v) for v in ker]


# -- Nijenhuis operators ---------------------------------------------------

def nijenhuis_cochain(A: LieAlgebroid, N) -> MultiDerivation:
    """[u,v]_N = [u,Nv] + [Nu,v] - N[u,v]; symbol read from the Leibniz defect."""
    N = _as_matrix(A, N)

    def fn(u, v):
        Nu, Nv = apply_endomorphism(A, N, u), apply_endomorphism(A, N, v)
        return vsub(vadd(bracket(A, u, Nv), bracket(A, Nu, v)), apply_endomorphism(A, N, bracket(A, u, v)))

    return multiderivation_from_evaluator(A, 2, fn)


def nijenhuis_torsion(A: LieAlgebroid, N) -> dict[Index, Section]:
    """T(e_i,e_j) = [Ne_i,Ne_j] - N[e_i,e_j]_N on frame pairs (zero entries dropped)."""
    N = _as_matrix(A, N)
    D = nijenhuis_cochain(A, N)
    out = {}
    for i, j in combinations(range(A.rank), 2):
        Ni, Nj = apply_endomorphism(A, N, A.unit(i)), apply_endomorphism(A, N, A.unit(j))
        T = vsub(bracket(A, Ni, Nj), apply_endomorphism(A, N, D.value((i, j))))
        if not is_zero_vec(T):
            out[(i, j)] = T
    return out


@dataclass(frozen=True)
class TrivialityReport:
    torsion: Mapping[Index, Section]
    bracket_residual: Mapping[Index, Section]
    anchor_residual: Mapping[int, VectorField]

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    @property
    def identity_holds(self) -> bool:
        return not self.bracket_residual and not self.anchor_residual


def triviality_check(A: LieAlgebroid, N) -> TrivialityReport:
    """Check (Id+tN)[u,v]_t = [(Id+tN)u, (Id+tN)v] and a_t = a o (Id+tN) in Q[x,t]."""
    N = _as_matrix(A, N)
    F = deform(A, nijenhuis_cochain(A, N))
    At = F.algebroid
    ring = At.ring
    t = ring.var(ring.nvars - 1)
    A_ext = A.extend_ring(ring)
    Next = tuple(tuple(p.extend(ring) for p in row) for row in N)
    r = A.rank
    phi = tuple(tuple((ring.one() if k == i else ring.zero()) + Next[k][i] * t for i in range(r)) for k in range(r))
    units = [At.unit(i) for i in range(r)]
    br = {}
    for i, j in combinations(range(r), 2):
        lhs = apply_endomorphism(At, phi, At.c(i, j))
        rhs = bracket(A_ext, apply_endomorphism(At, phi, units[i]), apply_endomorphism(At, phi, units[j]))
        res = vsub(lhs, rhs)
        if not is_zero_vec(res):
            br[(i, j)] = res
    anc = {}
    for i in range(r):
        res = vsub(At.a(i), anchor_apply(A_ext, apply_endomorphism(At, phi, units[i])))
        if not is_zero_vec(res):
            anc[i] = res
    return TrivialityReport(nijenhuis_torsion(A, N), br, anc)


# -- sampling --------------------------------------------------------------

def random_cochain(A: LieAlgebroid, k: int, max_degree: int, rng: random.Random,
                   density: float = 0.5, coeff_range: int = 2) -> MultiDerivation:
    """Seeded random cochain with small integer coefficients."""
    space = CochainSpace(A, k, Slice(max_degree) if A.base_dim else None)
    vec = []
    for _ in space.basis:
        if rng.random() < density:
            vec.append(Fraction(rng.randint(-coeff_range, coeff_range)))
        else:
            vec.append(Fraction(0))
    return space.combination(vec)


def cochain_dimension(A: LieAlgebroid, k: int, slc: Slice | None) -> int:
    return CochainSpace(A, k, slc).dim


def expected_abelian_dims(n: int) -> list[int]:
    return [n * comb(n, k) for k in range(n + 1)]
