"""Polynomial multivector fields on R^n and the Schouten-Nijenhuis bracket.

A degree-p multivector is stored as ``{(mu_1 < ... < mu_p): coefficient}``.
Internally it is read as a polynomial in odd variables ``xi_mu = d/dx_mu``,
which turns the Schouten bracket into

    [P, Q] = sum_mu  dP/dxi_mu ^ dQ/dx_mu  -  (-1)^((p-1)(q-1)) dQ/dxi_mu ^ dP/dx_mu

with right derivatives in the odd variables.  With this convention
``[X, f] = X(f)`` and ``[X, Y]`` is the Lie bracket of vector fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .poly import Poly, Ring


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Multivector:
    ring: Ring
    n: int
    degree: int
    components: Mapping[tuple[int, ...], Poly] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, p in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or any(not 0 <= i < self.n for i in idx):
                raise ValueError(f"bad multivector index {idx} for degree {self.degree} on R^{self.n}")
            if p.ring != self.ring:
                raise ValueError("component ring mismatch")
            if not p.is_zero():
                clean[idx] = p
        object.__setattr__(self, "components", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, ring: Ring, n: int, degree: int) -> "Multivector":
        return cls(ring, n, degree, {})

    @classmethod
    def function(cls, f: Poly, n: int) -> "Multivector":
        return cls(f.ring, n, 0, {(): f})

    @classmethod
    def vector_field(cls, comps, n: int | None = None) -> "Multivector":
        comps = tuple(comps)
        n = len(comps) if n is None else n
        return cls(comps[0].ring, n, 1, {(i,): p for i, p in enumerate(comps)})

    @classmethod
    def bivector(cls, ring: Ring, n: int, comps: Mapping[tuple[int, int], Poly]) -> "Multivector":
        """Bivector from ``{(i, j): P^ij}``; entries with i > j are flipped."""
        out: dict[tuple[int, int], Poly] = {}
        for (i, j), p in comps.items():
            if i == j:
                raise ValueError("diagonal bivector component")
            key, val = ((i, j), p) if i < j else ((j, i), -p)
            out[key] = out.get(key, ring.zero()) + val
        return cls(ring, n, 2, out)

    def get(self, idx: tuple[int, ...]) -> Poly:
        """Component for an arbitrary index tuple, with the skew sign."""
        if len(set(idx)) != len(idx):
            return self.ring.zero()
        order = sorted(range(len(idx)), key=lambda s: idx[s])
        sign = _perm_sign(order)
        p = self.components.get(tuple(sorted(idx)))
        if p is None:
            return self.ring.zero()
        return p if sign > 0 else -p

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "Multivector") -> "Multivector":
        self._same(other)
        out = dict(self.components)
        for k, p in other.components.items():
            out[k] = out.get(k, self.ring.zero()) + p
        return Multivector(self.ring, self.n, self.degree, out)

    def __neg__(self) -> "Multivector":
        return Multivector(self.ring, self.n, self.degree, {k: -p for k, p in self.components.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def scale(self, c) -> "Multivector":
        return Multivector(self.ring, self.n, self.degree, {k: p * c for k, p in self.components.items()})

    def _same(self, other: "Multivector") -> None:
        if (self.ring, self.n, self.degree) != (other.ring, other.n, other.degree):
            raise ValueError("multivectors of different shape")

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for idx, p in self.components.items():
            basis = "^".join(f"d{i + 1}" for i in idx)
            parts.append(f"({p})" + (f"*{basis}" if basis else ""))
        return " + ".join(parts)


def _perm_sign(order: list[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _wedge_terms(a: Mapping[tuple[int, ...], Poly], b: Mapping[tuple[int, ...], Poly],
                 out: dict[tuple[int, ...], Poly], coeff: int) -> None:
    for ia, pa in a.items():
        sa = set(ia)
        for ib, pb in b.items():
            if sa.intersection(ib):
                continue
            key = tuple(sorted(ia + ib))
            term = pa * pb
            if _merge_sign(ia, ib) * coeff < 0:
                term = -term
            prev = out.get(key)
            out[key] = term if prev is None else prev + term


def _xi_derivative(P: Multivector, mu: int) -> dict[tuple[int, ...], Poly]:
    out = {}
    for idx, p in P.components.items():
        if mu in idx:
            s = idx.index(mu)
            rest = idx[:s] + idx[s + 1:]
            out[rest] = p if (len(idx) - 1 - s) % 2 == 0 else -p
    return out


def _x_derivative(P: Multivector, mu: int) -> dict[tuple[int, ...], Poly]:
    return {idx: p.partial(mu) for idx, p in P.components.items()}


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket; graded skew: [P,Q] = -(-1)^((p-1)(q-1)) [Q,P]."""
    if P.ring != Q.ring or P.n != Q.n:
        raise ValueError("multivectors over different bases")
    p, q, n = P.degree, Q.degree, P.n
    deg = p + q - 1
    if deg < 0:
        return Multivector.zero(P.ring, n, 0)
    if deg > n:
        return Multivector.zero(P.ring, n, n)
    sign_q = -1 if ((p - 1) * (q - 1)) % 2 else 1
    out: dict[tuple[int, ...], Poly] = {}
    for mu in range(n):
        _wedge_terms(_xi_derivative(P, mu), _x_derivative(Q, mu), out, 1)
        _wedge_terms(_xi_derivative(Q, mu), _x_derivative(P, mu), out, -sign_q)
    return Multivector(P.ring, n, deg, out)


def wedge(P: Multivector, Q: Multivector) -> Multivector:
    out: dict[tuple[int, ...], Poly] = {}
    _wedge_terms(P.components, Q.components, out, 1)
    deg = P.degree + Q.degree
    if deg > P.n:
        return Multivector.zero(P.ring, P.n, P.n)
    return Multivector(P.ring, P.n, deg, out)


def sharp(pi: Multivector, i: int) -> tuple[Poly, ...]:
    """pi^#(dx^i) = sum_mu pi^{i mu} d_mu."""
    return tuple(pi.get((i, mu)) for mu in range(pi.n))


def lie_poisson_bivector(rank: int, constants: Mapping[tuple[int, int], Mapping[int, object]]) -> Multivector:
    """Linear Poisson structure pi^{ij} = sum_k C^k_ij x_k on the dual of a Lie algebra."""
    ring = Ring.base(rank)
    comps = {}
    for (i, j), out in constants.items():
        comps[(i, j)] = sum((ring.var(k) * c for k, c in out.items()), ring.zero())
    return Multivector.bivector(ring, rank, comps)


def all_index_tuples(n: int, degree: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), degree))
