"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` maps exponent tuples to :class:`fractions.Fraction`
coefficients.  Zero coefficients are never stored, so two polynomials over the
same ring are equal exactly when their term dictionaries are equal.

Monomials are ordered graded-lexicographically; this order is used for
printing and for the wire form, so serialized output is bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

#: Degree of the zero polynomial.
NEG_INF = float("-inf")


class RingMismatchError(ValueError):
    """Raised when polynomials over different rings are combined."""


@dataclass(frozen=True)
class Ring:
    """Polynomial ring over Q, identified by its variable names."""

    names: tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.names)

    @classmethod
    def base(cls, n: int, with_t: bool = False) -> "Ring":
        """Coordinates ``x1..xn``, optionally followed by the parameter ``t``."""
        names = tuple(f"x{i + 1}" for i in range(n))
        if with_t:
            names += ("t",)
        return cls(names)

    @property
    def has_t(self) -> bool:
        return bool(self.names) and self.names[-1] == "t"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: Scalar) -> "Poly":
        return Poly(self, {(0,) * self.nvars: Fraction(c)})

    def var(self, i: int, power: int = 1) -> "Poly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        e = [0] * self.nvars
        e[i] = power
        return Poly(self, {tuple(e): Fraction(1)})

    def monomial(self, exps: Sequence[int], c: Scalar = 1) -> "Poly":
        if len(exps) != self.nvars:
            raise RingMismatchError(f"exponent length {len(exps)} != {self.nvars}")
        return Poly(self, {tuple(exps): Fraction(c)})

    def monomials_up_to(self, degree: int, nvars: int | None = None) -> list[Exponent]:
        """All exponents of total degree <= ``degree`` in the first ``nvars``
        variables (remaining exponents zero), graded-lex descending."""
        nv = self.nvars if nvars is None else nvars
        out: list[Exponent] = []

        pad = (0,) * (self.nvars - nv)

        def rec(prefix: tuple[int, ...], left: int, remaining: int) -> None:
            if remaining == 0:
                if left == 0:
                    out.append(prefix + pad)
                return
            for p in range(left, -1, -1):
                rec(prefix + (p,), left - p, remaining - 1)

        for d in range(degree, -1, -1):
            rec((), d, nv)
        return out

    def extended(self) -> "Ring":
        """This ring with ``t`` appended (idempotent)."""
        return self if self.has_t else Ring(self.names + ("t",))


def grlex_key(e: Exponent) -> tuple:
    return (sum(e), e)


class Poly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, Scalar] | None = None):
        self.ring = ring
        clean: dict[Exponent, Fraction] = {}
        if terms:
            n = ring.nvars
            for e, c in terms.items():
                if len(e) != n:
                    raise RingMismatchError(f"exponent {e} has length {len(e)}, ring has {n}")
                if c:
                    clean[e] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict[Exponent, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> float | int:
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> float | int:
        if not self.terms:
            return NEG_INF
        return max(e[i] for e in self.terms)

    def base_degree(self, n: int) -> float | int:
        """Total degree in the first ``n`` variables."""
        if not self.terms:
            return NEG_INF
        return max(sum(e[:n]) for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if other.ring != self.ring:
            raise RingMismatchError(f"ring {self.ring.names} vs {other.ring.names}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        if not c:
            return Poly._raw(self.ring, {})
        c = Fraction(c)
        return Poly._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Poly._raw(self.ring, {})
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def partial(self, i: int) -> "Poly":
        if not 0 <= i < self.ring.nvars:
            raise IndexError(f"variable index {i} out of range for {self.ring.nvars} variables")
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            p = e[i]
            if p:
                ne = e[:i] + (p - 1,) + e[i + 1:]
                out[ne] = c * p
        return Poly._raw(self.ring, out)

    # -- ring changes --------------------------------------------------
    def extend(self, ring: Ring) -> "Poly":
        """Embed into a ring whose variable list starts with ours."""
        if ring == self.ring:
            return self
        k = self.ring.nvars
        if ring.names[:k] != self.ring.names:
            raise RingMismatchError(f"cannot embed {self.ring.names} into {ring.names}")
        pad = (0,) * (ring.nvars - k)
        return Poly._raw(ring, {e + pad: c for e, c in self.terms.items()})

    def split_last(self, base: Ring) -> dict[int, "Poly"]:
        """Decompose by powers of the last variable; coefficients live in ``base``."""
        if base.names != self.ring.names[:-1]:
            raise RingMismatchError(f"{base.names} is not {self.ring.names} minus its last variable")
        out: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            out.setdefault(e[-1], {})[e[:-1]] = c
        return {p: Poly._raw(base, d) for p, d in sorted(out.items())}

    def substitute_last(self, value: Scalar, base: Ring) -> "Poly":
        total = base.zero()
        for p, q in self.split_last(base).items():
            total = total + q.scale(Fraction(value) ** p)
        return total

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(point, e):
                if p:
                    v *= Fraction(x) ** p
            total += v
        return total

    # -- comparison / display -----------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.ring.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (n if p == 1 else f"{n}^{p}") for n, p in zip(self.ring.names, e) if p
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c) if c.denominator == 1 else f"({c})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_scale(p: Poly, c: Scalar) -> Poly:
    return p.scale(c)


def poly_partial(p: Poly, var_index: int) -> Poly:
    return p.partial(var_index)


def poly_sum(polys: Iterable[Poly], ring: Ring) -> Poly:
    total = ring.zero()
    for p in polys:
        total = total + p
    return total


# -- wire form -------------------------------------------------------------

def fraction_to_wire(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def fraction_from_wire(s: str) -> Fraction:
    if not isinstance(s, str) or s.count("/") != 1:
        raise ValueError(f"coefficient must be a 'num/den' string, got {s!r}")
    num, den = s.split("/")
    d = int(den)
    if d <= 0:
        raise ValueError(f"denominator must be positive in {s!r}")
    return Fraction(int(num), d)


def poly_to_wire(p: Poly) -> list[dict]:
    return [{"e": list(e), "c": fraction_to_wire(c)} for e, c in p.sorted_terms()]


def poly_from_wire(data, ring: Ring) -> Poly:
    if not isinstance(data, list):
        raise ValueError("polynomial wire form must be a list of terms")
    terms: dict[Exponent, Fraction] = {}
    for term in data:
        if not isinstance(term, dict) or set(term) != {"e", "c"}:
            raise ValueError(f"malformed term {term!r}")
        e = tuple(term["e"])
        if len(e) != ring.nvars or any((not isinstance(x, int)) or x < 0 for x in e):
            raise ValueError(f"exponent {list(e)} does not fit ring {ring.names}")
        c = fraction_from_wire(term["c"])
        if c == 0:
            raise ValueError("zero coefficients are not allowed in the wire form")
        if e in terms:
            raise ValueError(f"duplicate monomial {list(e)}")
        terms[e] = c
    return Poly(ring, terms)
