"""Canonical JSON wire forms.

Every ``*_to_wire`` output is deterministic (graded-lex terms, sorted
indices) so that ``dumps(to_wire(from_wire(x)))`` canonicalizes a document.
Indices are 0-based.  Parsers are strict and raise :class:`WireFormatError`.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Any

from .deformation import MultiDerivation, Slice
from .errors import DimensionMismatchError, WireFormatError
from .jet import JetCochain, JetSection
from .model import LieAlgebroid
from .multivector import Multivector
from .poly import Poly, Ring, poly_from_wire, poly_to_wire


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise WireFormatError(msg)


def _keys(obj: Any, required: set[str], optional: set[str] = frozenset(), what: str = "object") -> None:
    _require(isinstance(obj, dict), f"{what} must be a JSON object")
    missing = required - set(obj)
    extra = set(obj) - required - set(optional)
    _require(not missing, f"{what} is missing keys {sorted(missing)}")
    _require(not extra, f"{what} has unknown keys {sorted(extra)}")


def _int(x: Any, lo: int, hi: int, what: str) -> int:
    _require(isinstance(x, int) and not isinstance(x, bool), f"{what} must be an integer")
    _require(lo <= x < hi, f"{what} = {x} out of range [{lo}, {hi})")
    return x


def _poly(data: Any, ring: Ring) -> Poly:
    try:
        return poly_from_wire(data, ring)
    except ValueError as exc:
        raise WireFormatError(str(exc)) from None


def _ring(base_dim: int, t_extended: bool) -> Ring:
    return Ring.base(base_dim, with_t=t_extended)


# -- algebroids ------------------------------------------------------------

def algebroid_to_wire(A: LieAlgebroid) -> dict:
    br = []
    for i, j in combinations(range(A.rank), 2):
        out = [{"k": k, "poly": poly_to_wire(A.structure[k][i][j])}
               for k in range(A.rank) if not A.structure[k][i][j].is_zero()]
        if out:
            br.append({"i": i, "j": j, "out": out})
    anchor = []
    for i in range(A.rank):
        out = [{"mu": mu, "poly": poly_to_wire(A.anchor[mu][i])}
               for mu in range(A.base_dim) if not A.anchor[mu][i].is_zero()]
        if out:
            anchor.append({"i": i, "out": out})
    doc = {"name": A.name, "base_dim": A.base_dim, "rank": A.rank, "bracket": br, "anchor": anchor}
    if A.ring.has_t:
        doc["t_extended"] = True
    return doc


def algebroid_from_wire(doc: Any) -> LieAlgebroid:
    _keys(doc, {"base_dim", "rank", "bracket", "anchor"}, {"name", "t_extended"}, "algebroid")
    n = _int(doc["base_dim"], 0, 64, "base_dim")
    r = _int(doc["rank"], 1, 64, "rank")
    name = doc.get("name", "")
    _require(isinstance(name, str), "name must be a string")
    t_ext = doc.get("t_extended", False)
    _require(isinstance(t_ext, bool), "t_extended must be a boolean")
    ring = _ring(n, t_ext)
    z = ring.zero()
    st = [[[z] * r for _ in range(r)] for _ in range(r)]
    _require(isinstance(doc["bracket"], list), "bracket must be a list")
    seen = set()
    for entry in doc["bracket"]:
        _keys(entry, {"i", "j", "out"}, what="bracket entry")
        i, j = _int(entry["i"], 0, r, "i"), _int(entry["j"], 0, r, "j")
        _require(i < j, f"bracket entries must have i < j, got ({i}, {j})")
        _require((i, j) not in seen, f"duplicate bracket entry ({i}, {j})")
        seen.add((i, j))
        _require(isinstance(entry["out"], list), "out must be a list")
        ks = set()
        for term in entry["out"]:
            _keys(term, {"k", "poly"}, what="bracket output")
            k = _int(term["k"], 0, r, "k")
            _require(k not in ks, f"duplicate output k = {k} in bracket ({i}, {j})")
            ks.add(k)
            p = _poly(term["poly"], ring)
            st[k][i][j] = p
            st[k][j][i] = -p
    an = [[z] * r for _ in range(n)]
    _require(isinstance(doc["anchor"], list), "anchor must be a list")
    seen_i = set()
    for entry in doc["anchor"]:
        _keys(entry, {"i", "out"}, what="anchor entry")
        i = _int(entry["i"], 0, r, "i")
        _require(i not in seen_i, f"duplicate anchor entry i = {i}")
        seen_i.add(i)
        _require(isinstance(entry["out"], list), "out must be a list")
        mus = set()
        for term in entry["out"]:
            _keys(term, {"mu", "poly"}, what="anchor output")
            mu = _int(term["mu"], 0, n, "mu")
            _require(mu not in mus, f"duplicate mu = {mu} in anchor {i}")
            mus.add(mu)
            an[mu][i] = _poly(term["poly"], ring)
    return LieAlgebroid(n, r, tuple(tuple(tuple(row) for row in m) for m in st),
                        tuple(tuple(row) for row in an), name, ring)


# -- cochains --------------------------------------------------------------

def cochain_to_wire(D: MultiDerivation, jet: bool = False) -> dict:
    coeffs = [{"idx": list(idx), "m": m, "poly": poly_to_wire(p)}
              for idx, v in D.coeffs.items() for m, p in enumerate(v) if not p.is_zero()]
    symbol = [{"idx": list(idx), "mu": mu, "poly": poly_to_wire(p)}
              for idx, v in D.symbol.items() for mu, p in enumerate(v) if not p.is_zero()]
    doc = {"k": D.k, "coeffs": coeffs, "symbol": symbol}
    if jet:
        doc["kind"] = "jet"
    return doc


def _idx(data: Any, length: int, rank: int) -> tuple[int, ...]:
    _require(isinstance(data, list) and len(data) == length, f"idx must be a list of length {length}")
    idx = tuple(_int(i, 0, rank, "index") for i in data)
    _require(all(a < b for a, b in zip(idx, idx[1:])), f"idx {list(idx)} must be strictly increasing")
    return idx


def cochain_from_wire(doc: Any, A: LieAlgebroid) -> MultiDerivation:
    """Parse a cochain for A (a ``"kind": "jet"`` tag is accepted and ignored)."""
    _keys(doc, {"k", "coeffs", "symbol"}, {"kind"}, "cochain")
    _require(doc.get("kind", "jet") == "jet", "kind must be 'jet' when present")
    k = _int(doc["k"], 0, A.rank + 2, "k")
    r, n, ring = A.rank, A.base_dim, A.ring
    coeffs: dict[tuple[int, ...], list[Poly]] = {}
    symbol: dict[tuple[int, ...], list[Poly]] = {}
    _require(isinstance(doc["coeffs"], list) and isinstance(doc["symbol"], list), "coeffs/symbol must be lists")
    for term in doc["coeffs"]:
        _keys(term, {"idx", "m", "poly"}, what="coefficient entry")
        idx = _idx(term["idx"], k, r)
        m = _int(term["m"], 0, r, "m")
        row = coeffs.setdefault(idx, [None] * r)
        _require(row[m] is None, f"duplicate coefficient {list(idx)}[{m}]")
        row[m] = _poly(term["poly"], ring)
    if doc["symbol"]:
        _require(k >= 1 and n >= 1, "this cochain cannot carry a symbol")
    for term in doc["symbol"]:
        _keys(term, {"idx", "mu", "poly"}, what="symbol entry")
        idx = _idx(term["idx"], k - 1, r)
        mu = _int(term["mu"], 0, n, "mu")
        row = symbol.setdefault(idx, [None] * n)
        _require(row[mu] is None, f"duplicate symbol {list(idx)}[{mu}]")
        row[mu] = _poly(term["poly"], ring)
    z = ring.zero()
    fill = lambda row: tuple(z if p is None else p for p in row)  # noqa: E731
    try:
        return MultiDerivation(k, r, n, ring, {i: fill(v) for i, v in coeffs.items()},
                               {i: fill(v) for i, v in symbol.items()})
    except DimensionMismatchError as exc:
        raise WireFormatError(str(exc)) from None


def jet_cochain_to_wire(d: JetCochain) -> dict:
    return cochain_to_wire(d.body, jet=True)


def jet_cochain_from_wire(doc: Any, A: LieAlgebroid) -> JetCochain:
    return JetCochain(cochain_from_wire(doc, A))


# -- sections, jets, endomorphisms, multivectors, slices -------------------

def section_to_wire(u) -> list:
    return [poly_to_wire(p) for p in u]


def section_from_wire(data: Any, A: LieAlgebroid) -> tuple[Poly, ...]:
    _require(isinstance(data, list) and len(data) == A.rank, f"section must be a list of {A.rank} polynomials")
    return tuple(_poly(p, A.ring) for p in data)


def vector_field_to_wire(v) -> list:
    return [poly_to_wire(p) for p in v]


def jet_section_to_wire(mu: JetSection) -> dict:
    theta = [{"k": k, "mu": m, "poly": poly_to_wire(p)}
             for k, row in enumerate(mu.theta) for m, p in enumerate(row) if not p.is_zero()]
    return {"u": section_to_wire(mu.u), "theta": theta}


def jet_section_from_wire(doc: Any, A: LieAlgebroid) -> JetSection:
    _keys(doc, {"u", "theta"}, what="jet section")
    u = section_from_wire(doc["u"], A)
    theta = [[None] * A.base_dim for _ in range(A.rank)]
    _require(isinstance(doc["theta"], list), "theta must be a list")
    for term in doc["theta"]:
        _keys(term, {"k", "mu", "poly"}, what="theta entry")
        k, mu = _int(term["k"], 0, A.rank, "k"), _int(term["mu"], 0, A.base_dim, "mu")
        _require(theta[k][mu] is None, f"duplicate theta entry ({k}, {mu})")
        theta[k][mu] = _poly(term["poly"], A.ring)
    z = A.ring.zero()
    return JetSection(u, tuple(tuple(z if p is None else p for p in row) for row in theta))


def endomorphism_to_wire(N) -> dict:
    return {"matrix": [[poly_to_wire(p) for p in row] for row in N]}


def endomorphism_from_wire(doc: Any, A: LieAlgebroid) -> tuple[tuple[Poly, ...], ...]:
    """``{"matrix": [[poly]]}`` with ``matrix[k][i]`` the k-th component of N e_i."""
    _keys(doc, {"matrix"}, what="endomorphism")
    rows = doc["matrix"]
    _require(isinstance(rows, list) and len(rows) == A.rank, f"matrix must have {A.rank} rows")
    out = []
    for row in rows:
        _require(isinstance(row, list) and len(row) == A.rank, f"matrix rows must have {A.rank} entries")
        out.append(tuple(_poly(p, A.ring) for p in row))
    return tuple(out)


def multivector_to_wire(P: Multivector) -> dict:
    return {"n": P.n, "degree": P.degree,
            "components": [{"idx": list(idx), "poly": poly_to_wire(p)} for idx, p in P.components.items()]}


def multivector_from_wire(doc: Any) -> Multivector:
    _keys(doc, {"n", "degree", "components"}, what="multivector")
    n = _int(doc["n"], 0, 64, "n")
    p = _int(doc["degree"], 0, n + 1, "degree")
    ring = Ring.base(n)
    comps = {}
    _require(isinstance(doc["components"], list), "components must be a list")
    for term in doc["components"]:
        _keys(term, {"idx", "poly"}, what="multivector component")
        idx = _idx(term["idx"], p, n)
        _require(idx not in comps, f"duplicate component {list(idx)}")
        comps[idx] = _poly(term["poly"], ring)
    return Multivector(ring, n, p, comps)


def slice_from_wire(doc: Any) -> Slice:
    _keys(doc, {"max_poly_degree"}, {"symbol_shift"}, "slice")
    shift = doc.get("symbol_shift")
    return Slice(_int(doc["max_poly_degree"], 0, 64, "max_poly_degree"),
                 None if shift is None else _int(shift, 0, 64, "symbol_shift"))


def detect_kind(doc: Any) -> str:
    """Which wire form a document uses (for convert)."""
    if isinstance(doc, dict):
        keys = set(doc)
        if {"base_dim", "rank", "bracket", "anchor"} <= keys:
            return "algebroid"
        if {"k", "coeffs", "symbol"} <= keys:
            return "jet" if doc.get("kind") == "jet" else "cochain"
        if keys == {"u", "theta"}:
            return "jet_section"
        if keys == {"matrix"}:
            return "endomorphism"
        if {"n", "degree", "components"} == keys:
            return "multivector"
        if "max_poly_degree" in keys:
            return "slice"
    raise WireFormatError("unrecognized document kind")
