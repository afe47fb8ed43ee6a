"""Exception hierarchy shared by every module."""

from __future__ import annotations

from .poly import RingMismatchError


class AlgebroidError(Exception):
    """Base class for library errors."""


class DimensionMismatchError(AlgebroidError, ValueError):
    """Structure arrays, sections or cochains have inconsistent shapes."""


class ArityError(AlgebroidError, ValueError):
    """An operation received the wrong number of arguments or a wrong degree."""


class AxiomError(AlgebroidError):
    """A constructor was given data that violates the Lie algebroid axioms."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"Lie algebroid axioms fail: {report.summary()}")


class WireFormatError(AlgebroidError, ValueError):
    """A JSON document does not follow the canonical wire form."""


class SliceNotClosedError(AlgebroidError):
    """The coboundary maps a slice basis element outside the next slice."""

    def __init__(self, degree: int, element, escaping):
        self.degree = degree
        self.element = element
        self.escaping = escaping
        super().__init__(
            f"slice not closed: delta of degree-{degree} basis element {element} "
            f"has term {escaping} outside the slice"
        )


__all__ = [
    "AlgebroidError",
    "ArityError",
    "AxiomError",
    "DimensionMismatchError",
    "RingMismatchError",
    "SliceNotClosedError",
    "WireFormatError",
]
