"""Crisp ideal classes of a finite LA-semigroup."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import CayleyTable, SizeOutOfRange

MAX_SUBSET_ORDER = 12


class IdealKind(enum.Enum):
    SUBSEMIGROUP = "subsemigroup"
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"
    BI = "bi"
    GENERALIZED_BI = "generalized-bi"
    QUASI = "quasi"
    INTERIOR = "interior"


NON_QUASI = tuple(k for k in IdealKind if k is not IdealKind.QUASI)


class EmptySubset(ValueError):
    pass


@dataclass(frozen=True)
class ViolationReport:
    """Where a law, inclusion or inequality breaks.

    ``elements`` are the operands in product order (e.g. ``(a, s, b)`` for
    ``(as)b``), ``product`` is the offending element and ``values`` carries
    any grades or bounds needed to re-check the failure.
    """

    condition: str
    elements: tuple[int, ...]
    product: int | None = None
    values: dict[str, Fraction] = field(default_factory=dict)

    def describe(self, T: CayleyTable) -> str:
        els = ", ".join(T.labels[e] for e in self.elements)
        out = f"{self.condition}: elements ({els})"
        if self.product is not None:
            out += f" -> {T.labels[self.product]}"
        if self.values:
            out += " " + " ".join(f"{k}={_fmt(v)}" for k, v in self.values.items())
        return out


def _fmt(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _subsemigroup(T, A):
    for a in sorted(A):
        for b in sorted(A):
            if T.op[a][b] not in A:
                return ViolationReport("A^2 in A", (a, b), T.op[a][b])
    return None


def _left(T, A):
    for s in T.elements:
        for a in sorted(A):
            if T.op[s][a] not in A:
                return ViolationReport("SA in A", (s, a), T.op[s][a])
    return None


def _right(T, A):
    for a in sorted(A):
        for s in T.elements:
            if T.op[a][s] not in A:
                return ViolationReport("AS in A", (a, s), T.op[a][s])
    return None


def _bi_product(T, A):
    m = T.op
    for a in sorted(A):
        for s in T.elements:
            for b in sorted(A):
                if m[m[a][s]][b] not in A:
                    return ViolationReport("(AS)A in A", (a, s, b), m[m[a][s]][b])
    return None


def _interior_product(T, A):
    m = T.op
    for a in T.elements:
        for c in sorted(A):
            for b in T.elements:
                if m[m[a][c]][b] not in A:
                    return ViolationReport("(SA)S in A", (a, c, b), m[m[a][c]][b])
    return None


def _quasi(T, A):
    m = T.op
    AS = {}
    for a in sorted(A):
        for s in T.elements:
            AS.setdefault(m[a][s], (a, s))
    SA = {}
    for s in T.elements:
        for a in sorted(A):
            SA.setdefault(m[s][a], (s, a))
    for x in sorted(set(AS) & set(SA)):
        if x not in A:
            return ViolationReport("AS & SA in A", AS[x] + SA[x], x)
    return None


_CHECKS = {
    IdealKind.SUBSEMIGROUP: (_subsemigroup,),
    IdealKind.LEFT: (_left,),
    IdealKind.RIGHT: (_right,),
    IdealKind.TWO_SIDED: (_left, _right),
    IdealKind.BI: (_subsemigroup, _bi_product),
    IdealKind.GENERALIZED_BI: (_bi_product,),
    IdealKind.QUASI: (_quasi,),
    IdealKind.INTERIOR: (_subsemigroup, _interior_product),
}


def is_crisp(T: CayleyTable, A: Iterable[int], kind: IdealKind | str) -> ViolationReport | None:
    """None if the nonempty subset A belongs to the ideal class, else the first violation."""
    A = frozenset(A)
    if not A:
        raise EmptySubset("ideal classes are defined for nonempty subsets only")
    if not A <= set(T.elements):
        raise ValueError(f"subset {sorted(A)} not contained in carrier of size {T.n}")
    for check in _CHECKS[IdealKind(kind)]:
        w = check(T, A)
        if w is not None:
            return w
    return None


def nonempty_subsets(n: int):
    for r in range(1, n + 1):
        for c in itertools.combinations(range(n), r):
            yield frozenset(c)


def enumerate_crisp(T: CayleyTable, kind: IdealKind | str) -> list[frozenset[int]]:
    """All nonempty subsets of the given class, sorted by (size, elements)."""
    if T.n > MAX_SUBSET_ORDER:
        raise SizeOutOfRange(f"subset scan limited to order {MAX_SUBSET_ORDER}")
    kind = IdealKind(kind)
    return [A for A in nonempty_subsets(T.n) if is_crisp(T, A, kind) is None]
