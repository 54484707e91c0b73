"""Fuzzy subsets with exact rational grades, fuzzy points and level cuts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .algebra import CayleyTable

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

Gradelike = Union[Fraction, int, str]


class CarrierMismatch(ValueError):
    pass


def to_rat(value: Gradelike) -> Fraction:
    """Exact rational from an int, Fraction or a string like "7/20" or "0.35".

    Floats are refused: 0.35 as a binary float is not 7/20.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass a string or Fraction")
    return Fraction(value)


def to_grade(value: Gradelike) -> Fraction:
    g = to_rat(value)
    if not ZERO <= g <= ONE:
        raise ValueError(f"grade {g} outside [0, 1]")
    return g


def scaled(grades: Sequence[Fraction], *extra: Fraction) -> tuple[int, list[int], list[int]]:
    """Common denominator D with every value as an integer multiple of 1/D.

    Order comparisons on the integers agree exactly with the rationals.
    """
    D = math.lcm(*(q.denominator for q in grades), *(q.denominator for q in extra))
    return D, [q.numerator * (D // q.denominator) for q in grades], [q.numerator * (D // q.denominator) for q in extra]


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Thresholds:
    gamma: Fraction
    delta: Fraction

    def __init__(self, gamma: Gradelike, delta: Gradelike):
        g, d = to_rat(gamma), to_rat(delta)
        if not (ZERO <= g < d <= ONE):
            raise ValueError(f"need 0 <= gamma < delta <= 1, got gamma={g}, delta={d}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "delta", d)

    @property
    def balanced(self) -> bool:
        """True when 2*delta == 1 + gamma (the q_delta-hypothesis regime)."""
        return 2 * self.delta == 1 + self.gamma

    def __str__(self):
        return f"(gamma={fmt(self.gamma)}, delta={fmt(self.delta)})"


CLASSIC = Thresholds(0, 1)
IN_IN_OR_Q = Thresholds(0, HALF)


@dataclass(frozen=True)
class FuzzySubset:
    table: CayleyTable
    grades: tuple[Fraction, ...]

    def __init__(self, table: CayleyTable, grades: Iterable[Gradelike]):
        gs = tuple(to_grade(g) for g in grades)
        if len(gs) != table.n:
            raise ValueError(f"expected {table.n} grades, got {len(gs)}")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "grades", gs)

    def __call__(self, x: int) -> Fraction:
        return self.grades[x]

    def __len__(self):
        return len(self.grades)

    def image(self) -> frozenset[Fraction]:
        return frozenset(self.grades)

    def reversed(self) -> "FuzzySubset":
        return FuzzySubset(self.table, self.grades[::-1])

    def by_label(self) -> dict[str, Fraction]:
        return {self.table.labels[i]: g for i, g in enumerate(self.grades)}

    def __str__(self):
        return "{" + ", ".join(f"{lab}: {fmt(g)}" for lab, g in self.by_label().items()) + "}"


def constant(T: CayleyTable, c: Gradelike) -> FuzzySubset:
    return FuzzySubset(T, [c] * T.n)


def constant_one(T: CayleyTable) -> FuzzySubset:
    return constant(T, 1)


def characteristic(T: CayleyTable, A: Iterable[int]) -> FuzzySubset:
    A = set(A)
    return FuzzySubset(T, [ONE if x in A else ZERO for x in T.elements])


def _same_carrier(subsets: Sequence[FuzzySubset]) -> CayleyTable:
    if not subsets:
        raise ValueError("need a nonempty family")
    T = subsets[0].table
    for s in subsets[1:]:
        if s.table != T:
            raise CarrierMismatch("fuzzy subsets live on different carriers")
    return T


def meet(*subsets: FuzzySubset) -> FuzzySubset:
    """Pointwise min; with more than two arguments this is the family meet."""
    T = _same_carrier(subsets)
    return FuzzySubset(T, [min(s.grades[x] for s in subsets) for x in T.elements])


def join(*subsets: FuzzySubset) -> FuzzySubset:
    T = _same_carrier(subsets)
    return FuzzySubset(T, [max(s.grades[x] for s in subsets) for x in T.elements])


def meet_family(family: Iterable[FuzzySubset]) -> FuzzySubset:
    return meet(*family)


def join_family(family: Iterable[FuzzySubset]) -> FuzzySubset:
    return join(*family)


def product(mu: FuzzySubset, nu: FuzzySubset) -> FuzzySubset:
    """Sup-min product: sup over x = yz of mu(y) ^ nu(z); 0 when x has no factorization."""
    T = _same_carrier([mu, nu])
    out = [ZERO] * T.n
    seen = [False] * T.n
    for y in T.elements:
        row = T.op[y]
        my = mu.grades[y]
        for z in T.elements:
            x = row[z]
            v = min(my, nu.grades[z])
            if not seen[x] or v > out[x]:
                out[x] = v
                seen[x] = True
    return FuzzySubset(T, out)


# --- fuzzy points --------------------------------------------------------

@dataclass(frozen=True)
class FuzzyPoint:
    support: int
    value: Fraction

    def __init__(self, support: int, value: Gradelike):
        v = to_rat(value)
        if not ZERO < v <= ONE:
            raise ValueError(f"fuzzy point value {v} outside (0, 1]")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "value", v)


class Relation(enum.Enum):
    IN_GAMMA = "in"
    Q_DELTA = "q"
    IN_OR_Q = "in-or-q"


def belongs(grade: Fraction, t: Fraction, th: Thresholds) -> bool:
    return grade >= t > th.gamma


def quasi_coincident(grade: Fraction, t: Fraction, th: Thresholds) -> bool:
    return grade + t > 2 * th.delta


def rel(p: FuzzyPoint, mu: FuzzySubset, th: Thresholds, which: Relation | str = Relation.IN_OR_Q) -> bool:
    which = Relation(which)
    g = mu.grades[p.support]
    if which is Relation.IN_GAMMA:
        return belongs(g, p.value, th)
    if which is Relation.Q_DELTA:
        return quasi_coincident(g, p.value, th)
    return belongs(g, p.value, th) or quasi_coincident(g, p.value, th)


# --- level cuts ----------------------------------------------------------

class Cut(enum.Enum):
    IN_GAMMA = "in-gamma"      # {x : mu(x) >= r > gamma}
    Q_DELTA = "q-delta"        # {x : mu(x) + r > 2 delta}
    COMBINED = "combined"      # union of the two above
    UPPER = "upper"            # {x : mu(x) >= r}
    SUPPORT_GAMMA = "support"  # {x : mu(x) > gamma}, r ignored


def level(mu: FuzzySubset, th: Thresholds, r: Gradelike, kind: Cut | str) -> frozenset[int]:
    kind = Cut(kind)
    r = to_rat(r)
    g = mu.grades
    xs = mu.table.elements
    if kind is Cut.IN_GAMMA:
        return frozenset(x for x in xs if belongs(g[x], r, th))
    if kind is Cut.Q_DELTA:
        return frozenset(x for x in xs if quasi_coincident(g[x], r, th))
    if kind is Cut.COMBINED:
        return frozenset(x for x in xs if belongs(g[x], r, th) or quasi_coincident(g[x], r, th))
    if kind is Cut.UPPER:
        return frozenset(x for x in xs if g[x] >= r)
    return frozenset(x for x in xs if g[x] > th.gamma)


def critical_thresholds(mu: FuzzySubset, th: Thresholds) -> list[Fraction]:
    """Every value at which some level cut can change, plus midpoints of the gaps.

    Between two consecutive entries all cut kinds are constant, so testing the
    list certifies a statement quantified over every r in [0, 1].
    """
    img = mu.image()
    base = {th.gamma, th.delta, ONE} | set(img) | {2 * th.delta - v for v in img}
    base = sorted({min(ONE, max(ZERO, v)) for v in base})
    mids = [(a + b) / 2 for a, b in zip(base, base[1:])]
    return sorted(set(base) | set(mids))
