"""(in_gamma, in_gamma or q_delta)-fuzzy ideal classes.

Two deciders per class, kept independent on purpose:

* ``check_threshold`` evaluates closed-form inequalities such as
  ``mu(ab) v gamma >= mu(a) ^ mu(b) ^ delta``.
* ``check_pointwise`` works from the fuzzy-point definition. For each element
  tuple it computes the exact set of point values s = t ^ r that satisfy the
  hypotheses but break the conclusion; the class fails iff some such set is
  nonempty. No grid over t, r is involved.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from .algebra import CayleyTable
from .crisp import IdealKind, ViolationReport
from .fuzzy import (
    CLASSIC,
    IN_IN_OR_Q,
    ONE,
    FuzzyPoint,
    FuzzySubset,
    Gradelike,
    Relation,
    Thresholds,
    constant_one,
    product,
    rel,
    scaled,
    to_grade,
)


class PreconditionError(ValueError):
    pass


class PointDefMode(enum.Enum):
    IN_GAMMA = "in-gamma"  # hypotheses a_t in_gamma mu
    Q_DELTA = "q-delta"    # hypotheses a_t q_delta mu, needs 2 delta = 1 + gamma


@dataclass(frozen=True)
class FuzzyIdealVerdict:
    holds: bool
    witness: ViolationReport | None = None
    vacuous: bool = False

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self):
        return self.holds


HOLDS = FuzzyIdealVerdict(True)


class Condition(NamedTuple):
    """One universally quantified implication.

    ``hyps`` index into the element tuple: those positions carry the fuzzy
    point hypotheses; the others range freely over S.
    """

    name: str
    arity: int
    hyps: tuple[int, ...]


SUB = Condition("subsemigroup", 2, (0, 1))        # (a, b)    -> ab
LEFT = Condition("left", 2, (1,))                 # (s, a)    -> sa
RIGHT = Condition("right", 2, (0,))               # (a, s)    -> as
GBI = Condition("generalized-bi", 3, (0, 2))      # (a, s, b) -> (as)b
INTERIOR = Condition("interior", 3, (1,))         # (a, c, b) -> (ac)b

CONDITIONS: dict[IdealKind, tuple[Condition, ...]] = {
    IdealKind.SUBSEMIGROUP: (SUB,),
    IdealKind.LEFT: (LEFT,),
    IdealKind.RIGHT: (RIGHT,),
    IdealKind.TWO_SIDED: (LEFT, RIGHT),
    IdealKind.BI: (SUB, GBI),
    IdealKind.GENERALIZED_BI: (GBI,),
    IdealKind.INTERIOR: (SUB, INTERIOR),
}


def evaluate(T: CayleyTable, cond: Condition, tup: tuple[int, ...]) -> int:
    """The product a condition constrains: ab for arity 2, (xy)z for arity 3."""
    m = T.op
    if cond.arity == 2:
        return m[tup[0]][tup[1]]
    return m[m[tup[0]][tup[1]]][tup[2]]


# --- closed-form thresholds -----------------------------------------------

@lru_cache(maxsize=4096)
def instances(T: CayleyTable, cond: Condition) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """(tuple, hypothesis elements, product) for every element tuple, in lexicographic order."""
    return tuple(
        (tup, tuple(tup[i] for i in cond.hyps), evaluate(T, cond, tup))
        for tup in itertools.product(T.elements, repeat=cond.arity)
    )


def threshold_violations(T: CayleyTable, mu: FuzzySubset, th: Thresholds, kind: IdealKind | str) -> Iterator[ViolationReport]:
    kind = IdealKind(kind)
    if kind is IdealKind.QUASI:
        yield from _quasi_violations(T, mu, th)
        return
    D, g, (gam, dl) = scaled(mu.grades, th.gamma, th.delta)
    for cond in CONDITIONS[kind]:
        for tup, hs, p in instances(T, cond):
            lhs = g[p] if g[p] > gam else gam
            rhs = min(dl, *(g[h] for h in hs))
            if lhs < rhs:
                yield ViolationReport(cond.name, tup, p, {"lhs": Fraction(lhs, D), "rhs": Fraction(rhs, D)})


def _quasi_violations(T, mu, th):
    one = constant_one(T)
    left, right = product(mu, one), product(one, mu)
    for x in T.elements:
        lhs = max(mu(x), th.gamma)
        rhs = min(left(x), right(x), th.delta)
        if lhs < rhs:
            yield ViolationReport(
                "quasi", (x,), x, {"lhs": lhs, "rhs": rhs, "mu*1": left(x), "1*mu": right(x)}
            )


def check_threshold(T: CayleyTable, mu: FuzzySubset, th: Thresholds, kind: IdealKind | str) -> FuzzyIdealVerdict:
    """Decide the class through its inequality form; the witness is the first failing tuple."""
    if mu.table != T:
        raise ValueError("fuzzy subset is not defined on this table")
    w = next(threshold_violations(T, mu, th, kind), None)
    return HOLDS if w is None else FuzzyIdealVerdict(False, w)


# --- fuzzy-point definition via interval emptiness -------------------------

def _failing_interval(hyp_grades, gp, gam, dl, one, mode):
    """Failing (lo, hi] for s = t ^ r plus the hypothesis intervals, or None.

    All arguments are integers on a common scale (``one`` is the scaled 1).
    """
    ivs = []
    for gh in hyp_grades:
        if mode is PointDefMode.IN_GAMMA:
            L, U = gam, gh
        else:
            L, U = max(gam, 2 * dl - gh), one
        if not L < U:
            return None
        ivs.append((L, U))
    lo = max(min(L for L, _ in ivs), gp)
    hi = min(min(U for _, U in ivs), 2 * dl - gp)
    return (lo, hi, ivs) if lo < hi else None


def _point_report(cond, tup, p, found, D):
    lo, hi, ivs = found
    s = hi
    values = {"s": Fraction(s, D), "lo": Fraction(lo, D), "hi": Fraction(hi, D)}
    # the hypothesis with the smallest lower bound takes s, the others their
    # upper bound (>= s), so t ^ r == s
    pick = min(range(len(ivs)), key=lambda k: ivs[k][0])
    for k, (_, U) in enumerate(ivs):
        values[("t", "r")[k]] = Fraction(s if k == pick else U, D)
    return ViolationReport(cond.name, tup, p, values)


def point_violation(
    T: CayleyTable,
    mu: FuzzySubset,
    th: Thresholds,
    cond: Condition,
    tup: tuple[int, ...],
    mode: PointDefMode | str = PointDefMode.IN_GAMMA,
) -> ViolationReport | None:
    """Failing point values for one element tuple, or None if the implication holds there.

    With hypothesis intervals (L_i, U_i] (for in_gamma: (gamma, mu(a)]; for
    q_delta: (max(gamma, 2 delta - mu(a)), 1]) the meet s = t ^ r sweeps
    exactly (min L_i, min U_i]. The conclusion p_s fails iff s > mu(p) and
    s <= 2 delta - mu(p). The reported s is the right end of the failing
    interval, which is always attained.
    """
    mode = PointDefMode(mode)
    D, g, (gam, dl) = scaled(mu.grades, th.gamma, th.delta)
    p = evaluate(T, cond, tup)
    found = _failing_interval([g[tup[i]] for i in cond.hyps], g[p], gam, dl, D, mode)
    return None if found is None else _point_report(cond, tup, p, found, D)


def pointwise_violations(
    T: CayleyTable, mu: FuzzySubset, th: Thresholds, kind: IdealKind | str, mode: PointDefMode | str = PointDefMode.IN_GAMMA
) -> Iterator[ViolationReport]:
    kind, mode = IdealKind(kind), PointDefMode(mode)
    if kind is IdealKind.QUASI:
        raise PreconditionError("fuzzy quasi-ideals have no fuzzy-point definition; use check_threshold")
    if mode is PointDefMode.Q_DELTA and not th.balanced:
        raise PreconditionError(f"q_delta hypotheses need 2*delta == 1 + gamma, got {th}")
    D, g, (gam, dl) = scaled(mu.grades, th.gamma, th.delta)
    for cond in CONDITIONS[kind]:
        for tup, hs, p in instances(T, cond):
            found = _failing_interval([g[h] for h in hs], g[p], gam, dl, D, mode)
            if found is not None:
                yield _point_report(cond, tup, p, found, D)


def check_pointwise(
    T: CayleyTable, mu: FuzzySubset, th: Thresholds, kind: IdealKind | str, mode: PointDefMode | str = PointDefMode.IN_GAMMA
) -> FuzzyIdealVerdict:
    if mu.table != T:
        raise ValueError("fuzzy subset is not defined on this table")
    w = next(pointwise_violations(T, mu, th, kind, mode), None)
    return HOLDS if w is None else FuzzyIdealVerdict(False, w)


def condition_named(name: str) -> Condition:
    for c in (SUB, LEFT, RIGHT, GBI, INTERIOR):
        if c.name == name:
            return c
    raise KeyError(name)


def witness_reproduces(
    T: CayleyTable, mu: FuzzySubset, th: Thresholds, w: ViolationReport, mode: PointDefMode | str | None = None
) -> bool:
    """Re-check a witness against the raw definitions.

    ``mode=None`` treats ``w`` as a threshold witness; otherwise as a fuzzy
    point witness whose t, r, s values are plugged into the point relations.
    """
    g = mu.grades
    if w.condition == "quasi":
        one = constant_one(T)
        x = w.product
        return max(g[x], th.gamma) < min(product(mu, one)(x), product(one, mu)(x), th.delta)
    cond = condition_named(w.condition)
    p = evaluate(T, cond, w.elements)
    if p != w.product:
        return False
    if mode is None:
        return max(g[p], th.gamma) < min(min(g[w.elements[i]] for i in cond.hyps), th.delta)
    mode = PointDefMode(mode)
    hyp_rel = Relation.IN_GAMMA if mode is PointDefMode.IN_GAMMA else Relation.Q_DELTA
    vals = [w.values[n] for n in ("t", "r")[: len(cond.hyps)]]
    for i, v in zip(cond.hyps, vals):
        if not (th.gamma < v <= ONE and rel(FuzzyPoint(w.elements[i], v), mu, th, hyp_rel)):
            return False
    s = min(vals)
    return s == w.values["s"] and not rel(FuzzyPoint(p, s), mu, th, Relation.IN_OR_Q)


# --- constructions and specializations -------------------------------------

def make_step_subset(T: CayleyTable, A: Iterable[int], hi: Gradelike, lo: Gradelike, th: Thresholds) -> FuzzySubset:
    """Grade ``hi`` (>= delta) on A and ``lo`` (<= gamma) elsewhere."""
    hi, lo = to_grade(hi), to_grade(lo)
    if hi < th.delta or lo > th.gamma:
        raise PreconditionError(f"need hi >= delta and lo <= gamma for {th}, got hi={hi}, lo={lo}")
    A = set(A)
    return FuzzySubset(T, [hi if x in A else lo for x in T.elements])


def check_classic(T: CayleyTable, mu: FuzzySubset, kind: IdealKind | str) -> FuzzyIdealVerdict:
    """Ordinary fuzzy ideal classes: the thresholds (0, 1)."""
    return check_threshold(T, mu, CLASSIC, kind)


def check_in_in_or_q(T: CayleyTable, mu: FuzzySubset, kind: IdealKind | str) -> FuzzyIdealVerdict:
    """(in, in or q)-fuzzy classes: the thresholds (0, 1/2)."""
    return check_threshold(T, mu, IN_IN_OR_Q, kind)


def classic_direct(T: CayleyTable, mu: FuzzySubset, kind: IdealKind | str) -> bool:
    """Textbook inequalities without thresholds, e.g. mu(xy) >= mu(x) ^ mu(y)."""
    kind = IdealKind(kind)
    m, g, S = T.op, mu.grades, T.elements
    sub = all(g[m[x][y]] >= min(g[x], g[y]) for x in S for y in S)
    left = all(g[m[x][y]] >= g[y] for x in S for y in S)
    right = all(g[m[x][y]] >= g[x] for x in S for y in S)
    gbi = all(g[m[m[x][y]][z]] >= min(g[x], g[z]) for x in S for y in S for z in S)
    interior = all(g[m[m[x][a]][y]] >= g[a] for x in S for a in S for y in S)
    if kind is IdealKind.QUASI:
        one = constant_one(T)
        l, r = product(mu, one), product(one, mu)
        return all(g[x] >= min(l(x), r(x)) for x in S)
    return {
        IdealKind.SUBSEMIGROUP: sub,
        IdealKind.LEFT: left,
        IdealKind.RIGHT: right,
        IdealKind.TWO_SIDED: left and right,
        IdealKind.BI: sub and gbi,
        IdealKind.GENERALIZED_BI: gbi,
        IdealKind.INTERIOR: sub and interior,
    }[kind]
