"""Verification campaigns: every theorem checked instance by instance on small corpora.

A theorem instance ends in one of three outcomes:

``pass``     hypothesis satisfiable on the instance and the conclusion held
``vacuous``  nothing to check (hypothesis false, every relevant cut empty, ...)
``fail``     a counterexample; always kept in the report
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import (
    CayleyTable,
    EnumMode,
    SizeOutOfRange,
    brute_force_la_semigroups,
    enumerate_la_semigroups,
    random_la_semigroup,
)
from .crisp import NON_QUASI, IdealKind, ViolationReport, is_crisp, nonempty_subsets
from .fuzzy import (
    ONE,
    ZERO,
    Cut,
    FuzzySubset,
    Thresholds,
    characteristic,
    critical_thresholds,
    join_family,
    level,
    meet_family,
    to_rat,
)
from .ideals import (
    FuzzyIdealVerdict,
    PointDefMode,
    PreconditionError,
    check_pointwise,
    check_threshold,
    make_step_subset,
)


class TheoremId(enum.Enum):
    LEVEL_I = "level-i"
    LEVEL_II = "level-ii"
    LEVEL_III = "level-iii"
    LEVEL_IV = "level-iv"
    THRESHOLD_EQUIV = "threshold-equiv"
    CONSTRUCT_IFF = "construct-iff"
    CONSTRUCT_Q = "construct-q"
    CHAR_FN = "char-fn"
    INTERSECT_CLOSURE = "intersect-closure"
    UNION_CLOSURE = "union-closure"
    IDEAL_IMPLIES_INTERIOR = "ideal-implies-interior"
    LEFT_IMPLIES_QUASI = "left-implies-quasi"
    SUPPORT_QUASI = "support-quasi"
    CHAR_FN_QUASI = "char-fn-quasi"


class LevelPart(enum.Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"


class ClosureOp(enum.Enum):
    INTERSECTION = "intersection"
    UNION = "union"


class Implication(enum.Enum):
    IDEAL_IMPLIES_INTERIOR = "ideal-implies-interior"
    LEFT_IMPLIES_QUASI = "left-implies-quasi"
    SUPPORT_QUASI = "support-quasi"
    CHAR_FN_QUASI = "char-fn-quasi"


LEVEL_KINDS = NON_QUASI
CLOSURE_KINDS = {
    ClosureOp.INTERSECTION: (IdealKind.SUBSEMIGROUP, IdealKind.LEFT, IdealKind.RIGHT),
    ClosureOp.UNION: (IdealKind.LEFT, IdealKind.RIGHT),
}

_PARTS = {
    # part: (cut kind, r range as (lo, hi] via a function of th, needs 2 delta = 1 + gamma)
    LevelPart.I: (Cut.IN_GAMMA, lambda th: (th.gamma, th.delta), False),
    LevelPart.II: (Cut.Q_DELTA, lambda th: (th.delta, ONE), True),
    LevelPart.III: (Cut.COMBINED, lambda th: (th.gamma, ONE), True),
    LevelPart.IV: (Cut.UPPER, lambda th: (th.gamma, th.delta), False),
}


@lru_cache(maxsize=1 << 16)
def _crisp(T: CayleyTable, A: frozenset, kind: IdealKind) -> ViolationReport | None:
    return is_crisp(T, A, kind)


def _fail(condition: str, elements=(), product=None, **values) -> FuzzyIdealVerdict:
    return FuzzyIdealVerdict(False, ViolationReport(condition, tuple(elements), product, values))


_PASS = FuzzyIdealVerdict(True)
_VACUOUS = FuzzyIdealVerdict(True, vacuous=True)


@lru_cache(maxsize=1 << 12)
def _cuts_in_range(mu: FuzzySubset, th: Thresholds, part: LevelPart) -> tuple[tuple[Fraction, frozenset], ...]:
    """Nonempty cuts for r over the part's range, one per critical value."""
    cut, rng, _ = _PARTS[part]
    lo, hi = rng(th)
    out = []
    for r in critical_thresholds(mu, th):
        if lo < r <= hi:
            C = level(mu, th, r, cut)
            if C:
                out.append((r, C))
    return tuple(out)


def verify_level_theorem(
    T: CayleyTable, mu: FuzzySubset, th: Thresholds, kind: IdealKind | str, part: LevelPart | str
) -> FuzzyIdealVerdict:
    """Fuzzy class membership <=> every nonempty cut over the part's r-range is a crisp ideal.

    The r-range is certified on ``critical_thresholds`` only; cuts are
    constant between consecutive entries of that list.
    """
    kind, part = IdealKind(kind), LevelPart(part)
    needs_balanced = _PARTS[part][2]
    if needs_balanced and not th.balanced:
        raise PreconditionError(f"part {part.value} needs 2*delta == 1 + gamma, got {th}")
    fuzzy = check_threshold(T, mu, th, kind)
    cuts = _cuts_in_range(mu, th, part)
    cuts_ok, bad = True, None
    for r, C in cuts:
        w = _crisp(T, C, kind)
        if w is not None:
            cuts_ok, bad = False, (r, C, w)
            break
    seen = bool(cuts)
    if fuzzy.holds == cuts_ok:
        return _PASS if seen else _VACUOUS
    if bad is not None:
        r, C, w = bad
        return _fail(f"level-{part.value}: fuzzy class holds but cut is not {kind.value}", sorted(C), w.product, r=r)
    fw = fuzzy.witness
    return _fail(f"level-{part.value}: all cuts are {kind.value} but fuzzy class fails", fw.elements, fw.product, **fw.values)


def verify_closure(
    T: CayleyTable, subsets: Sequence[FuzzySubset], th: Thresholds, kind: IdealKind | str, op: ClosureOp | str
) -> FuzzyIdealVerdict:
    kind, op = IdealKind(kind), ClosureOp(op)
    if kind not in CLOSURE_KINDS[op]:
        raise PreconditionError(f"{op.value} closure is not claimed for {kind.value}")
    if not subsets:
        raise ValueError("need a nonempty family")
    if not all(check_threshold(T, mu, th, kind).holds for mu in subsets):
        return _VACUOUS
    combined = meet_family(subsets) if op is ClosureOp.INTERSECTION else join_family(subsets)
    v = check_threshold(T, combined, th, kind)
    if v.holds:
        return _PASS
    return _fail(f"{op.value} of passing family fails {kind.value}", v.witness.elements, v.witness.product, **v.witness.values)


def verify_implication(T: CayleyTable, mu: FuzzySubset, th: Thresholds, which: Implication | str) -> FuzzyIdealVerdict:
    which = Implication(which)
    if which is Implication.IDEAL_IMPLIES_INTERIOR:
        if not check_threshold(T, mu, th, IdealKind.TWO_SIDED).holds:
            return _VACUOUS
        v = check_threshold(T, mu, th, IdealKind.INTERIOR)
    elif which is Implication.LEFT_IMPLIES_QUASI:
        if not (check_threshold(T, mu, th, IdealKind.LEFT).holds or check_threshold(T, mu, th, IdealKind.RIGHT).holds):
            return _VACUOUS
        v = check_threshold(T, mu, th, IdealKind.QUASI)
    elif which is Implication.SUPPORT_QUASI:
        if not check_threshold(T, mu, th, IdealKind.QUASI).holds:
            return _VACUOUS
        support = level(mu, th, ZERO, Cut.SUPPORT_GAMMA)
        if not support:
            return _VACUOUS
        w = _crisp(T, support, IdealKind.QUASI)
        v = _PASS if w is None else FuzzyIdealVerdict(False, w)
    else:
        Q = frozenset(x for x in T.elements if mu(x) == ONE)
        if not Q or any(mu(x) not in (ZERO, ONE) for x in T.elements):
            return _VACUOUS
        crisp_ok = _crisp(T, Q, IdealKind.QUASI) is None
        v = check_threshold(T, mu, th, IdealKind.QUASI)
        if crisp_ok == v.holds:
            return _PASS
        if v.witness is not None:
            return _fail("char-fn-quasi: Q is quasi but its characteristic function fails", v.witness.elements, v.witness.product, **v.witness.values)
        return _fail("char-fn-quasi: characteristic function passes but Q is not quasi", sorted(Q))
    if v.holds:
        return _PASS
    return _fail(f"{which.value}: conclusion fails", v.witness.elements, v.witness.product, **v.witness.values)


def verify_construction(T: CayleyTable, A: frozenset, th: Thresholds, kind: IdealKind, hi, lo) -> FuzzyIdealVerdict:
    """A is crisp of the class <=> the step subset (hi on A, lo off A) passes the threshold test."""
    crisp_ok = _crisp(T, A, kind) is None
    v = check_threshold(T, make_step_subset(T, A, hi, lo, th), th, kind)
    if crisp_ok == v.holds:
        return _PASS
    return _fail(f"construct: crisp={crisp_ok} but step subset verdict={v.holds}", sorted(A), hi=to_rat(hi), lo=to_rat(lo))


def verify_construction_q(T: CayleyTable, A: frozenset, th: Thresholds, kind: IdealKind) -> FuzzyIdealVerdict:
    """For 2 delta = 1 + gamma and A crisp: the (delta, gamma) step subset satisfies the q_delta-hypothesis form."""
    if not th.balanced:
        raise PreconditionError(f"needs 2*delta == 1 + gamma, got {th}")
    if _crisp(T, A, kind) is not None:
        return _VACUOUS
    v = check_pointwise(T, make_step_subset(T, A, th.delta, th.gamma, th), th, kind, PointDefMode.Q_DELTA)
    if v.holds:
        return _PASS
    return _fail("construct-q: step subset fails q_delta form", v.witness.elements, v.witness.product, **v.witness.values)


def verify_char_fn(T: CayleyTable, A: frozenset, th: Thresholds, kind: IdealKind) -> FuzzyIdealVerdict:
    crisp_ok = _crisp(T, A, kind) is None
    v = check_threshold(T, characteristic(T, A), th, kind)
    if crisp_ok == v.holds:
        return _PASS
    return _fail(f"char-fn: crisp={crisp_ok} but characteristic verdict={v.holds}", sorted(A))


def verify_threshold_equiv(T: CayleyTable, mu: FuzzySubset, th: Thresholds, kind: IdealKind) -> FuzzyIdealVerdict:
    a = check_threshold(T, mu, th, kind)
    b = check_pointwise(T, mu, th, kind, PointDefMode.IN_GAMMA)
    if a.holds == b.holds:
        return _PASS
    w = a.witness or b.witness
    return _fail(f"threshold={a.holds} pointwise={b.holds}", w.elements, w.product, **w.values)


# --- campaigns -----------------------------------------------------------

class TableMode(enum.Enum):
    EXHAUSTIVE_LE3 = "exhaustive"
    BACKTRACK_SAMPLE = "backtrack-sample"


DEFAULT_THRESHOLDS = (
    ("0", "1/2"),
    ("1/5", "3/10"),
    ("1/5", "2/5"),
    ("3/10", "7/20"),
    ("1/10", "1/5"),
    ("1/2", "3/4"),
)


@dataclass
class CampaignConfig:
    orders: list[int] = field(default_factory=lambda: [1, 2, 3])
    table_mode: TableMode = TableMode.EXHAUSTIVE_LE3
    grade_denominator: int = 20
    mu_samples: int = 20
    threshold_samples: list[Thresholds] = field(default_factory=lambda: [Thresholds(g, d) for g, d in DEFAULT_THRESHOLDS])
    seed: int = 0
    theorems: list[TheoremId] = field(default_factory=lambda: list(TheoremId))
    tables_per_order: int = 50
    families_per_table: int = 2
    implication_samples: int = 2
    attempt_cap: int = 200
    min_instances: int = 100
    validate_enumeration: bool = True

    def __post_init__(self):
        self.table_mode = TableMode(self.table_mode)
        self.theorems = [TheoremId(t) for t in self.theorems]
        self.threshold_samples = [t if isinstance(t, Thresholds) else Thresholds(*t) for t in self.threshold_samples]
        if self.grade_denominator < 1:
            raise ValueError("grade_denominator must be positive")
        if not self.orders:
            raise ValueError("need at least one order")
        if not self.threshold_samples:
            raise ValueError("need at least one threshold pair")
        for n in self.orders:
            if self.table_mode is TableMode.EXHAUSTIVE_LE3 and not 1 <= n <= 3:
                raise SizeOutOfRange(f"exhaustive corpus limited to orders 1..3, got {n}")


@dataclass
class TheoremTally:
    passed: int = 0
    vacuous: int = 0
    failed: int = 0

    def add(self, v: FuzzyIdealVerdict):
        if not v.holds:
            self.failed += 1
        elif v.vacuous:
            self.vacuous += 1
        else:
            self.passed += 1


@dataclass
class Counterexample:
    theorem: TheoremId
    table: CayleyTable
    thresholds: Thresholds | None
    detail: str
    grades: tuple[Fraction, ...] = ()
    kind: str = ""
    witness: ViolationReport | None = None


@dataclass
class CampaignReport:
    config: CampaignConfig
    tables: dict[int, int]
    tallies: dict[TheoremId, TheoremTally]
    counterexamples: list[Counterexample]
    warnings: list[str]

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.tallies.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0


def corpus(cfg: CampaignConfig) -> list[CayleyTable]:
    tables = []
    for n in sorted(set(cfg.orders)):
        if cfg.table_mode is TableMode.EXHAUSTIVE_LE3:
            found = list(enumerate_la_semigroups(n, EnumMode.ALL))
            if cfg.validate_enumeration and [t.flat() for t in found] != [t.flat() for t in brute_force_la_semigroups(n)]:
                raise RuntimeError(f"backtracking enumeration disagrees with brute force at order {n}")
            tables.extend(found)
        else:
            rng = random.Random(f"{cfg.seed}:tables:{n}")
            seen = {}
            for _ in range(cfg.tables_per_order):
                T = random_la_semigroup(n, rng)
                seen.setdefault(T.flat(), T)
            tables.extend(seen[k] for k in sorted(seen))
    return tables


def random_grid_subset(T: CayleyTable, den: int, rng: random.Random) -> FuzzySubset:
    return FuzzySubset(T, [Fraction(rng.randint(0, den), den) for _ in T.elements])


def _grid_between(lo: Fraction, hi: Fraction, den: int, rng: random.Random) -> Fraction:
    """Random grid value in [lo, hi], falling back to an endpoint when the grid misses the range."""
    ks = [k for k in range(den + 1) if lo <= Fraction(k, den) <= hi]
    if not ks:
        return rng.choice((lo, hi))
    return Fraction(rng.choice(ks), den)


def random_step_subset(T, th, kind, den, rng, crisp_sets) -> FuzzySubset:
    A = rng.choice(crisp_sets[kind])
    hi = _grid_between(th.delta, ONE, den, rng)
    lo = _grid_between(ZERO, th.gamma, den, rng)
    return make_step_subset(T, A, hi, lo, th)


def sample_passing(T, th, kinds, den, rng, cap, crisp_sets) -> tuple[FuzzySubset, bool]:
    """Rejection-sample a grid subset passing any of ``kinds``.

    Falls back to a step subset over a crisp ideal once ``cap`` draws fail;
    the flag reports whether the fallback was used.
    """
    for _ in range(cap):
        mu = random_grid_subset(T, den, rng)
        if any(check_threshold(T, mu, th, k).holds for k in kinds):
            return mu, False
    return random_step_subset(T, th, rng.choice(kinds), den, rng, crisp_sets), True


def _table_work(T: CayleyTable, index: int, cfg: CampaignConfig):
    """All theorem instances for one table; returns (tallies, counterexamples, fallbacks)."""
    want = set(cfg.theorems)
    tallies = {t: TheoremTally() for t in TheoremId}
    cex: list[Counterexample] = []
    fallbacks = 0
    den = cfg.grade_denominator
    subsets = list(nonempty_subsets(T.n))
    crisp_sets = {k: [A for A in subsets if _crisp(T, A, k) is None] for k in IdealKind}

    def record(tid, v, th=None, mu=None, kind=None, detail=""):
        tallies[tid].add(v)
        if not v.holds:
            cex.append(Counterexample(tid, T, th, detail, mu.grades if mu is not None else (), kind.value if kind else "", v.witness))

    for ti, th in enumerate(cfg.threshold_samples):
        rng = random.Random(f"{cfg.seed}:{T.n}:{index}:{ti}")
        mus = [random_grid_subset(T, den, rng) for _ in range(cfg.mu_samples)]

        for A in subsets:
            for kind in IdealKind:
                if TheoremId.CONSTRUCT_IFF in want:
                    record(TheoremId.CONSTRUCT_IFF, verify_construction(T, A, th, kind, th.delta, th.gamma), th, kind=kind, detail=f"A={sorted(A)}")
                    hi = _grid_between(th.delta, ONE, den, rng)
                    lo = _grid_between(ZERO, th.gamma, den, rng)
                    record(TheoremId.CONSTRUCT_IFF, verify_construction(T, A, th, kind, hi, lo), th, kind=kind, detail=f"A={sorted(A)}")
                if kind is IdealKind.QUASI:
                    continue
                if TheoremId.CHAR_FN in want:
                    record(TheoremId.CHAR_FN, verify_char_fn(T, A, th, kind), th, kind=kind, detail=f"A={sorted(A)}")
                if TheoremId.CONSTRUCT_Q in want and th.balanced:
                    record(TheoremId.CONSTRUCT_Q, verify_construction_q(T, A, th, kind), th, kind=kind, detail=f"A={sorted(A)}")
            if TheoremId.CHAR_FN_QUASI in want:
                chi = characteristic(T, A)
                record(TheoremId.CHAR_FN_QUASI, verify_implication(T, chi, th, Implication.CHAR_FN_QUASI), th, chi)

        for mu in mus:
            for kind in LEVEL_KINDS:
                if TheoremId.THRESHOLD_EQUIV in want:
                    record(TheoremId.THRESHOLD_EQUIV, verify_threshold_equiv(T, mu, th, kind), th, mu, kind)
                for part, tid in zip(LevelPart, (TheoremId.LEVEL_I, TheoremId.LEVEL_II, TheoremId.LEVEL_III, TheoremId.LEVEL_IV)):
                    if tid not in want or (_PARTS[part][2] and not th.balanced):
                        continue
                    record(tid, verify_level_theorem(T, mu, th, kind, part), th, mu, kind)
            if TheoremId.SUPPORT_QUASI in want:
                record(TheoremId.SUPPORT_QUASI, verify_implication(T, mu, th, Implication.SUPPORT_QUASI), th, mu)

        hyp_kinds = {
            TheoremId.IDEAL_IMPLIES_INTERIOR: (Implication.IDEAL_IMPLIES_INTERIOR, (IdealKind.TWO_SIDED,)),
            TheoremId.LEFT_IMPLIES_QUASI: (Implication.LEFT_IMPLIES_QUASI, (IdealKind.LEFT, IdealKind.RIGHT)),
            TheoremId.SUPPORT_QUASI: (Implication.SUPPORT_QUASI, (IdealKind.QUASI,)),
        }
        for tid, (which, kinds) in hyp_kinds.items():
            if tid not in want:
                continue
            for _ in range(cfg.implication_samples):
                mu, fb = sample_passing(T, th, kinds, den, rng, cfg.attempt_cap, crisp_sets)
                fallbacks += fb
                record(tid, verify_implication(T, mu, th, which), th, mu)

        for op, tid in ((ClosureOp.INTERSECTION, TheoremId.INTERSECT_CLOSURE), (ClosureOp.UNION, TheoremId.UNION_CLOSURE)):
            if tid not in want:
                continue
            for kind in CLOSURE_KINDS[op]:
                for _ in range(cfg.families_per_table):
                    size = rng.randint(1, 3)
                    family = []
                    for _ in range(size):
                        mu, fb = sample_passing(T, th, (kind,), den, rng, cfg.attempt_cap, crisp_sets)
                        fallbacks += fb
                        family.append(mu)
                    v = verify_closure(T, family, th, kind, op)
                    record(tid, v, th, family[0], kind, detail=f"family of {size}")
    return tallies, cex, fallbacks


def run_campaign(cfg: CampaignConfig, workers: int = 1) -> CampaignReport:
    """Deterministic in (cfg, seed): every random draw is seeded per (table, thresholds) item."""
    tables = corpus(cfg)
    items = [(T, i, cfg) for i, T in enumerate(tables)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_table_work_star, items, chunksize=4))
    else:
        results = [_table_work(*it) for it in items]

    tallies = {t: TheoremTally() for t in cfg.theorems}
    cex: list[Counterexample] = []
    fallbacks = 0
    for part, c, fb in results:
        for t in cfg.theorems:
            tallies[t].passed += part[t].passed
            tallies[t].vacuous += part[t].vacuous
            tallies[t].failed += part[t].failed
        cex.extend(c)
        fallbacks += fb
    warnings = []
    for t, tally in tallies.items():
        if tally.passed < cfg.min_instances:
            warnings.append(f"{t.value}: only {tally.passed} non-vacuous instances (< {cfg.min_instances})")
    if fallbacks:
        warnings.append(f"{fallbacks} hypothesis samples fell back to step subsets after {cfg.attempt_cap} rejected draws")
    counts = {}
    for T in tables:
        counts[T.n] = counts.get(T.n, 0) + 1
    return CampaignReport(cfg, dict(sorted(counts.items())), tallies, cex, warnings)


def _table_work_star(item):
    return _table_work(*item)
