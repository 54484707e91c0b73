import pytest

from lafuzzy.algebra import subset_product
from lafuzzy.crisp import (
    NON_QUASI,
    EmptySubset,
    IdealKind,
    enumerate_crisp,
    is_crisp,
    nonempty_subsets,
)


def oracle(T, A, kind):
    """Set-inclusion definitions written with subset products only."""
    S = set(T.elements)
    AA = subset_product(T, A, A)
    SA, AS = subset_product(T, S, A), subset_product(T, A, S)
    ASA = subset_product(T, AS, A)
    SAS = subset_product(T, SA, S)
    return {
        IdealKind.SUBSEMIGROUP: AA <= A,
        IdealKind.LEFT: SA <= A,
        IdealKind.RIGHT: AS <= A,
        IdealKind.TWO_SIDED: SA <= A and AS <= A,
        IdealKind.BI: AA <= A and ASA <= A,
        IdealKind.GENERALIZED_BI: ASA <= A,
        IdealKind.QUASI: (AS & SA) <= A,
        IdealKind.INTERIOR: AA <= A and SAS <= A,
    }[kind]


def labels(T, sets):
    return ["".join(T.labels[i] for i in sorted(A)) for A in sets]


def test_matches_oracle_on_all_small_tables(small_tables):
    for T in small_tables:
        for A in nonempty_subsets(T.n):
            for kind in IdealKind:
                assert (is_crisp(T, A, kind) is None) == oracle(T, A, kind), (T, A, kind)


def test_violation_reports_point_at_real_failures(small_tables):
    m_checked = 0
    for T in small_tables:
        m = T.op
        for A in nonempty_subsets(T.n):
            for kind in IdealKind:
                w = is_crisp(T, A, kind)
                if w is None:
                    continue
                m_checked += 1
                assert w.product not in A
                e = w.elements
                if len(e) == 2:
                    assert m[e[0]][e[1]] == w.product
                elif w.condition.startswith("AS & SA"):
                    assert m[e[0]][e[1]] == w.product == m[e[2]][e[3]]
                    assert e[0] in A and e[3] in A
                else:
                    assert m[m[e[0]][e[1]]][e[2]] == w.product
    assert m_checked > 0


def test_example_one_frozen(ex_sub):
    T = ex_sub.table
    assert labels(T, enumerate_crisp(T, "subsemigroup")) == ["3", "34", "134", "234", "1234"]
    assert labels(T, enumerate_crisp(T, "left")) == ["34", "134", "234", "1234"]
    assert labels(T, enumerate_crisp(T, "generalized-bi")) == ["3", "13", "23", "34", "123", "134", "234", "1234"]


def test_class_inclusions(small_tables):
    for T in small_tables:
        for A in nonempty_subsets(T.n):
            ok = {k: is_crisp(T, A, k) is None for k in IdealKind}
            if ok[IdealKind.TWO_SIDED]:
                assert ok[IdealKind.INTERIOR]
            if ok[IdealKind.LEFT] or ok[IdealKind.RIGHT]:
                assert ok[IdealKind.QUASI] and ok[IdealKind.SUBSEMIGROUP]
            if ok[IdealKind.BI]:
                assert ok[IdealKind.GENERALIZED_BI]


def test_whole_carrier_is_everything(small_tables):
    for T in small_tables:
        S = frozenset(T.elements)
        assert all(is_crisp(T, S, k) is None for k in IdealKind)


def test_empty_subset_rejected(ex_sub):
    with pytest.raises(EmptySubset):
        is_crisp(ex_sub.table, [], "left")


def test_subset_outside_carrier(ex_sub):
    with pytest.raises(ValueError):
        is_crisp(ex_sub.table, [7], "left")


def test_describe(ex_sub):
    w = is_crisp(ex_sub.table, {0}, "subsemigroup")
    assert w.describe(ex_sub.table) == "A^2 in A: elements (1, 1) -> 4"


def test_kind_names():
    assert [k.value for k in IdealKind] == [
        "subsemigroup", "left", "right", "two-sided", "bi", "generalized-bi", "quasi", "interior",
    ]
    assert IdealKind.QUASI not in NON_QUASI and len(NON_QUASI) == 7


def test_nonempty_subsets_count():
    assert len(list(nonempty_subsets(4))) == 15
