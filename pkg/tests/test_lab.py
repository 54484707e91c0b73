from fractions import Fraction as F

import pytest

from lafuzzy import lab
from lafuzzy.algebra import SizeOutOfRange
from lafuzzy.crisp import IdealKind, nonempty_subsets
from lafuzzy.fuzzy import IN_IN_OR_Q, FuzzySubset, Thresholds, characteristic, join
from lafuzzy.ideals import PreconditionError, check_threshold
from lafuzzy.lab import (
    CampaignConfig,
    ClosureOp,
    Implication,
    LevelPart,
    TableMode,
    TheoremId,
    corpus,
    run_campaign,
    verify_char_fn,
    verify_closure,
    verify_construction,
    verify_construction_q,
    verify_implication,
    verify_level_theorem,
    verify_threshold_equiv,
)

SMALL = dict(orders=[1, 2], grade_denominator=10, mu_samples=4, seed=11,
             threshold_samples=[("0", "1/2"), ("1/5", "3/10"), ("1/5", "3/5")])


class TestVerifiersOnExamples:
    def test_level_parts(self, ex_sub):
        T, mu = ex_sub.table, ex_sub.fuzzy_subsets["mu"]
        for th in (Thresholds("1/5", "3/10"), IN_IN_OR_Q):
            for part in LevelPart:
                if part in (LevelPart.II, LevelPart.III) and not th.balanced:
                    with pytest.raises(PreconditionError):
                        verify_level_theorem(T, mu, th, "subsemigroup", part)
                    continue
                assert verify_level_theorem(T, mu, th, "subsemigroup", part).holds

    def test_level_cut_of_example(self, ex_sub):
        # every grade is >= 3/10, so low cuts are the whole carrier
        from lafuzzy.fuzzy import level
        from lafuzzy.crisp import is_crisp

        T, mu, th = ex_sub.table, ex_sub.fuzzy_subsets["mu"], Thresholds("1/5", "3/10")
        for r in ("1/4", "3/10"):
            C = level(mu, th, r, "in-gamma")
            assert C == frozenset(range(4))
            assert is_crisp(T, C, "subsemigroup") is None

    def test_constructions(self, ex_left):
        T = ex_left.table
        th = Thresholds("1/5", "3/5")
        for A in nonempty_subsets(T.n):
            for kind in IdealKind:
                assert verify_construction(T, A, th, kind, th.delta, th.gamma).holds
                assert verify_construction(T, A, th, kind, 1, 0).holds
                if kind is not IdealKind.QUASI:
                    assert verify_construction_q(T, A, th, kind).holds
                    assert verify_char_fn(T, A, th, kind).holds

    def test_construction_q_needs_balanced(self, ex_left):
        with pytest.raises(PreconditionError):
            verify_construction_q(ex_left.table, frozenset({3}), Thresholds("1/5", "2/5"), IdealKind.LEFT)

    def test_implications(self, ex_left, ex_quasi):
        for sf in (ex_left, ex_quasi):
            T, mu = sf.table, sf.fuzzy_subsets["mu"]
            for th in sf.thresholds.values():
                for which in Implication:
                    assert verify_implication(T, mu, th, which).holds

    def test_char_fn_quasi_is_vacuous_for_non_crisp_grades(self, ex_quasi):
        v = verify_implication(ex_quasi.table, ex_quasi.fuzzy_subsets["mu"], IN_IN_OR_Q, "char-fn-quasi")
        assert v.holds and v.vacuous

    def test_closure_scope(self, ex_left):
        mu = ex_left.fuzzy_subsets["mu"]
        with pytest.raises(PreconditionError):
            verify_closure(ex_left.table, [mu], IN_IN_OR_Q, "subsemigroup", ClosureOp.UNION)
        with pytest.raises(PreconditionError):
            verify_closure(ex_left.table, [mu], IN_IN_OR_Q, "bi", ClosureOp.INTERSECTION)

    def test_union_of_subsemigroups_can_fail(self, small_tables):
        # the reason union closure is only claimed for one-sided ideals
        th = IN_IN_OR_Q
        for T in small_tables:
            subs = [A for A in nonempty_subsets(T.n) if check_threshold(T, characteristic(T, A), th, "subsemigroup").holds]
            for A in subs:
                for B in subs:
                    if not check_threshold(T, join(characteristic(T, A), characteristic(T, B)), th, "subsemigroup").holds:
                        return
        pytest.fail("no failing union found")


class TestVerifiersDetectFailures:
    def test_level_theorem_reports_broken_decider(self, ex_sub, monkeypatch):
        monkeypatch.setattr(lab, "check_threshold", lambda *a, **k: lab._PASS)
        v = verify_level_theorem(ex_sub.table, ex_sub.fuzzy_subsets["mu"], IN_IN_OR_Q, "subsemigroup", LevelPart.I)
        assert not v.holds and "cut is not subsemigroup" in v.witness.condition

    def test_threshold_equiv_reports_disagreement(self, ex_sub, monkeypatch):
        monkeypatch.setattr(lab, "check_pointwise", lambda *a, **k: lab._PASS)
        v = verify_threshold_equiv(ex_sub.table, ex_sub.fuzzy_subsets["mu"], IN_IN_OR_Q, IdealKind.SUBSEMIGROUP)
        assert not v.holds

    def test_closure_reports_failure(self, ex_sub, monkeypatch):
        real = lab.check_threshold
        calls = []

        def fake(T, mu, th, kind):
            calls.append(mu)
            return lab._PASS if len(calls) == 1 else real(T, mu, th, kind)

        monkeypatch.setattr(lab, "check_threshold", fake)
        v = verify_closure(ex_sub.table, [ex_sub.fuzzy_subsets["mu"]], IN_IN_OR_Q, "subsemigroup", "intersection")
        assert not v.holds

    def test_campaign_counts_failures(self, monkeypatch):
        monkeypatch.setattr(lab, "check_pointwise", lambda *a, **k: lab._PASS)
        r = run_campaign(CampaignConfig(**SMALL, theorems=["threshold-equiv"]))
        assert r.tallies[TheoremId.THRESHOLD_EQUIV].failed > 0
        assert not r.ok and r.counterexamples


class TestCampaign:
    def test_small_campaign_is_clean(self):
        r = run_campaign(CampaignConfig(**SMALL))
        assert r.ok
        assert r.tables == {1: 1, 2: 6}
        assert all(t.failed == 0 for t in r.tallies.values())
        assert r.tallies[TheoremId.LEVEL_I].passed > 0

    def test_deterministic_and_worker_independent(self):
        cfg = CampaignConfig(**SMALL)
        a, b = run_campaign(cfg), run_campaign(cfg, workers=2)
        assert a.tallies == b.tallies and a.warnings == b.warnings

    def test_seed_changes_samples(self):
        a = run_campaign(CampaignConfig(**{**SMALL, "seed": 1}, theorems=["level-i"]))
        b = run_campaign(CampaignConfig(**{**SMALL, "seed": 2}, theorems=["level-i"]))
        assert a.tallies != b.tallies or a.tallies[TheoremId.LEVEL_I].passed > 0

    def test_undersampling_warning(self):
        r = run_campaign(CampaignConfig(**SMALL, theorems=["union-closure"], min_instances=10**6))
        assert any("union-closure" in w for w in r.warnings)

    def test_backtrack_sample_mode(self):
        cfg = CampaignConfig(orders=[4], table_mode=TableMode.BACKTRACK_SAMPLE, tables_per_order=3,
                             mu_samples=2, grade_denominator=10, seed=5, threshold_samples=[("0", "1/2")],
                             theorems=["threshold-equiv", "level-i", "construct-iff"])
        r = run_campaign(cfg)
        assert r.ok and 1 <= r.tables[4] <= 3

    def test_config_validation(self):
        with pytest.raises(SizeOutOfRange):
            CampaignConfig(orders=[4])
        with pytest.raises(ValueError):
            CampaignConfig(threshold_samples=[])
        with pytest.raises(ValueError):
            CampaignConfig(grade_denominator=0)
        assert CampaignConfig(theorems=["char-fn"]).theorems == [TheoremId.CHAR_FN]

    def test_corpus_cross_checks_enumeration(self, monkeypatch):
        real = lab.enumerate_la_semigroups
        monkeypatch.setattr(lab, "enumerate_la_semigroups", lambda n, mode: list(real(n, mode))[1:])
        with pytest.raises(RuntimeError):
            corpus(CampaignConfig(orders=[2]))

    def test_grid_subsets_are_on_grid(self):
        import random

        T = corpus(CampaignConfig(orders=[2]))[0]
        mu = lab.random_grid_subset(T, 10, random.Random(0))
        assert isinstance(mu, FuzzySubset) and all((g * 10).denominator == 1 for g in mu.grades)
        assert lab._grid_between(F(1, 3), F(2, 5), 10, random.Random(0)) in (F(1, 3), F(2, 5))
