from __future__ import annotations

import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfuzz.catalog import krasner, self_space
from hyperfuzz.hypercore import PreconditionError
from hyperfuzz.ifalgebra import (
    IFS,
    IFSConstraintError,
    OverlayFamily,
    aggregate_max,
    aggregate_min,
    check_characterization,
    check_if_hvs,
    check_if_hyperfield,
    check_result_3_2,
    check_result_3_4,
    closure_oracle,
    combine_family,
    degree,
    equivalence_oracle,
    replay_certificate,
)
from hyperfuzz.modelfind import random_ifs, random_overlay
from hyperfuzz.trials import chain_family, closure_trials, valid_pair

K = krasner()
KK = self_space(K)
A = IFS(K.carrier, (Fr(1), Fr(1, 2)), (Fr(0), Fr(1, 4)))
GOOD = IFS(KK.carrier, (Fr(1, 2), Fr(1, 3)), (Fr(1, 4), Fr(1, 2)))
BAD = IFS(KK.carrier, (Fr(1, 3), Fr(1, 2)), (Fr(1, 4), Fr(1, 2)))


class TestDegreesAndIFS:
    def test_aggregates(self):
        mu = (Fr(9, 10), Fr(1, 2))
        assert aggregate_min(mu, {0, 1}) == Fr(1, 2)
        assert aggregate_max(mu, {0, 1}) == Fr(9, 10)
        assert aggregate_min(mu, {0}) == Fr(9, 10)

    def test_empty_aggregate(self):
        with pytest.raises(PreconditionError):
            aggregate_min((Fr(1),), [])

    def test_constraint(self):
        with pytest.raises(IFSConstraintError) as e:
            IFS(K.carrier, (Fr(3, 4), 0), (Fr(1, 2), 0))
        assert e.value.label == "0"

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            degree(0.5)
        with pytest.raises(ValueError):
            degree(Fr(3, 2))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 10**6))
    def test_random_ifs_respects_constraint(self, grid, seed):
        b = random_ifs(KK.carrier, grid, seed)
        assert all(m + v <= 1 for m, v in zip(b.mu, b.nu))
        assert all((m * grid).denominator == 1 for m in b.mu)


class TestIFHyperfield:
    def test_constant(self):
        for c, d in [(0, 0), (Fr(1, 2), Fr(1, 2)), (1, 0)]:
            assert check_if_hyperfield(K, IFS.constant(K.carrier, c, d)).ok

    def test_fixture(self):
        assert check_if_hyperfield(K, A).ok
        assert check_result_3_2(K, A).ok

    def test_def_i_violation(self):
        report = check_if_hyperfield(K, IFS(K.carrier, (Fr(1, 4), Fr(1, 2)), (0, 0)))
        v = report.violations[0]
        assert v.axiom == "DEF3.1.i" and v.witnesses == (("a", "1"), ("b", "1"))
        assert v.lhs_value == "1/4" and v.rhs_value == "1/2"

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(["K", "GF2", "GF3"]), st.integers(0, 10**6))
    def test_result_3_2_property(self, fields, name, seed):
        f = fields[name]
        a = random_overlay(f, 8, seed)
        assert check_if_hyperfield(f, a).ok
        assert check_result_3_2(f, a).ok


class TestIFHVS:
    def test_good_and_bad(self):
        assert check_if_hvs(KK, A, GOOD).ok
        assert check_result_3_4(KK, A, GOOD).ok
        report = check_if_hvs(KK, A, BAD)
        assert report.violations[0].axiom == "DEF3.3.i"
        assert report.violations[0].witnesses == (("x", "1"), ("y", "1"))

    def test_constant_overlay(self):
        b = IFS.constant(KK.carrier, Fr(1, 2), Fr(1, 4))
        assert check_if_hvs(KK, A, b).ok and check_characterization(KK, A, b).ok

    def test_theta_condition(self):
        b = IFS.constant(KK.carrier, Fr(3, 4), 0)
        assert "DEF3.3.iv" in check_if_hvs(KK, A, b).axioms()

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_result_3_4_property(self, spaces, seed):
        rng = random.Random(seed)
        v = spaces[rng.choice(sorted(spaces))]
        a, b = valid_pair(v, 8, rng)
        assert check_if_hvs(v, a, b).ok
        assert check_result_3_4(v, a, b).ok


class TestCharacterization:
    def test_agreement_records(self):
        ag = equivalence_oracle(KK, A, GOOD)
        assert (ag.eight, ag.four, ag.agree) == (True, True, True)
        ag = equivalence_oracle(KK, A, BAD)
        assert (ag.eight, ag.four, ag.agree) == (False, False, True)
        assert "THM3.5.i" in ag.four_report.axioms()

    def test_requires_if_hyperfield(self):
        with pytest.raises(PreconditionError):
            equivalence_oracle(KK, IFS(K.carrier, (Fr(1, 4), Fr(1, 2)), (0, 0)), GOOD)

    def test_converse_gap_instance(self):
        # the four conditions hold, yet x#y = {theta, 1} drags the meet below mu(1)
        a = IFS.constant(K.carrier, Fr(1, 2), 0)
        b = IFS(KK.carrier, (Fr(1, 2), Fr(1)), (0, 0))
        ag = equivalence_oracle(KK, a, b)
        assert ag.four and not ag.eight and not ag.agree
        assert ag.eight_report.violations[0].axiom == "DEF3.3.i"

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_definition_implies_characterization(self, spaces, seed):
        # the forward direction holds on valid overlays
        rng = random.Random(seed)
        v = spaces[rng.choice(sorted(spaces))]
        a, b = valid_pair(v, 8, rng)
        assert check_characterization(v, a, b).ok


def ifs_lists(carrier, grid=6):
    pair = st.integers(0, grid).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, grid - m)))
    one = st.lists(pair, min_size=len(carrier), max_size=len(carrier)).map(
        lambda ps: IFS(carrier, tuple(Fr(m, grid) for m, _ in ps), tuple(Fr(v, grid) for _, v in ps))
    )
    return st.lists(one, min_size=1, max_size=4)


OPS = ["intersect", "union"]


class TestCombine:
    def test_constants_intersect_standard(self):
        b1 = IFS.constant(KK.carrier, Fr(1, 2), Fr(1, 4))
        b2 = IFS.constant(KK.carrier, Fr(1, 3), Fr(1, 2))
        c = combine_family([b1, b2], "intersect", "standard")
        assert c == IFS.constant(KK.carrier, Fr(1, 3), Fr(1, 2))

    def test_paper_intersect_nu_is_meet(self):
        c = combine_family([GOOD, BAD], "intersect", "paper")
        assert c.nu == tuple(min(p, q) for p, q in zip(GOOD.nu, BAD.nu))

    def test_paper_union_overflow(self):
        b1 = IFS(KK.carrier, (Fr(3, 4), 0), (0, 0))
        b2 = IFS(KK.carrier, (0, 0), (Fr(1, 2), 0))
        with pytest.raises(IFSConstraintError) as e:
            combine_family([b1, b2], "union", "paper")
        assert e.value.label == "0"

    def test_family_wrapper(self):
        with pytest.raises(PreconditionError):
            OverlayFamily(KK, A, ())
        fam = OverlayFamily(KK, A, (GOOD,))
        assert combine_family(fam, "union", "standard") == GOOD

    @settings(max_examples=60, deadline=None)
    @given(ifs_lists(KK.carrier), st.sampled_from(OPS))
    def test_single_member_idempotent(self, members, op):
        for m in members:
            assert combine_family([m], op, "standard") == m
            assert combine_family([m], op, "paper") == m

    @settings(max_examples=60, deadline=None)
    @given(ifs_lists(KK.carrier), st.sampled_from(OPS), st.randoms(use_true_random=False))
    def test_order_independent(self, members, op, rnd):
        shuffled = list(members)
        rnd.shuffle(shuffled)
        assert combine_family(members, op, "standard") == combine_family(shuffled, op, "standard")

    @settings(max_examples=60, deadline=None)
    @given(ifs_lists(KK.carrier), ifs_lists(KK.carrier), st.sampled_from(OPS))
    def test_associative(self, left, right, op):
        nested = [combine_family(left, op, "standard"), combine_family(right, op, "standard")]
        assert combine_family(nested, op, "standard") == combine_family(left + right, op, "standard")

    @settings(max_examples=60, deadline=None)
    @given(ifs_lists(KK.carrier), ifs_lists(KK.carrier))
    def test_monotone(self, fam, extra):
        small_i = combine_family(fam, "intersect", "standard")
        big_i = combine_family(fam + extra, "intersect", "standard")
        small_u = combine_family(fam, "union", "standard")
        big_u = combine_family(fam + extra, "union", "standard")
        assert all(b <= s for b, s in zip(big_i.mu, small_i.mu))
        assert all(b >= s for b, s in zip(big_u.mu, small_u.mu))


class TestClosure:
    def test_constant_pair_intersect(self):
        fam = [IFS.constant(KK.carrier, Fr(1, 2), Fr(1, 4)), IFS.constant(KK.carrier, Fr(1, 3), Fr(1, 2))]
        assert closure_oracle(KK, A, fam, "intersect", "standard").verified

    def test_member_precondition(self):
        with pytest.raises(PreconditionError):
            closure_oracle(KK, A, [GOOD, BAD], "intersect", "standard")

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.lists(st.integers(0, 8), min_size=2, max_size=4))
    def test_chain_union_standard(self, spaces, seed, cuts):
        rng = random.Random(seed)
        v = spaces[rng.choice(sorted(spaces))]
        a, base = valid_pair(v, 8, rng)
        members = chain_family(base, [Fr(c, 8) for c in cuts])
        assert closure_oracle(v, a, members, "union", "standard").verified

    def test_union_counterexample_replays(self):
        summary = closure_trials("union", "standard", 60, seed=0)
        assert summary.cases, "expected at least one union counterexample in 60 trials"
        for case in summary.cases:
            assert replay_certificate(case.certificate, case.space, case.field_ifs)

    def test_deterministic(self):
        first = closure_trials("intersect", "paper", 40, seed=3)
        again = closure_trials("intersect", "paper", 40, seed=3)
        assert first.tally() == again.tally()
        assert [c.certificate for c in first.cases] == [c.certificate for c in again.cases]

    def test_forged_certificate_does_not_replay(self):
        summary = closure_trials("union", "standard", 60, seed=0)
        case = next(c for c in summary.cases if c.certificate.violation.axiom != "DEF2.9")
        cert = case.certificate
        forged = type(cert)(cert.theorem, cert.violation, tuple(Fr(0) for _ in cert.mu),
                            tuple(Fr(0) for _ in cert.nu))
        assert not replay_certificate(forged, case.space, case.field_ifs)

