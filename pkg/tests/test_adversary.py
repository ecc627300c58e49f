"""Interception mechanics, Eve's inference rule, and trade-off curves."""

import math

import numpy as np
import pytest

import _oracles as oracles
from qlabelsec.adversary import (
    AnalyticAttack,
    BasisPolicy,
    EveRoundRecord,
    InterceptResend,
    LegRecord,
    NoAttack,
    infer_label,
    intercept,
    theoretical_tradeoff,
    tradeoff_point,
)
from qlabelsec.errors import DomainError
from qlabelsec.info_theory import eta_star, eve_noise_from_disturbance
from qlabelsec.protocol import ConceptSource, run_session
from qlabelsec.qubit import Basis, Preparation, prepare


def simple_source() -> ConceptSource:
    return ConceptSource(
        sampler=lambda rng: rng.standard_normal(2),
        labeler=lambda x: int(x[0] >= 0.0),
    )


class TestStrategyValidation:
    def test_intercept_resend_defaults(self):
        strategy = InterceptResend()
        assert strategy.attack_probability == 1.0
        assert strategy.basis_policy is BasisPolicy.ALWAYS_Z
        assert strategy.legs == (1, 2)
        assert strategy.kind == "intercept-resend"

    def test_accepts_policy_by_string(self):
        strategy = InterceptResend(basis_policy="randomPerLeg")
        assert strategy.basis_policy is BasisPolicy.RANDOM_PER_LEG

    @pytest.mark.parametrize("f", [-0.1, 1.1])
    def test_rejects_bad_attack_probability(self, f):
        with pytest.raises(DomainError):
            InterceptResend(attack_probability=f)

    def test_rejects_bad_policy_and_legs(self):
        with pytest.raises(ValueError):
            InterceptResend(basis_policy="alwaysY")
        with pytest.raises(DomainError):
            InterceptResend(legs=())
        with pytest.raises(DomainError):
            InterceptResend(legs=(3,))

    def test_analytic_attack_validation(self):
        attack = AnalyticAttack(curve_kind="collective", disturbance=0.05)
        assert attack.kind == "analytic"
        with pytest.raises(DomainError):
            AnalyticAttack(curve_kind="memoryless", disturbance=0.05)
        with pytest.raises(DomainError):
            AnalyticAttack(curve_kind="collective", disturbance=0.6)

    def test_no_attack_is_inert_marker(self):
        assert NoAttack().kind == "none"


class TestIntercept:
    def test_collapses_hadamard_state_to_computational(self):
        rng = np.random.default_rng(5)
        state, record = intercept(prepare(Preparation.XPLUS), 1, InterceptResend(), rng)
        assert record is not None
        assert record.basis is Basis.Z
        assert record.leg == 1
        # the resent state is a computational eigenstate
        assert np.array_equal(state.rho, prepare(Preparation.Z0).rho) or np.array_equal(
            state.rho, prepare(Preparation.Z1).rho
        )

    def test_computational_state_passes_undisturbed_but_recorded(self):
        rng = np.random.default_rng(6)
        before = prepare(Preparation.Z0)
        state, record = intercept(before, 2, InterceptResend(), rng)
        assert np.array_equal(state.rho, before.rho)
        assert record == LegRecord(leg=2, basis=Basis.Z, outcome=0)

    def test_zero_probability_never_touches(self):
        rng = np.random.default_rng(7)
        before = prepare(Preparation.XMINUS)
        for leg in (1, 2):
            state, record = intercept(
                before, leg, InterceptResend(attack_probability=0.0), rng
            )
            assert state is before
            assert record is None

    def test_unconfigured_leg_passes(self):
        rng = np.random.default_rng(8)
        before = prepare(Preparation.XPLUS)
        state, record = intercept(before, 2, InterceptResend(legs=(1,)), rng)
        assert state is before
        assert record is None

    def test_rejects_bad_leg_and_strategy(self):
        rng = np.random.default_rng(9)
        with pytest.raises(DomainError):
            intercept(prepare(Preparation.Z0), 3, InterceptResend(), rng)
        with pytest.raises(DomainError):
            intercept(prepare(Preparation.Z0), 1, NoAttack(), rng)


class TestInferLabel:
    def test_two_z_outcomes_xor_to_the_label(self):
        rng = np.random.default_rng(0)
        for o1 in (0, 1):
            for o2 in (0, 1):
                record = EveRoundRecord(
                    leg1=LegRecord(1, Basis.Z, o1), leg2=LegRecord(2, Basis.Z, o2)
                )
                assert infer_label(record, rng) == o1 ^ o2

    @pytest.mark.parametrize(
        "record",
        [
            None,
            EveRoundRecord(leg1=LegRecord(1, Basis.Z, 0), leg2=None),
            EveRoundRecord(leg1=None, leg2=LegRecord(2, Basis.Z, 1)),
            EveRoundRecord(
                leg1=LegRecord(1, Basis.X, 0), leg2=LegRecord(2, Basis.Z, 1)
            ),
            EveRoundRecord(
                leg1=LegRecord(1, Basis.Z, 0), leg2=LegRecord(2, Basis.X, 1)
            ),
        ],
    )
    def test_anything_less_is_a_uniform_guess(self, record):
        rng = np.random.default_rng(42)
        n = 10_000
        ones = sum(infer_label(record, rng) for _ in range(n))
        sigma = math.sqrt(0.25 / n)
        assert abs(ones / n - 0.5) <= 4.0 * sigma


class TestTradeoffCurves:
    def test_always_z_endpoints_and_crossing(self):
        assert tradeoff_point(InterceptResend(attack_probability=1.0)) == (0.5, 0.0)
        assert tradeoff_point(InterceptResend(attack_probability=0.0)) == (0.0, 0.5)
        assert tradeoff_point(InterceptResend(attack_probability=0.5)) == (0.25, 0.25)

    def test_random_per_leg_full_attack(self):
        eta_a, eta_e = tradeoff_point(
            InterceptResend(basis_policy="randomPerLeg", attack_probability=1.0)
        )
        assert eta_a == pytest.approx(0.375, abs=1e-15)
        assert eta_e == pytest.approx(0.375, abs=1e-15)

    def test_single_leg_attacks_reveal_nothing(self):
        for legs in ((1,), (2,)):
            _, eta_e = tradeoff_point(
                InterceptResend(attack_probability=1.0, legs=legs)
            )
            assert eta_e == 0.5

    @pytest.mark.parametrize("policy", ["alwaysZ", "randomPerLeg"])
    @pytest.mark.parametrize("legs", [(1, 2), (1,), (2,)])
    def test_matches_exact_branch_enumeration(self, policy, legs):
        for f in (0.0, 0.25, 0.5, 0.75, 1.0):
            strategy = InterceptResend(
                attack_probability=f, basis_policy=policy, legs=legs
            )
            eta_a, eta_e = tradeoff_point(strategy)
            assert eta_a == pytest.approx(
                oracles.check_round_error_exact(policy, f, legs), abs=1e-12
            )
            assert eta_e == pytest.approx(
                oracles.eve_data_error_exact(policy, f, legs), abs=1e-12
            )

    def test_curve_sweeps_the_attack_probability(self):
        curve = theoretical_tradeoff(InterceptResend(), grid=[0.0, 0.5, 1.0])
        assert curve == [(0.0, 0.5), (0.25, 0.25), (0.5, 0.0)]

    def test_analytic_curves_pass_through_their_threshold(self):
        for kind in ("collective", "individual"):
            threshold = eta_star(kind)
            eta_a, eta_e = tradeoff_point(
                AnalyticAttack(curve_kind=kind, disturbance=threshold)
            )
            assert eta_a == pytest.approx(threshold, abs=1e-12)
            assert eta_e == pytest.approx(threshold, abs=1e-4)

    def test_analytic_curve_values_come_from_the_information_curve(self):
        curve = theoretical_tradeoff(
            AnalyticAttack(curve_kind="collective", disturbance=0.1),
            grid=[0.0, 0.05, 0.2],
        )
        for (eta_a, eta_e), d in zip(curve, [0.0, 0.05, 0.2]):
            assert eta_a == d
            assert eta_e == pytest.approx(
                eve_noise_from_disturbance("collective", d), abs=1e-12
            )

    def test_passive_strategy_has_no_curve(self):
        with pytest.raises(DomainError):
            theoretical_tradeoff(NoAttack())


class TestSimulationAgreesWithTheory:
    @pytest.mark.parametrize("f", [0.0, 0.5, 1.0])
    def test_always_z_statistics_within_four_sigma(self, f):
        strategy = InterceptResend(attack_probability=f)
        session = run_session(simple_source(), 10_000, attack=strategy, seed=314)
        eta_a_exp, eta_e_exp = tradeoff_point(strategy)
        n_check = session.check_count
        sigma_a = math.sqrt(max(eta_a_exp * (1 - eta_a_exp), 1e-12) / n_check)
        assert abs(session.eta_a_estimate - eta_a_exp) <= 4.0 * sigma_a
        n_data = len(session.eavesdropper_dataset)
        sigma_e = math.sqrt(max(eta_e_exp * (1 - eta_e_exp), 1e-12) / n_data)
        assert abs(session.eve_label_error_rate - eta_e_exp) <= 4.0 * sigma_e

    def test_random_per_leg_statistics_within_four_sigma(self):
        strategy = InterceptResend(basis_policy="randomPerLeg")
        session = run_session(simple_source(), 10_000, attack=strategy, seed=2718)
        for observed, expected, n in (
            (session.eta_a_estimate, 0.375, session.check_count),
            (session.eve_label_error_rate, 0.375, len(session.eavesdropper_dataset)),
            (session.authorized_label_error_rate, 0.375, len(session.authorized_dataset)),
        ):
            sigma = math.sqrt(expected * (1 - expected) / n)
            assert abs(observed - expected) <= 4.0 * sigma

    def test_no_strategy_raises_ensemble_fidelity_above_no_attack(self):
        baseline = run_session(simple_source(), 4_000, attack=NoAttack(), seed=55)
        assert baseline.ensemble_fidelity == 1.0
        for strategy in (
            InterceptResend(),
            InterceptResend(basis_policy="randomPerLeg"),
            InterceptResend(attack_probability=0.3),
            AnalyticAttack(curve_kind="collective", disturbance=0.08),
        ):
            session = run_session(simple_source(), 4_000, attack=strategy, seed=55)
            assert session.ensemble_fidelity <= baseline.ensemble_fidelity + 1e-12
