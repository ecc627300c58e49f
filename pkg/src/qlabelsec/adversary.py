"""Eavesdropping strategies against the label-delivery channel.

Two families are modeled.  ``InterceptResend`` is simulated at the level of
individual qubits: the attacker measures a traversing state in a basis chosen
by policy and resends the collapsed eigenstate.  ``AnalyticAttack`` is never
simulated; it stands for the individual/collective attack classes whose
effect is known only through their information curves, and sessions model it
as a pair of classical flip channels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .info_theory import eve_noise_from_disturbance
from .qubit import Basis, MeasurementResult, QubitState, measure

__all__ = [
    "BasisPolicy",
    "NoAttack",
    "InterceptResend",
    "AnalyticAttack",
    "LegRecord",
    "EveRoundRecord",
    "intercept",
    "measure_and_resend",
    "pick_policy_basis",
    "infer_label",
    "tradeoff_point",
    "theoretical_tradeoff",
]

BOTH_LEGS = (1, 2)


class BasisPolicy(str, enum.Enum):
    ALWAYS_Z = "alwaysZ"
    RANDOM_PER_LEG = "randomPerLeg"


@dataclass(frozen=True)
class NoAttack:
    """Passive placeholder: the channel is untouched and Eve only guesses."""

    kind: str = field(default="none", init=False)


@dataclass(frozen=True)
class InterceptResend:
    """Measure-and-resend attack on the configured channel legs.

    attack_probability gates whole rounds: with probability f the round is
    intercepted on every configured leg, otherwise it passes untouched.  The
    basis policy is applied per leg, so randomPerLeg can measure the two legs
    of one round in different bases.
    """

    attack_probability: float = 1.0
    basis_policy: BasisPolicy = BasisPolicy.ALWAYS_Z
    legs: tuple[int, ...] = BOTH_LEGS
    kind: str = field(default="intercept-resend", init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.attack_probability <= 1.0:
            raise DomainError(
                f"attack probability must lie in [0, 1], got {self.attack_probability}"
            )
        object.__setattr__(self, "basis_policy", BasisPolicy(self.basis_policy))
        legs = tuple(sorted(set(self.legs)))
        if not legs or any(leg not in (1, 2) for leg in legs):
            raise DomainError(f"legs must be a nonempty subset of (1, 2), got {self.legs}")
        object.__setattr__(self, "legs", legs)


@dataclass(frozen=True)
class AnalyticAttack:
    """Attack class known only through its information curve.

    disturbance is the label-flip rate the attack induces on the authorized
    channel; the matching eavesdropper flip rate comes from the curve.
    """

    curve_kind: str
    disturbance: float
    kind: str = field(default="analytic", init=False)

    def __post_init__(self) -> None:
        if self.curve_kind not in ("individual", "collective"):
            raise DomainError(
                f"analytic attacks require an information curve; "
                f"got kind {self.curve_kind!r}"
            )
        if not 0.0 <= self.disturbance <= 0.5:
            raise DomainError(
                f"disturbance must lie in [0, 1/2], got {self.disturbance}"
            )

    @property
    def eve_noise(self) -> float:
        return eve_noise_from_disturbance(self.curve_kind, self.disturbance)


@dataclass(frozen=True)
class LegRecord:
    """One interception: which leg, which basis, what came out."""

    leg: int
    basis: Basis
    outcome: int


@dataclass(frozen=True)
class EveRoundRecord:
    """Everything Eve holds about one round (either leg may be missing)."""

    leg1: LegRecord | None = None
    leg2: LegRecord | None = None


def measure_and_resend(
    state: QubitState, leg: int, basis: Basis, randomness: float
) -> tuple[QubitState, LegRecord]:
    """Collapse the state in the given basis and forward the eigenstate."""
    result: MeasurementResult = measure(state, basis, randomness)
    return result.post_state, LegRecord(leg=leg, basis=Basis(basis), outcome=result.outcome)


def pick_policy_basis(policy: BasisPolicy, rng: np.random.Generator) -> Basis:
    if policy is BasisPolicy.ALWAYS_Z:
        return Basis.Z
    return Basis.Z if rng.random() < 0.5 else Basis.X


def intercept(
    state: QubitState,
    leg_index: int,
    strategy: InterceptResend,
    rng: np.random.Generator,
) -> tuple[QubitState, LegRecord | None]:
    """Single-leg interception hook.

    With probability 1 - attack_probability (or when the leg is not in the
    strategy's target set) the state passes untouched and no record is made.
    """
    if leg_index not in (1, 2):
        raise DomainError(f"leg index must be 1 or 2, got {leg_index}")
    if not isinstance(strategy, InterceptResend):
        raise DomainError(f"intercept requires an InterceptResend strategy, got {strategy!r}")
    if leg_index not in strategy.legs:
        return state, None
    if rng.random() >= strategy.attack_probability:
        return state, None
    basis = pick_policy_basis(strategy.basis_policy, rng)
    return measure_and_resend(state, leg_index, basis, rng.random())


def infer_label(record: EveRoundRecord | None, rng: np.random.Generator) -> int:
    """Eve's label estimate for a data round.

    The oracle flips the computational bit by the label, so two Z outcomes
    XOR to the label exactly.  With anything less she has no usable
    correlation and guesses uniformly.
    """
    if (
        record is not None
        and record.leg1 is not None
        and record.leg2 is not None
        and record.leg1.basis is Basis.Z
        and record.leg2.basis is Basis.Z
    ):
        return record.leg1.outcome ^ record.leg2.outcome
    return int(rng.integers(2))


def tradeoff_point(strategy) -> tuple[float, float]:
    """Exact (eta_a, eta_e) pair for the strategy's configured parameter.

    eta_a is the check-round error rate the attack induces; eta_e is the
    flip rate of Eve's resulting label channel.  Both are closed-form:
    intercept-resend values come from enumerating the measurement branches,
    analytic values from the information curve.
    """
    if isinstance(strategy, InterceptResend):
        f = strategy.attack_probability
        both = strategy.legs == BOTH_LEGS
        if strategy.basis_policy is BasisPolicy.ALWAYS_Z:
            eta_a = f / 2.0
            eta_e = (1.0 - f) / 2.0 if both else 0.5
        else:
            eta_a = 3.0 * f / 8.0 if both else f / 4.0
            eta_e = 0.5 - f / 8.0 if both else 0.5
        return eta_a, eta_e
    if isinstance(strategy, AnalyticAttack):
        return strategy.disturbance, strategy.eve_noise
    raise DomainError(f"no trade-off is defined for strategy {strategy!r}")


def theoretical_tradeoff(strategy, grid=None) -> list[tuple[float, float]]:
    """Trade-off curve (eta_a, eta_e) swept over the strategy's parameter.

    For intercept-resend the sweep is over the attack probability, for
    analytic attacks over the disturbance.  The passive strategy has no
    curve and is rejected.
    """
    if isinstance(strategy, NoAttack):
        raise DomainError("the passive strategy induces no trade-off curve")
    if isinstance(strategy, InterceptResend):
        if grid is None:
            grid = np.linspace(0.0, 1.0, 21)
        return [
            tradeoff_point(
                InterceptResend(
                    attack_probability=float(f),
                    basis_policy=strategy.basis_policy,
                    legs=strategy.legs,
                )
            )
            for f in grid
        ]
    if isinstance(strategy, AnalyticAttack):
        if grid is None:
            grid = np.linspace(0.0, 0.5, 51)
        return [
            tradeoff_point(
                AnalyticAttack(curve_kind=strategy.curve_kind, disturbance=float(d))
            )
            for d in grid
        ]
    raise DomainError(f"unknown strategy {strategy!r}")
