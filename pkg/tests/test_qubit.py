"""Density-matrix states, the conditional flip, and Born-rule measurement."""

import math

import numpy as np
import pytest

from qlabelsec.errors import DomainError
from qlabelsec.qubit import (
    Basis,
    Preparation,
    QubitState,
    apply_oracle,
    fidelity,
    measure,
    prepare,
)

X_GATE = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    rho = a @ a.conj().T
    return rho / rho.trace()


class TestPreparations:
    def test_exact_matrices(self):
        assert np.array_equal(prepare(Preparation.Z0).rho, [[1, 0], [0, 0]])
        assert np.array_equal(prepare(Preparation.Z1).rho, [[0, 0], [0, 1]])
        assert np.allclose(
            prepare(Preparation.XPLUS).rho, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15
        )
        assert np.allclose(
            prepare(Preparation.XMINUS).rho, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15
        )

    def test_all_preparations_are_valid_pure_states(self):
        for label in Preparation:
            state = prepare(label)
            state.validate(atol=1e-12)
            assert state.purity() == pytest.approx(1.0, abs=1e-12)

    def test_label_properties(self):
        assert Preparation.Z0.basis is Basis.Z and not Preparation.Z0.is_check
        assert Preparation.XMINUS.basis is Basis.X and Preparation.XMINUS.is_check
        assert Preparation.Z1.bit == 1
        assert Preparation.XPLUS.bit == 0

    def test_rejects_unknown_label(self):
        with pytest.raises(DomainError):
            prepare("Y0")


class TestQubitState:
    def test_constructor_copies_and_freezes(self):
        source = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        state = QubitState(source)
        source[0, 0] = 7.0
        assert state.rho[0, 0] == 1.0
        with pytest.raises(ValueError):
            state.rho[0, 0] = 3.0
        with pytest.raises(AttributeError):
            state.rho = source

    def test_rejects_wrong_shape(self):
        with pytest.raises(DomainError):
            QubitState(np.eye(3))

    def test_validate_catches_broken_matrices(self):
        with pytest.raises(DomainError, match="Hermitian"):
            QubitState([[0.5, 1.0], [0.0, 0.5]]).validate()
        with pytest.raises(DomainError, match="trace"):
            QubitState([[0.7, 0.0], [0.0, 0.7]]).validate()
        with pytest.raises(DomainError, match="eigenvalue"):
            QubitState([[2.0, 0.0], [0.0, -1.0]]).validate()

    def test_from_ket_requires_normalization(self):
        with pytest.raises(DomainError):
            QubitState.from_ket([1.0, 1.0])
        state = QubitState.from_ket([1.0 / math.sqrt(2), 1j / math.sqrt(2)])
        state.validate(atol=1e-12)


class TestOracle:
    def test_flips_computational_pair(self):
        assert np.array_equal(
            apply_oracle(prepare(Preparation.Z0), 1).rho, prepare(Preparation.Z1).rho
        )
        assert np.array_equal(
            apply_oracle(prepare(Preparation.Z1), 1).rho, prepare(Preparation.Z0).rho
        )

    def test_hadamard_pair_is_exactly_invariant(self):
        for label in (Preparation.XPLUS, Preparation.XMINUS):
            before = prepare(label)
            after = apply_oracle(before, 1)
            assert np.array_equal(after.rho, before.rho)

    def test_zero_bit_is_identity(self):
        state = prepare(Preparation.Z1)
        assert apply_oracle(state, 0) is state

    def test_involution(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            state = QubitState(random_density_matrix(rng))
            twice = apply_oracle(apply_oracle(state, 1), 1)
            assert np.allclose(twice.rho, state.rho, atol=1e-15)

    def test_matches_explicit_conjugation(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            rho = random_density_matrix(rng)
            expected = X_GATE @ rho @ X_GATE
            got = apply_oracle(QubitState(rho), 1).rho
            assert np.allclose(got, expected, atol=1e-15)

    def test_rejects_non_bit(self):
        with pytest.raises(DomainError):
            apply_oracle(prepare(Preparation.Z0), 2)

    def test_preserves_state_invariants(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            state = QubitState(random_density_matrix(rng))
            apply_oracle(state, 1).validate(atol=1e-12)


class TestMeasurement:
    def test_eigenstates_are_deterministic(self):
        for u in (0.0, 0.3, 0.999999):
            assert measure(prepare(Preparation.Z0), Basis.Z, u).outcome == 0
            assert measure(prepare(Preparation.Z1), Basis.Z, u).outcome == 1
            assert measure(prepare(Preparation.XPLUS), Basis.X, u).outcome == 0
            assert measure(prepare(Preparation.XMINUS), Basis.X, u).outcome == 1

    def test_threshold_semantics_at_even_split(self):
        state = prepare(Preparation.XPLUS)  # p(outcome 0) in Z is exactly 1/2
        assert measure(state, Basis.Z, 0.49).outcome == 0
        assert measure(state, Basis.Z, 0.5).outcome == 1

    def test_post_state_is_basis_eigenstate_and_repeat_is_stable(self):
        rng = np.random.default_rng(3)
        for basis in (Basis.Z, Basis.X):
            for _ in range(20):
                state = QubitState(random_density_matrix(rng))
                outcome, post = measure(state, basis, rng.random())
                post.validate(atol=1e-12)
                assert post.purity() == pytest.approx(1.0, abs=1e-12)
                for u in (0.0, 0.5, 0.99):
                    again, post2 = measure(post, basis, u)
                    assert again == outcome
                    assert np.array_equal(post2.rho, post.rho)

    def test_maximally_mixed_statistics(self):
        state = QubitState(np.eye(2) / 2.0)
        rng = np.random.default_rng(20260814)
        n = 100_000
        ones = sum(measure(state, Basis.Z, rng.random()).outcome for _ in range(n))
        sigma = math.sqrt(0.25 / n)
        assert abs(ones / n - 0.5) <= 4.0 * sigma

    def test_born_frequencies_for_all_preparations_and_bases(self):
        # exact outcome-0 probabilities per (preparation, basis)
        expected = {
            (Preparation.Z0, Basis.Z): 1.0,
            (Preparation.Z1, Basis.Z): 0.0,
            (Preparation.XPLUS, Basis.Z): 0.5,
            (Preparation.XMINUS, Basis.Z): 0.5,
            (Preparation.Z0, Basis.X): 0.5,
            (Preparation.Z1, Basis.X): 0.5,
            (Preparation.XPLUS, Basis.X): 1.0,
            (Preparation.XMINUS, Basis.X): 0.0,
        }
        rng = np.random.default_rng(99)
        n = 20_000
        for (label, basis), p_zero in expected.items():
            zeros = sum(
                1 - measure(prepare(label), basis, rng.random()).outcome
                for _ in range(n)
            )
            if p_zero in (0.0, 1.0):
                assert zeros == int(p_zero * n)
            else:
                sigma = math.sqrt(p_zero * (1.0 - p_zero) / n)
                assert abs(zeros / n - p_zero) <= 4.0 * sigma

    def test_rejects_bad_randomness_and_basis(self):
        state = prepare(Preparation.Z0)
        with pytest.raises(DomainError):
            measure(state, Basis.Z, 1.0)
        with pytest.raises(DomainError):
            measure(state, Basis.Z, -0.01)
        with pytest.raises(DomainError):
            measure(state, "Y", 0.2)


class TestFidelity:
    def test_reference_overlap_spot_values(self):
        z0 = prepare(Preparation.Z0)
        assert fidelity(z0, [1.0, 0.0]) == 1.0
        assert fidelity(z0, [0.0, 1.0]) == 0.0
        assert fidelity(prepare(Preparation.XPLUS), [1.0, 0.0]) == pytest.approx(
            0.5, abs=1e-15
        )

    def test_global_phase_is_irrelevant(self):
        z0 = prepare(Preparation.Z0)
        phase = np.exp(1j * 0.7)
        assert fidelity(z0, phase * np.array([1.0, 0.0])) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_rejects_non_normalized_reference(self):
        with pytest.raises(DomainError, match="not normalized"):
            fidelity(prepare(Preparation.Z0), [1.0, 1.0])

    def test_mixed_state_overlap(self):
        mixed = QubitState(np.eye(2) / 2.0)
        for ket in ([1.0, 0.0], [0.0, 1.0]):
            assert fidelity(mixed, ket) == pytest.approx(0.5, abs=1e-15)
