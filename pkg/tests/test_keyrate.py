"""Key rates of the three protocols against hand-evaluated references."""

import warnings

import numpy as np
import pytest

import oracles
from tomoqkd import (
    ClippedSpectrumWarning,
    DomainError,
    InconsistentStatisticsError,
    NonuniformMarginalWarning,
    affine_to_joint_state,
    amplitude_damping_qubit,
    bell_basis,
    bell_lambdas,
    bell_state,
    depolarizing,
    dplus1_rate,
    error_vectors,
    holevo_qudit,
    identity_channel,
    kraus_to_joint_state,
    maximally_entangled_state,
    mutual_information_qudit,
    pdl_state,
    predict_probabilities,
    probabilistic_rotation,
    qst_rate,
    random_kraus_channel,
    rfi_observables,
    rfi_rate,
    rfi_state,
    rotation,
    shannon_entropy,
    trace_distance,
    von_neumann_entropy,
)


def _random_joint(d, seed):
    return kraus_to_joint_state(random_kraus_channel(d, np.random.default_rng(seed)))


class TestMutualInformation:
    def test_maximally_entangled_qutrit(self):
        v = maximally_entangled_state(3)
        assert mutual_information_qudit(np.outer(v, v.conj())) == pytest.approx(
            np.log2(3.0), abs=1e-12
        )

    def test_diagonal_state_hand_value(self):
        rho = np.diag([0.5, 0.0, 0.1, 0.4]).astype(complex)
        assert mutual_information_qudit(rho) == pytest.approx(0.609987, abs=1e-6)

    @pytest.mark.parametrize("d", [2, 3])
    def test_matches_brute_force_joint_distribution(self, d):
        for seed in range(20):
            rho = _random_joint(d, seed)
            joint = np.real(np.diag(rho)).reshape(d, d)
            assert mutual_information_qudit(rho) == pytest.approx(
                oracles.classical_mi(joint), abs=1e-12
            )

    def test_skewed_alice_marginal_warns(self):
        with pytest.warns(NonuniformMarginalWarning):
            mutual_information_qudit(pdl_state(0.9, 0.3))


class TestHolevo:
    def test_identity_channel_leaks_nothing(self):
        v = maximally_entangled_state(3)
        assert holevo_qudit(np.outer(v, v.conj())) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("d", [2, 3])
    def test_matches_entropy_difference_oracle(self, d):
        for seed in range(10):
            rho = _random_joint(d, seed)
            expected = oracles.vn_entropy(rho)
            for i in range(d):
                block = rho[i * d : (i + 1) * d, i * d : (i + 1) * d]
                p = np.trace(block).real
                expected -= oracles.vn_entropy(block / p) / d
            assert holevo_qudit(rho) == pytest.approx(expected, abs=1e-12)


class TestTomographyRate:
    def test_identity_reaches_full_alphabet(self):
        v = maximally_entangled_state(3)
        rep = qst_rate(np.outer(v, v.conj()))
        assert rep.raw_rate == pytest.approx(np.log2(3.0), abs=1e-10)

    @pytest.mark.parametrize("p", np.linspace(0.0, 0.95, 15))
    def test_damping_closed_form_grid(self, p):
        rep = qst_rate(affine_to_joint_state(amplitude_damping_qubit(p)))
        assert rep.raw_rate == pytest.approx(oracles.ad_qst(p), abs=1e-10)
        assert rep.mutual_information == pytest.approx(oracles.ad_mi(p), abs=1e-10)
        assert rep.holevo == pytest.approx(oracles.ad_holevo(p), abs=1e-10)

    def test_half_damping_rate_vanishes_exactly(self):
        rep = qst_rate(affine_to_joint_state(amplitude_damping_qubit(0.5)))
        assert abs(rep.raw_rate) < 1e-12

    def test_rotation_by_third_pi(self):
        rep = qst_rate(affine_to_joint_state(rotation(0.0, np.pi / 3.0, 0.0)))
        assert rep.raw_rate == pytest.approx(0.188722, abs=1e-6)
        assert rep.raw_rate == pytest.approx(oracles.rotation_rate(np.pi / 3.0, 0.0), abs=1e-12)

    def test_deep_noise_clips_to_zero(self):
        rep = qst_rate(affine_to_joint_state(amplitude_damping_qubit(0.9)))
        assert rep.raw_rate < 0.0
        assert rep.clipped_rate == 0.0

    @pytest.mark.parametrize("d", [2, 3])
    def test_report_fields_are_consistent(self, d):
        for seed in range(10):
            rep = qst_rate(_random_joint(d, seed))
            assert rep.raw_rate == pytest.approx(
                rep.mutual_information - rep.holevo, abs=1e-12
            )
            assert rep.clipped_rate == max(0.0, rep.raw_rate)


class TestRfiObservables:
    def test_bell_state_is_noiseless_and_fully_correlated(self):
        v = maximally_entangled_state(2)
        obs = rfi_observables(np.outer(v, v.conj()))
        assert obs.Q == pytest.approx(0.0, abs=1e-12)
        assert obs.C == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 0.25, 0.6])
    def test_damping_observables(self, p):
        obs = rfi_observables(affine_to_joint_state(amplitude_damping_qubit(p)))
        assert obs.Q == pytest.approx(p / 2.0, abs=1e-12)
        assert obs.C == pytest.approx(2.0 * (1.0 - p), abs=1e-12)

    @pytest.mark.parametrize("beta", np.linspace(0.0, 2.0 * np.pi, 9))
    def test_frame_rotation_leaves_correlation_sum_alone(self, beta):
        obs = rfi_observables(affine_to_joint_state(rotation(0.0, 0.0, beta)))
        assert obs.C == pytest.approx(2.0, abs=1e-12)

    def test_qutrit_state_rejected(self):
        v = maximally_entangled_state(3)
        with pytest.raises(DomainError):
            rfi_observables(np.outer(v, v.conj()))


class TestRfiState:
    def test_projection_is_idempotent(self):
        rho = _random_joint(2, 3)
        once = rfi_state(rho)
        np.testing.assert_allclose(rfi_state(once), once, atol=1e-12)

    def test_bell_diagonal_states_are_fixed_points(self):
        lam = np.array([0.6, 0.2, 0.15, 0.05])
        b = bell_basis(2)
        rho = (b * lam) @ b.conj().T
        np.testing.assert_allclose(rfi_state(rho), rho, atol=1e-12)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_damping_spectrum_after_projection(self, p):
        s = np.sqrt(1.0 - p)
        expected = np.sort([(2 - p + 2 * s) / 4.0, (2 - p - 2 * s) / 4.0, p / 4.0, p / 4.0])
        evals = np.sort(np.linalg.eigvalsh(rfi_state(affine_to_joint_state(amplitude_damping_qubit(p)))))
        np.testing.assert_allclose(evals, expected, atol=1e-12)

    def test_projection_keeps_marginals_uniform(self):
        for seed in range(5):
            out = rfi_state(_random_joint(2, seed))
            assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
            assert np.trace(out[:2, :2]).real == pytest.approx(0.5, abs=1e-12)


class TestRfiRate:
    @pytest.mark.parametrize("p", np.linspace(0.0, 0.95, 15))
    def test_damping_closed_form_grid(self, p):
        rep = rfi_rate(affine_to_joint_state(amplitude_damping_qubit(p)))
        assert rep.raw_rate == pytest.approx(oracles.ad_rfi(p), abs=1e-10)

    @pytest.mark.parametrize("alpha", np.linspace(0.1, 3.0, 7))
    def test_probabilistic_rotation_closed_form(self, alpha):
        rep = rfi_rate(affine_to_joint_state(probabilistic_rotation(alpha)))
        assert rep.raw_rate == pytest.approx(oracles.prob_rot_rfi(alpha), abs=1e-10)

    def test_rate_equals_one_minus_projected_entropy(self):
        rho = _random_joint(2, 8)
        rep = rfi_rate(rho)
        assert rep.raw_rate == pytest.approx(1.0 - von_neumann_entropy(rfi_state(rho)), abs=1e-12)
        assert rep.raw_rate == pytest.approx(rep.mutual_information - rep.holevo, abs=1e-12)

    def test_never_beats_full_tomography(self):
        for seed in range(100):
            rho = _random_joint(2, seed)
            assert qst_rate(rho).raw_rate >= rfi_rate(rho).raw_rate - 1e-9


class TestBellSpectrum:
    def test_identity_concentrates_on_reference_state(self):
        q = error_vectors(predict_probabilities(identity_channel(3)))
        lam = bell_lambdas(q, 3)
        expected = np.zeros((3, 3))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(lam, expected, atol=1e-12)

    @pytest.mark.parametrize("qq", [0.3, 0.75])
    def test_depolarizing_spectrum(self, qq):
        q = error_vectors(predict_probabilities(depolarizing(3, qq)))
        lam = bell_lambdas(q, 3)
        expected = np.full((3, 3), qq / 9.0)
        expected[0, 0] = 1.0 - qq + qq / 9.0
        np.testing.assert_allclose(lam, expected, atol=1e-10)

    @pytest.mark.parametrize("d", [2, 3])
    def test_recovers_true_bell_diagonal_for_any_channel(self, d):
        # the matched-basis error vectors pin down every lambda_jk exactly
        for seed in range(10):
            ch = random_kraus_channel(d, np.random.default_rng(seed))
            rho = kraus_to_joint_state(ch)
            lam = bell_lambdas(error_vectors(predict_probabilities(ch)), d)
            for j in range(d):
                for k in range(d):
                    v = bell_state(j, k, d)
                    assert lam[j, k] == pytest.approx(
                        float(np.real(np.vdot(v, rho @ v))), abs=1e-10
                    )
            assert lam.sum() == pytest.approx(1.0, abs=1e-10)

    def test_contradictory_vectors_rejected(self):
        q = {(0, 1): [0.0, 1.0], (1, 0): [1.0, 0.0], (1, 1): [1.0, 0.0]}
        with pytest.raises(InconsistentStatisticsError):
            bell_lambdas(q, 2)

    def test_slightly_negative_entry_clipped_with_warning(self):
        q = {(0, 1): [1.0 - 1e-4, 1e-4], (1, 0): [1.0, 0.0], (1, 1): [1.0, 0.0]}
        with pytest.warns(ClippedSpectrumWarning):
            lam = bell_lambdas(q, 2)
        assert np.min(lam) >= 0.0
        assert lam.sum() == pytest.approx(1.0, abs=1e-12)


class TestDplus1Rate:
    def test_identity_qutrit_report(self):
        rep = dplus1_rate(error_vectors(predict_probabilities(identity_channel(3))), 3)
        assert rep.mutual_information == pytest.approx(np.log2(3.0), abs=1e-12)
        assert rep.holevo == pytest.approx(0.0, abs=1e-10)
        assert rep.raw_rate == pytest.approx(np.log2(3.0), abs=1e-10)

    @pytest.mark.parametrize("d", [2, 3])
    def test_rate_collapses_to_spectrum_entropy(self, d):
        for seed in range(5):
            ch = random_kraus_channel(d, np.random.default_rng(seed))
            q = error_vectors(predict_probabilities(ch))
            lam = bell_lambdas(q, d)
            rep = dplus1_rate(q, d)
            assert rep.raw_rate == pytest.approx(
                np.log2(d) - shannon_entropy(lam.ravel()), abs=1e-12
            )
            assert rep.raw_rate == pytest.approx(
                rep.mutual_information - rep.holevo, abs=1e-12
            )

    def test_heavy_depolarizing_clips_to_zero(self):
        rep = dplus1_rate(error_vectors(predict_probabilities(depolarizing(3, 0.9))), 3)
        assert rep.raw_rate < 0.0
        assert rep.clipped_rate == 0.0

    def test_never_beats_full_tomography(self):
        for seed in range(50):
            ch = random_kraus_channel(3, np.random.default_rng(seed))
            qst = qst_rate(kraus_to_joint_state(ch)).raw_rate
            conv = dplus1_rate(error_vectors(predict_probabilities(ch)), 3).raw_rate
            assert qst >= conv - 1e-9


class TestAgainstBellDiagonalization:
    def test_discarding_coherences_only_helps_eve(self):
        from tomoqkd import bell_diagonalize

        for seed in range(30):
            rho = _random_joint(3, seed)
            chi = holevo_qudit(rho)
            chi_bd = holevo_qudit(bell_diagonalize(rho, 3))
            assert chi <= chi_bd + 1e-9

    def test_pdl_tomography_rate_closed_form_point(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonuniformMarginalWarning)
            rep = qst_rate(pdl_state(0.8, 0.25))
        assert rep.raw_rate == pytest.approx(oracles.pdl_rate(0.8, 0.25), abs=1e-10)

    def test_rfi_projection_never_helps(self):
        # the twirled state is a coarse graining, so its rate cannot win
        rho = affine_to_joint_state(probabilistic_rotation(0.7))
        assert rfi_rate(rho).raw_rate <= qst_rate(rho).raw_rate + 1e-12


def test_twirled_states_ordering_sanity():
    """Entropy can only grow when coherences are discarded."""
    for seed in range(20):
        rho = _random_joint(2, seed)
        assert von_neumann_entropy(rfi_state(rho)) >= von_neumann_entropy(rho) - 1e-10


def test_identity_channel_all_three_protocols_agree():
    ch = identity_channel(2)
    rho = kraus_to_joint_state(ch)
    q = error_vectors(predict_probabilities(ch))
    assert qst_rate(rho).raw_rate == pytest.approx(1.0, abs=1e-10)
    assert rfi_rate(rho).raw_rate == pytest.approx(1.0, abs=1e-10)
    assert dplus1_rate(q, 2).raw_rate == pytest.approx(1.0, abs=1e-10)
