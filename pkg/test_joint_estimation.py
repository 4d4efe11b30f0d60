"""Tests for packing, the full and profile likelihoods, and the joint BFGS fit."""

import numpy as np
import pytest

from joint_estimation import (
    FitReport,
    PackedParams,
    fit_full,
    log_full_likelihood,
    log_profile_likelihood,
    numerical_gradient,
    pack,
    packed_objective,
    packed_size,
    split_entropies,
    unpack,
)
from mixture_core import (
    MixtureParams,
    SemiDataset,
    em_fit_ignorance,
    log_ignorance_likelihood,
    responsibilities_matrix,
)
from selection_mechanism import SelectionCoeffs, SelectionSpec, log_selection_likelihood
from simulation_bench import apply_mcar, generate_mixture_sample

IDENTITY = SelectionSpec.identity()


def _six_rows():
    return SemiDataset(
        [[0.0, 0.0], [0.1, 3.2], [0.0, 1.4], [0.8, 1.6], [-1.0, -0.5], [0.4, 2.0]],
        [1, 2, 0, 0, 1, 0],
    )


def _random_point(rng, packed):
    return packed.theta + rng.normal(0, 0.3, size=packed.theta.size)


class TestPacking:

    def test_single_standard_normal(self):
        packed = pack(MixtureParams([1.0], [[0.0]], [[[1.0]]]))
        np.testing.assert_array_equal(packed.theta, [0.0, 0.0])

    def test_equal_weights_give_zero_logit(self, true_params):
        assert pack(true_params).theta[0] == 0.0

    def test_size(self, true_params):
        packed = pack(true_params, SelectionCoeffs([1.0, -5.0]))
        assert packed.theta.size == packed_size(2, 2, 2) == 1 + 4 + 6 + 2

    def test_round_trip_parameters(self, true_params):
        params, coeffs = unpack(pack(true_params, SelectionCoeffs([1.0, -5.0])))
        assert params.allclose(true_params, atol=1e-14)
        np.testing.assert_array_equal(coeffs.beta, [1.0, -5.0])

    def test_round_trip_coordinates(self, rng, true_params):
        base = pack(true_params, SelectionCoeffs([0.5, -2.0]))
        for _ in range(10):
            packed = base.with_theta(_random_point(rng, base))
            params, coeffs = unpack(packed)
            np.testing.assert_allclose(pack(params, coeffs).theta, packed.theta, atol=1e-10)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            PackedParams(np.zeros(3), g=2, p=2)


class TestFullLikelihood:

    def test_additive_structure(self, true_params):
        data = _six_rows()
        coeffs = SelectionCoeffs([1.0, -5.0])
        e1, e2 = split_entropies(true_params, data, IDENTITY)
        expected = (log_selection_likelihood(coeffs, IDENTITY, e1, e2)
                    + log_ignorance_likelihood(true_params, data))
        assert log_full_likelihood(true_params, coeffs, IDENTITY, data) == pytest.approx(expected, abs=1e-12)

    def test_zero_coefficients(self, true_params):
        data = _six_rows()
        value = log_full_likelihood(true_params, SelectionCoeffs([0.0, 0.0]), IDENTITY, data)
        expected = log_ignorance_likelihood(true_params, data) + data.n * np.log(0.5)
        assert value == pytest.approx(expected, abs=1e-12)

    def test_fully_labelled_zero_coefficients(self, true_params):
        data = SemiDataset([[0.0, 0.0], [0.2, 2.9], [0.5, 0.1]], [1, 2, 1])
        value = log_full_likelihood(true_params, SelectionCoeffs([0.0, 0.0]), IDENTITY, data)
        expected = log_ignorance_likelihood(true_params, data) + 3 * np.log(0.5)
        assert value == pytest.approx(expected, abs=1e-12)


class TestProfileLikelihood:

    def test_identical_components_give_intercept_only_fit(self):
        params = MixtureParams([0.5, 0.5], [[0.0, 0.0], [0.0, 0.0]], [np.eye(2), np.eye(2)])
        data = SemiDataset([[0.0, 0.1], [1.0, 0.3], [0.5, -1.0], [2.0, 0.0], [-1.0, 1.0]],
                           [1, 2, 0, 0, 0])
        value, coeffs = log_profile_likelihood(params, IDENTITY, data)
        n1, n2, n = 2, 3, 5
        expected = log_ignorance_likelihood(params, data) + n1 * np.log(n1 / n) + n2 * np.log(n2 / n)
        assert value == pytest.approx(expected, abs=1e-6)

    def test_all_labelled_is_flagged(self, true_params):
        data = SemiDataset([[0.0, 0.0], [0.2, 2.9], [0.5, 0.1]], [1, 2, 1])
        value, coeffs = log_profile_likelihood(true_params, IDENTITY, data)
        assert 'degenerate_response' in coeffs.notes
        assert value <= log_ignorance_likelihood(true_params, data)
        assert np.isfinite(value)

    def test_dominates_fixed_coefficients(self, true_params, simulated_data, rng):
        profile, _ = log_profile_likelihood(true_params, IDENTITY, simulated_data)
        for beta in rng.uniform([-3, -12], [4, 4], size=(25, 2)):
            fixed = log_full_likelihood(true_params, SelectionCoeffs(beta), IDENTITY, simulated_data)
            assert profile >= fixed - 1e-6


class TestGradient:

    @pytest.mark.parametrize("all_labelled", [False, True])
    def test_directional_derivatives(self, true_params, simulated_data, rng, all_labelled):
        data = simulated_data
        if all_labelled:
            X, z = generate_mixture_sample(true_params, 60, np.random.default_rng(5))
            data = SemiDataset(X, z)
        base = pack(true_params, SelectionCoeffs([1.0, -5.0]))
        objective = packed_objective(base, IDENTITY, data)
        for _ in range(20):
            theta = _random_point(rng, base)
            direction = rng.normal(size=theta.size)
            direction /= np.linalg.norm(direction)
            h = 1e-5
            central = (objective(theta + h * direction) - objective(theta - h * direction)) / (2 * h)
            directional = numerical_gradient(objective, theta) @ direction
            assert directional == pytest.approx(central, rel=1e-5, abs=1e-5)

    def test_matches_closed_form_at_flat_selection(self, simulated_data):
        # with a zero entropy slope the labelling term is constant in the mixture parameters
        data = simulated_data
        params = MixtureParams([0.35, 0.65], [[0.2, -0.1], [-0.3, 2.8]],
                               [[[1.2, 0.5], [0.5, 0.9]], [[0.8, -0.1], [-0.1, 1.3]]])
        packed = pack(params, SelectionCoeffs([0.7, 0.0]))
        gradient = numerical_gradient(packed_objective(packed, IDENTITY, data), packed.theta)

        weights = responsibilities_matrix(data.features, params)
        labelled = data.labelled_mask
        weights[labelled] = np.eye(2)[data.labels[labelled] - 1]
        expected_means = [np.linalg.solve(params.covariances[k],
                                          weights[:, k] @ (data.features - params.means[k]))
                          for k in range(2)]
        expected_logit = np.sum(weights[:, 0] - params.weights[0])

        assert gradient[0] == pytest.approx(expected_logit, rel=1e-6, abs=1e-6)
        np.testing.assert_allclose(gradient[1:5], np.concatenate(expected_means), rtol=1e-6, atol=1e-6)

    def test_quadratic_exact(self):
        gradient = numerical_gradient(lambda t: -np.sum((t - 1.0) ** 2), np.array([0.0, 2.0, 3.0]))
        np.testing.assert_allclose(gradient, [2.0, -2.0, -4.0], atol=1e-8)


class TestFitFull:

    def test_improves_on_start_and_truth(self, true_params, simulated_data):
        start = em_fit_ignorance(simulated_data, 2, seed=0)
        report = fit_full(simulated_data, 2, init=start)
        assert isinstance(report, FitReport)
        assert report.method == 'full'
        assert report.objective == report.trace[-1]
        assert report.objective >= report.trace[0] - 1e-9
        truth_value = log_full_likelihood(true_params, SelectionCoeffs([1.0, -5.0]), IDENTITY, simulated_data)
        assert report.objective >= truth_value - 1e-6
        assert report.coeffs.beta.size == 2

    def test_fully_labelled_returns_start_fit(self, true_params):
        X, z = generate_mixture_sample(true_params, 80, np.random.default_rng(8))
        data = SemiDataset(X, z)
        report = fit_full(data, 2, seed=0)
        assert 'selection_degenerate' in report.notes
        assert report.params.allclose(em_fit_ignorance(data, 2, seed=0).params, atol=1e-12)

    def test_mcar_slope_near_zero(self, true_params, mcar_slope_bound):
        generator = np.random.default_rng(31)
        X, z = generate_mixture_sample(true_params, 1000, generator)
        data = apply_mcar(X, z, 0.5, generator)
        start = em_fit_ignorance(data, 2, seed=0)
        report = fit_full(data, 2, init=start)
        assert abs(report.coeffs.beta[1]) < 3 * mcar_slope_bound
        np.testing.assert_allclose(report.params.means, start.params.means, atol=0.3)

    def test_relabelled_start_gives_relabelled_fit(self, simulated_data):
        start = em_fit_ignorance(simulated_data, 2, seed=0)
        order = [1, 0]
        swapped_labels = np.where(simulated_data.labels > 0, 3 - simulated_data.labels, 0)
        swapped_data = simulated_data.with_labels(swapped_labels)
        swapped_start = em_fit_ignorance(swapped_data, 2, init=start.params.permuted(order))

        report = fit_full(simulated_data, 2, init=start)
        swapped = fit_full(swapped_data, 2, init=swapped_start)
        assert swapped.objective == pytest.approx(report.objective, rel=1e-5)
        np.testing.assert_allclose(swapped.params.permuted(order).means, report.params.means, atol=0.05)
