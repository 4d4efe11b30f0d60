"""Tests for data generation, missingness mechanisms, metrics and the replication harness."""

from fractions import Fraction
from itertools import combinations

import numpy as np
import pandas as pd
import pytest
from scipy.special import expit
from scipy.stats import multivariate_normal

from checkpointing import CheckpointManager
from mixture_core import MixtureParams, entropy_vector
from simulation_bench import (
    BenchConfig,
    BenchResult,
    adjusted_rand_index,
    align_components,
    apply_entropy_missingness,
    apply_mcar,
    generate_mixture_sample,
    log_loss,
    paired_difference,
    predict_class,
    predict_classes,
    replication_rng,
    replication_seed,
    run_benchmark,
    summarize_records,
)


def _pair_count_ari(truth, predicted):
    """ARI from explicit enumeration of every pair of observations."""
    n = len(truth)
    both = only_truth = only_pred = 0
    for i, j in combinations(range(n), 2):
        same_t = truth[i] == truth[j]
        same_p = predicted[i] == predicted[j]
        both += same_t and same_p
        only_truth += same_t and not same_p
        only_pred += same_p and not same_t
    pairs = n * (n - 1) // 2
    t_pairs, p_pairs = both + only_truth, both + only_pred
    expected = Fraction(t_pairs * p_pairs, pairs)
    maximum = Fraction(t_pairs + p_pairs, 2)
    if maximum == expected:
        return None
    return (both - expected) / (maximum - expected)


def _small_bench(**overrides):
    settings = dict(n_train=80, n_test=150, replications=3, alpha_grid=(0.5,), include_full=False, seed=7)
    settings.update(overrides)
    return BenchConfig(**settings)


class TestGenerateMixtureSample:

    def test_empty(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 0, rng)
        assert X.shape == (0, 2)
        assert z.shape == (0,)

    def test_negative_size_rejected(self, true_params, rng):
        with pytest.raises(ValueError):
            generate_mixture_sample(true_params, -1, rng)

    def test_standard_normal_moments(self, rng):
        params = MixtureParams([1.0], [[0.0, 0.0]], [np.eye(2)])
        X, z = generate_mixture_sample(params, 100_000, rng)
        assert set(np.unique(z)) == {1}
        np.testing.assert_allclose(X.mean(axis=0), [0.0, 0.0], atol=0.05)
        np.testing.assert_allclose(np.cov(X.T, bias=True), np.eye(2), atol=0.05)

    def test_class_proportions_and_correlation(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 100_000, rng)
        assert abs(np.mean(z == 1) - 0.5) < 0.01
        first = X[z == 1]
        assert np.corrcoef(first.T)[0, 1] == pytest.approx(0.7, abs=0.02)
        np.testing.assert_allclose(X[z == 2].mean(axis=0), [0.0, 3.0], atol=0.03)


class TestMissingness:

    def test_zero_coefficients_behave_like_coin_flips(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 20_000, rng)
        data = apply_entropy_missingness(X, z, true_params, 0.0, 0.0, rng)
        assert abs(data.n_labelled / data.n - 0.5) < 0.02

    def test_retention_matches_mechanism(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 20_000, rng)
        data = apply_entropy_missingness(X, z, true_params, 1.0, -5.0, rng)
        probs = expit(1.0 - 5.0 * entropy_vector(X, true_params))
        se = np.sqrt(np.sum(probs * (1 - probs))) / len(probs)
        assert abs(data.n_labelled / data.n - probs.mean()) < 3 * se

    def test_retained_labels_are_true_labels(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 500, rng)
        data = apply_entropy_missingness(X, z, true_params, 1.0, -5.0, rng)
        kept = data.labels > 0
        np.testing.assert_array_equal(data.labels[kept], z[kept])
        np.testing.assert_array_equal(data.features, X)

    def test_mcar_extremes(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 50, rng)
        assert apply_mcar(X, z, 1.0, rng).n_unlabelled == 0
        assert apply_mcar(X, z, 0.0, rng).n_labelled == 0

    def test_mcar_fraction(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 100_000, rng)
        assert abs(apply_mcar(X, z, 0.7, rng).n_labelled / 100_000 - 0.7) < 0.01

    def test_mcar_rejects_bad_probability(self, true_params, rng):
        X, z = generate_mixture_sample(true_params, 5, rng)
        with pytest.raises(ValueError):
            apply_mcar(X, z, 1.2, rng)


class TestPrediction:

    def test_identical_components_pick_first(self):
        params = MixtureParams([0.5, 0.5], [[0.0], [0.0]], [[[1.0]], [[1.0]]])
        assert predict_class(params, [0.3]) == 1

    def test_second_component_region(self, true_params):
        assert predict_class(true_params, [0.0, 5.0]) == 2
        assert predict_class(true_params, [0.0, -1.0]) == 1

    def test_single_component(self):
        params = MixtureParams([1.0], [[2.0]], [[[1.0]]])
        np.testing.assert_array_equal(predict_classes(params, [[0.0], [5.0], [-3.0]]), [1, 1, 1])


class TestAdjustedRandIndex:

    def test_perfect_agreement(self):
        assert adjusted_rand_index([1, 1, 2, 2, 3], [1, 1, 2, 2, 3]) == 1.0

    def test_label_permutation(self):
        assert adjusted_rand_index([1, 1, 2, 2], [2, 2, 1, 1]) == 1.0

    def test_crossed_partition(self):
        assert adjusted_rand_index([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(-0.5, abs=1e-15)

    def test_trivial_partitions(self):
        assert adjusted_rand_index([1, 1, 1], [2, 2, 2]) == 1.0

    def test_too_short(self):
        with pytest.raises(ValueError):
            adjusted_rand_index([1], [1])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            adjusted_rand_index([1, 2, 1], [1, 2])

    def test_matches_pair_enumeration(self, rng):
        checked = 0
        for _ in range(200):
            n = int(rng.integers(2, 13))
            truth = rng.integers(1, 4, size=n)
            predicted = rng.integers(1, 4, size=n)
            oracle = _pair_count_ari(truth.tolist(), predicted.tolist())
            if oracle is None:
                continue
            assert adjusted_rand_index(truth, predicted) == float(oracle)
            checked += 1
        assert checked > 100

    def test_relabelling_invariance(self, rng):
        truth = rng.integers(1, 4, size=40)
        predicted = rng.integers(1, 4, size=40)
        renamed = np.array([7, 3, 5])[predicted - 1]
        assert adjusted_rand_index(truth, renamed) == adjusted_rand_index(truth, predicted)
        assert adjusted_rand_index(predicted, truth) == adjusted_rand_index(truth, predicted)


class TestLogLoss:

    def test_uniform_predictor(self):
        params = MixtureParams([0.5, 0.5], [[0.0], [0.0]], [[[1.0]], [[1.0]]])
        X = np.linspace(-2, 2, 7).reshape(-1, 1)
        z = np.array([1, 2, 1, 2, 2, 1, 1])
        assert log_loss(params, X, z) == pytest.approx(7 * np.log(2), abs=1e-12)

    def test_empty_test_set(self, true_params):
        assert log_loss(true_params, np.empty((0, 2)), np.empty(0, dtype=int)) == 0.0

    def test_matches_naive_sum(self, true_params):
        X = np.array([[0.0, 0.0], [0.5, 2.5], [-1.0, 1.0], [0.2, 1.6], [1.0, 4.0]])
        z = np.array([1, 2, 1, 2, 2])
        total = 0.0
        for x, label in zip(X, z):
            dens = [w * multivariate_normal.pdf(x, m, c) for w, m, c in
                    zip(true_params.weights, true_params.means, true_params.covariances)]
            total -= np.log(dens[label - 1] / sum(dens))
        assert log_loss(true_params, X, z) == pytest.approx(total, rel=1e-10)

    def test_alignment_undoes_label_switch(self, true_params, rng):
        swapped = true_params.permuted([1, 0])
        alignment = align_components(swapped, true_params)
        np.testing.assert_array_equal(alignment, [1, 0])
        X, z = generate_mixture_sample(true_params, 50, rng)
        assert log_loss(swapped, X, z, alignment) == pytest.approx(log_loss(true_params, X, z), rel=1e-12)

    def test_alignment_must_be_permutation(self, true_params):
        with pytest.raises(ValueError):
            log_loss(true_params, [[0.0, 0.0]], [1], alignment=[0, 0])


class TestBenchConfig:

    def test_defaults(self):
        bench = BenchConfig()
        assert bench.n_train == 500
        assert bench.n_test == 2000
        assert bench.replications == 100
        assert bench.mechanism == 'entropy'
        assert bench.alpha_grid[0] == 0.05 and bench.alpha_grid[-1] == 0.95

    def test_mcar_mechanism(self):
        assert BenchConfig(keep_prob=0.4).mechanism == 'mcar'

    @pytest.mark.parametrize("overrides", [
        {'replications': 0},
        {'n_train': 1},
        {'alpha_grid': (0.5, 1.5)},
        {'keep_prob': -0.1},
    ])
    def test_invalid_settings(self, overrides):
        with pytest.raises(ValueError):
            BenchConfig(**overrides)


class TestReplicationStreams:

    def test_same_key_same_stream(self):
        a = replication_rng(11, 3).random(5)
        b = replication_rng(11, 3).random(5)
        np.testing.assert_array_equal(a, b)

    def test_different_replications_differ(self):
        assert not np.array_equal(replication_rng(11, 3).random(5), replication_rng(11, 4).random(5))
        assert replication_seed(11, 3) != replication_seed(11, 4)


class TestSummaries:

    def test_summarize_records(self):
        records = pd.DataFrame({
            'replication': [0, 1, 0, 1],
            'estimator': ['truth', 'truth', 'fsc', 'fsc'],
            'alpha': [np.nan, np.nan, 0.5, 0.5],
            'ari': [0.5, 0.7, 0.4, 0.4],
            'log_loss': [10.0, 12.0, 11.0, 13.0],
        })
        summary = summarize_records(records)
        assert summary['estimator'].tolist() == ['truth', 'fsc']
        truth = summary.iloc[0]
        assert truth['mean_ari'] == pytest.approx(0.6)
        assert truth['se_ari'] == pytest.approx(0.1)
        assert summary.iloc[1]['se_ari'] == pytest.approx(0.0)
        assert summary.iloc[1]['mean_log_loss'] == pytest.approx(12.0)

    def test_paired_difference(self):
        records = pd.DataFrame({
            'replication': [0, 1, 2, 0, 1],
            'estimator': ['ignorance'] * 3 + ['fsc'] * 2,
            'alpha': [np.nan] * 3 + [0.1, 0.1],
            'ari': [0.5, 0.6, 0.7, 0.4, 0.4],
            'log_loss': [1.0] * 5,
        })
        result = BenchResult(config=_small_bench(), records=records,
                             failures=pd.DataFrame(), replication_seeds=[])
        mean, se, k = paired_difference(result, 'ignorance', 'fsc', 'ari', second_alpha=0.1)
        assert k == 2
        assert mean == pytest.approx(0.15)
        assert se == pytest.approx(0.05)


class TestRunBenchmark:

    def test_record_layout(self):
        bench = _small_bench(alpha_grid=(0.2, 0.5))
        result = run_benchmark(bench, max_workers=2, show_progress=False)
        assert len(result.replication_seeds) == 3
        assert result.n_failed == 0
        first = result.records[result.records['replication'] == 0]
        assert first['estimator'].tolist() == ['truth', 'ignorance', 'fsc', 'fsc']
        assert first['alpha'].tolist()[2:] == [0.2, 0.5]
        assert result.records['ari'].between(-1, 1).all()
        assert (result.records['log_loss'] >= 0).all()

    def test_serial_and_parallel_agree(self):
        bench = _small_bench(include_full=True)
        serial = run_benchmark(bench, max_workers=1, show_progress=False)
        parallel = run_benchmark(bench, max_workers=3, show_progress=False)
        pd.testing.assert_frame_equal(serial.records, parallel.records)
        assert serial.replication_seeds == parallel.replication_seeds

    def test_half_weight_matches_ignorance_when_fully_labelled(self):
        bench = _small_bench(replications=1, keep_prob=1.0)
        records = run_benchmark(bench, show_progress=False).records.set_index('estimator')
        assert records.loc['fsc', 'ari'] == records.loc['ignorance', 'ari']
        assert records.loc['fsc', 'log_loss'] == pytest.approx(records.loc['ignorance', 'log_loss'], abs=1e-6)

    def test_failures_are_recorded_and_excluded(self):
        bench = _small_bench(keep_prob=0.0, alpha_grid=(0.5, 1.0))
        result = run_benchmark(bench, max_workers=2, show_progress=False)
        assert result.n_failed == 3
        assert set(result.failures['error_type']) == {'UnderdeterminedFitError'}
        assert not ((result.records['estimator'] == 'fsc') & (result.records['alpha'] == 1.0)).any()
        summary = result.summary()
        assert summary.loc[summary['estimator'] == 'fsc', 'alpha'].tolist() == [0.5]

    def test_resume_from_checkpoints(self, tmp_path):
        bench = _small_bench()
        manager = CheckpointManager(run_id='bench', fingerprint='abc', base_dir=tmp_path, verbose=False)
        first = run_benchmark(bench, checkpoint=manager, show_progress=False)
        assert len(manager.list_checkpoints()) == 3

        reopened = CheckpointManager(run_id='bench', fingerprint='abc', base_dir=tmp_path, verbose=False)
        resumed = run_benchmark(bench, checkpoint=reopened, show_progress=False)
        pd.testing.assert_frame_equal(first.records, resumed.records)

    @pytest.mark.slow
    def test_mcar_full_matches_ignorance(self, mcar_slope_bound):
        bench = BenchConfig(keep_prob=0.5, n_train=1000, replications=50, alpha_grid=())
        result = run_benchmark(bench, show_progress=False)
        for metric in ('ari', 'log_loss'):
            mean, se, k = paired_difference(result, 'full', 'ignorance', metric)
            assert k >= 45
            assert abs(mean) < 2 * se + 1e-12
        slopes = result.records.loc[result.records['estimator'] == 'full', 'selection_slope']
        assert slopes.notna().all()
        assert slopes.abs().mean() < mcar_slope_bound

    @pytest.mark.slow
    def test_estimator_ordering(self):
        grid = tuple(round(0.1 * k, 1) for k in range(1, 10))
        result = run_benchmark(BenchConfig(alpha_grid=grid), show_progress=False)
        summary = result.summary()
        fsc = summary[summary['estimator'] == 'fsc'].set_index('alpha')
        assert sorted(fsc.index) == list(grid)

        best_ari_alpha = fsc['mean_ari'].idxmax()
        best_loss_alpha = fsc['mean_log_loss'].idxmin()
        assert best_ari_alpha == 0.5
        assert fsc.loc[0.5, 'mean_ari'] > max(fsc.loc[0.1, 'mean_ari'], fsc.loc[0.9, 'mean_ari'])

        diff, se, _ = paired_difference(result, 'full', 'fsc', 'ari', second_alpha=best_ari_alpha)
        assert diff > se
        diff, se, _ = paired_difference(result, 'full', 'fsc', 'log_loss', second_alpha=best_loss_alpha)
        assert -diff > se

        for estimator in ('ignorance', 'full'):
            diff, se, _ = paired_difference(result, 'truth', estimator, 'log_loss')
            assert diff <= 2 * se
