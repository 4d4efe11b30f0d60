"""
Entropy-Aware Mixture Classification - Command Line
====================================================

Front end tying the estimators, diagnostics and simulation benchmark together:

1. fit        Fit a Gaussian mixture to a partially labelled CSV
2. diagnose   Test whether labels go missing with classification entropy
3. simulate   Draw a dataset from a run configuration
4. benchmark  Replicated comparison of the estimators

Usage:
    python main_cli.py fit --data data.csv --method full --g 2
    python main_cli.py fit --data data.csv --method fsc --alpha 0.5
    python main_cli.py diagnose --data data.csv --out outputs/diagnostics.json
    python main_cli.py simulate --config run.json --out outputs/simulated.csv
    python main_cli.py benchmark --config run.json --resume

Exit codes:
    0  success
    1  input error (malformed data or configuration)
    2  numerical non-convergence (results are still written)
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from checkpointing import CheckpointManager, CheckpointMismatchError, resume_from_checkpoint
from config import config
from dataset_io import (
    DatasetFormatError,
    read_dataset,
    write_dataset,
    write_json,
    write_plot_data,
    write_truth_sidecar,
)
from fractional_supervision import UnderdeterminedFitError, fit_fsc
from joint_estimation import fit_full, log_profile_likelihood
from missingness_diagnostics import run_diagnostics
from mixture_core import FitReport, LabelRangeError, SemiDataset, em_fit_ignorance
from run_config import ConfigError, RunConfig, load_run_config
from selection_mechanism import SeparationError
from simulation_bench import (
    ESTIMATORS,
    apply_entropy_missingness,
    apply_mcar,
    generate_mixture_sample,
    paired_difference,
    run_benchmark,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2

INPUT_ERRORS = (DatasetFormatError, LabelRangeError, ConfigError, UnderdeterminedFitError,
                SeparationError, CheckpointMismatchError)


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Semi-supervised Gaussian mixtures with entropy-driven missing labels"
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_common(sub, data_required: bool):
        sub.add_argument('--config', type=str, help='Run configuration JSON file')
        if data_required:
            sub.add_argument('--data', type=str, required=True, help='Dataset CSV (x1..xp, label)')
        sub.add_argument('--seed', type=int, help='Random seed (overrides the configuration)')
        sub.add_argument('--out', type=str, help='Output file')
        sub.add_argument('--quiet', action='store_true', help='Suppress progress output')

    def add_fit_options(sub):
        sub.add_argument('--method', choices=['ignorance', 'full', 'fsc'], default='ignorance',
                         help='Estimator (default: ignorance)')
        sub.add_argument('--alpha', type=float, help='FSC weight on the labelled block')
        sub.add_argument('--g', type=int, help='Number of mixture components')
        sub.add_argument('--basis', type=str,
                         help='Labelling basis: identity, poly:d or tpoly:d')
        sub.add_argument('--tol', type=float, help='Convergence tolerance')
        sub.add_argument('--max-iter', type=int, dest='max_iter', help='Maximum iterations')

    fit_parser = subparsers.add_parser('fit', help='Fit a mixture to a dataset')
    add_common(fit_parser, data_required=True)
    add_fit_options(fit_parser)

    diagnose_parser = subparsers.add_parser('diagnose', help='Entropy-based missingness diagnostics')
    add_common(diagnose_parser, data_required=True)
    add_fit_options(diagnose_parser)

    simulate_parser = subparsers.add_parser('simulate', help='Simulate a partially labelled dataset')
    add_common(simulate_parser, data_required=False)

    bench_parser = subparsers.add_parser('benchmark', help='Run the simulation benchmark')
    add_common(bench_parser, data_required=False)
    bench_parser.add_argument('--resume', action='store_true',
                              help='Resume from the latest checkpoint (if available)')
    bench_parser.add_argument('--no-checkpoints', action='store_true', dest='no_checkpoints',
                              help='Disable checkpointing')
    bench_parser.add_argument('--workers', type=int, help='Concurrent replications')

    return parser.parse_args(argv)


# =============================================================================
# HELPERS
# =============================================================================

def _say(args: argparse.Namespace, message: str):
    if not getattr(args, 'quiet', False):
        print(message)


def _run_config(args: argparse.Namespace) -> RunConfig:
    """Configuration file (or defaults) with command-line overrides applied."""
    run_config = load_run_config(args.config)
    overrides = {}
    for name in ('seed', 'g', 'basis', 'alpha', 'tol', 'max_iter'):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if overrides:
        payload = run_config.to_dict()
        payload.update(overrides)
        run_config = RunConfig.from_dict(payload)
    return run_config


def _output_path(args: argparse.Namespace, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    config.ensure_dirs()
    return config.OUTPUTS_DIR / default_name


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}_{suffix}")


def fit_dataset(data: SemiDataset, method: str, run_config: RunConfig) -> FitReport:
    """Dispatch to the chosen estimator with the configured options."""
    g = run_config.g
    options = {'seed': run_config.seed, 'tol': run_config.tol, 'max_iter': run_config.max_iter}
    if method == 'ignorance':
        return em_fit_ignorance(data, g, **options)
    if method == 'full':
        return fit_full(data, g, spec=run_config.selection_spec(), **options)
    if run_config.alpha is None:
        raise ConfigError("method 'fsc' needs --alpha (or 'alpha' in the configuration)")
    return fit_fsc(data, g, run_config.alpha, **options)


def _dataset_summary(data: SemiDataset) -> dict:
    return {'n': data.n, 'p': data.p, 'n_labelled': data.n_labelled,
            'n_unlabelled': data.n_unlabelled}


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_fit(args: argparse.Namespace) -> int:
    """Fit one estimator and write its JSON report."""
    run_config = _run_config(args)
    data = read_dataset(args.data, g=run_config.g)
    _say(args, f"📊 Loaded {data.n:,} rows ({data.n_labelled:,} labelled, {data.n_unlabelled:,} unlabelled)")

    report = fit_dataset(data, args.method, run_config)
    payload = report.to_dict()
    payload['dataset'] = _dataset_summary(data)
    payload['config'] = run_config.to_dict()
    if args.method == 'full':
        profile_value, _ = log_profile_likelihood(report.params, run_config.selection_spec(), data)
        payload['profile_objective'] = profile_value

    out = _output_path(args, f"fit_{args.method}.json")
    write_json(out, payload)
    _say(args, f"💾 Saved {args.method} fit to: {out}")

    if not report.converged:
        _say(args, f"⚠️  {args.method} fit did not converge after {report.iterations} iterations")
        return EXIT_NOT_CONVERGED
    _say(args, f"✓ Converged in {report.iterations} iterations (objective {report.objective:.6f})")
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    """Fit, then write entropy diagnostics plus KDE, labelling-curve and ECDF grids."""
    run_config = _run_config(args)
    if run_config.g < 2:
        raise ConfigError(f"diagnostics need g >= 2, got {run_config.g}")
    data = read_dataset(args.data, g=run_config.g)
    if data.n_labelled == 0 or data.n_unlabelled == 0:
        raise DatasetFormatError(
            "diagnostics compare labelled with unlabelled rows, but the dataset has "
            f"{data.n_labelled} labelled and {data.n_unlabelled} unlabelled rows"
        )

    report = fit_dataset(data, args.method, run_config)
    diagnostics = run_diagnostics(data, report.params, grid_points=run_config.grid_points,
                                  bandwidth=run_config.bandwidth,
                                  renyi_order=run_config.renyi_order)

    out = _output_path(args, "diagnostics.json")
    curves = {
        'density': _sibling(out, 'density.csv'),
        'labelling_curve': _sibling(out, 'labelling.csv'),
        'ecdf': _sibling(out, 'ecdf.csv'),
    }
    write_plot_data(curves['density'], diagnostics.density_frame())
    write_plot_data(curves['labelling_curve'], diagnostics.labelling_curve.to_frame('labelling_probability'))
    write_plot_data(curves['ecdf'], diagnostics.ecdf)

    payload = diagnostics.summary_dict()
    payload.update({
        'dataset': _dataset_summary(data),
        'fit': {'method': report.method, 'converged': report.converged,
                'objective': report.objective, 'notes': report.notes},
        'plot_data': {name: path.name for name, path in curves.items()},
    })
    write_json(out, payload)

    _say(args, f"📊 Mean transformed entropy: labelled {diagnostics.mean_labelled:.4f}, "
               f"unlabelled {diagnostics.mean_unlabelled:.4f}")
    _say(args, f"   KS D+ = {diagnostics.ks.statistic:.4f} (p = {diagnostics.ks.p_value:.3g})")
    _say(args, f"   Mann-Whitney U = {diagnostics.mann_whitney.statistic:.1f} "
               f"(p = {diagnostics.mann_whitney.p_value:.3g})")
    _say(args, f"💾 Saved diagnostics to: {out}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_simulate(args: argparse.Namespace) -> int:
    """Draw one training set with missing labels and write it with a truth sidecar."""
    run_config = _run_config(args)
    truth = run_config.mixture()
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(run_config.seed)))

    features, labels = generate_mixture_sample(truth, run_config.n_train, rng)
    if run_config.mechanism == 'mcar':
        data = apply_mcar(features, labels, run_config.keep_prob, rng)
        mechanism = {'kind': 'mcar', 'keep_prob': run_config.keep_prob}
    else:
        data = apply_entropy_missingness(features, labels, truth, run_config.beta0,
                                         run_config.beta1, rng)
        mechanism = {'kind': 'entropy', 'beta0': run_config.beta0, 'beta1': run_config.beta1}

    out = _output_path(args, "simulated.csv")
    write_dataset(out, data)
    sidecar = write_truth_sidecar(out, labels, truth, mechanism, run_config.seed)
    _say(args, f"✓ Simulated {data.n:,} rows, {data.n_labelled:,} labelled")
    _say(args, f"💾 Saved dataset to: {out} (truth: {sidecar.name})")
    return EXIT_OK


def _comparisons(result) -> list:
    """Paired differences of the full-likelihood fit against every other estimator."""
    rows = []
    others = [('ignorance', None)] + [('fsc', a) for a in result.config.alpha_grid]
    for other, alpha in others:
        for metric in ('ari', 'log_loss'):
            mean, se, k = paired_difference(result, 'full', other, metric, second_alpha=alpha)
            rows.append({'first': 'full', 'second': other, 'second_alpha': alpha,
                         'metric': metric, 'mean_difference': mean, 'se': se, 'pairs': k})
    return rows


def cmd_benchmark(args: argparse.Namespace) -> int:
    """Run the replicated comparison and write aggregates, records and failures."""
    run_config = _run_config(args)
    bench = run_config.to_bench_config()

    checkpoint = None
    if args.resume:
        checkpoint = resume_from_checkpoint(fingerprint=run_config.fingerprint())
    if checkpoint is None and not args.no_checkpoints:
        checkpoint = CheckpointManager(fingerprint=run_config.fingerprint(), verbose=not args.quiet)
        _say(args, f"💾 Checkpointing enabled (run ID: {checkpoint.run_id})")

    _say(args, "=" * 80)
    _say(args, "SIMULATION BENCHMARK")
    _say(args, "=" * 80)
    _say(args, f"Replications: {bench.replications}  n_train: {bench.n_train}  "
               f"n_test: {bench.n_test}  mechanism: {bench.mechanism}")
    _say(args, "=" * 80 + "\n")

    result = run_benchmark(bench, max_workers=args.workers or run_config.max_workers,
                           checkpoint=checkpoint, show_progress=not args.quiet)

    out = _output_path(args, "benchmark.json")
    summary = result.summary()
    paths = {
        'summary': _sibling(out, 'summary.csv'),
        'records': _sibling(out, 'records.csv'),
        'failures': _sibling(out, 'failures.csv'),
    }
    write_plot_data(paths['summary'], summary)
    write_plot_data(paths['records'], result.records)
    write_plot_data(paths['failures'], result.failures)

    payload = {
        'config': run_config.to_dict(),
        'estimators': [e for e in ESTIMATORS if e in set(result.records['estimator'])],
        'summary': summary.to_dict(orient='records'),
        'comparisons': _comparisons(result) if bench.include_full else [],
        'failures': result.n_failed,
        'replication_seeds': result.replication_seeds,
        'files': {name: path.name for name, path in paths.items()},
    }
    write_json(out, payload)

    if result.n_failed:
        _say(args, f"⚠️  {result.n_failed} fits failed (see {paths['failures'].name})")
    _say(args, f"💾 Saved benchmark results to: {out}")
    return EXIT_OK


COMMANDS = {
    'fit': cmd_fit,
    'diagnose': cmd_diagnose,
    'simulate': cmd_simulate,
    'benchmark': cmd_benchmark,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_arguments(argv)
    try:
        return COMMANDS[args.command](args)
    except INPUT_ERRORS as e:
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_INPUT_ERROR
    except (ValueError, OSError) as e:
        print(f"❌ {args.command} failed: {type(e).__name__}: {e}")
        return EXIT_INPUT_ERROR
    except KeyboardInterrupt:
        print("\n\n⚠️  Interrupted by user")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
