"""Shared fixtures: simulation truth, seeded generators, small datasets, isolated output dirs."""

import numpy as np
import pytest

from config import config
from mixture_core import MixtureParams, SemiDataset
from simulation_bench import apply_entropy_missingness, default_true_params, generate_mixture_sample


@pytest.fixture
def true_params() -> MixtureParams:
    return default_true_params()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def simulated_data(true_params) -> SemiDataset:
    """300 draws with entropy-driven missing labels (beta0=1, beta1=-5)."""
    generator = np.random.default_rng(2024)
    features, labels = generate_mixture_sample(true_params, 300, generator)
    return apply_entropy_missingness(features, labels, true_params, 1.0, -5.0, generator)


@pytest.fixture
def four_rows() -> SemiDataset:
    """Two labelled and two unlabelled rows in two dimensions."""
    return SemiDataset(
        [[0.0, 0.0], [0.0, 3.0], [0.0, 1.5], [1.0, 1.0]],
        [1, 2, 0, 0],
    )


@pytest.fixture
def labelled_csv(tmp_path):
    """Fully labelled 10-row, 2-column dataset file."""
    rows = [
        (-0.3, 0.1, 1), (0.2, -0.4, 1), (0.5, 0.6, 1), (-0.8, -0.2, 1), (0.1, 0.3, 1),
        (0.4, 3.2, 2), (-0.6, 2.7, 2), (0.9, 3.5, 2), (-0.1, 2.4, 2), (0.3, 3.1, 2),
    ]
    path = tmp_path / "labelled.csv"
    path.write_text("x1,x2,label\n" + "".join(f"{a},{b},{c}\n" for a, b, c in rows))
    return path


@pytest.fixture
def isolated_outputs(tmp_path, monkeypatch):
    """Point output and checkpoint directories at a temporary location."""
    monkeypatch.setattr(config, 'OUTPUTS_DIR', tmp_path / "outputs")
    monkeypatch.setattr(config, 'CHECKPOINT_DIR', tmp_path / "outputs" / "checkpoints")
    monkeypatch.setattr(config, 'SHOW_PROGRESS', False)
    return tmp_path / "outputs"


@pytest.fixture
def mcar_slope_bound() -> float:
    """Ceiling on mean |fitted entropy slope| under MCAR labelling at n=1000.

    Pilot full-likelihood fits (keep_prob=0.5, n=1000) gave slopes within
    [-0.33, 0.32].
    """
    return 0.35
