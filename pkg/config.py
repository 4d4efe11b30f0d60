"""
Configuration Management for Entropy-Aware Mixture Estimation
==============================================================

This module centralizes the numerical defaults and file locations used by the
estimators, the simulation benchmark and the command-line front end.
Settings are loaded from environment variables (.env file) and have sensible defaults.

Usage:
    from config import config
    print(config.EM_TOL)
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    """Centralized configuration for mixture fitting, diagnostics and benchmarks."""

    # =============================================================================
    # DIRECTORY PATHS
    # =============================================================================
    BASE_DIR = Path(__file__).parent
    OUTPUTS_DIR = Path(os.getenv('OUTPUTS_DIR', str(BASE_DIR / "outputs")))
    CHECKPOINT_DIR = OUTPUTS_DIR / "checkpoints"

    # =============================================================================
    # MIXTURE CORE / IGNORANCE EM
    # =============================================================================
    EM_TOL = float(os.getenv('EM_TOL', '1e-8'))
    EM_MAX_ITER = int(os.getenv('EM_MAX_ITER', '1000'))
    INIT_RESTARTS = int(os.getenv('INIT_RESTARTS', '10'))

    # Clamp applied to the entropy before the logit transform
    ENTROPY_CLAMP = float(os.getenv('ENTROPY_CLAMP', '1e-10'))

    # Ridge added to a collapsing covariance, relative to mean feature variance
    COVARIANCE_FLOOR_SCALE = float(os.getenv('COVARIANCE_FLOOR_SCALE', '1e-8'))

    # =============================================================================
    # SELECTION MECHANISM (logistic fit)
    # =============================================================================
    NEWTON_TOL = float(os.getenv('NEWTON_TOL', '1e-10'))
    NEWTON_MAX_ITER = int(os.getenv('NEWTON_MAX_ITER', '100'))
    PROFILE_RIDGE = float(os.getenv('PROFILE_RIDGE', '1e-8'))
    SEPARATION_BOUND = float(os.getenv('SEPARATION_BOUND', '1e3'))

    # =============================================================================
    # FULL LIKELIHOOD (quasi-Newton)
    # =============================================================================
    FULL_TOL = float(os.getenv('FULL_TOL', '1e-6'))
    FULL_MAX_ITER = int(os.getenv('FULL_MAX_ITER', '500'))
    FD_STEP = float(os.getenv('FD_STEP', '1e-5'))

    # =============================================================================
    # BENCHMARK
    # =============================================================================
    BENCH_MAX_WORKERS = int(os.getenv('BENCH_MAX_WORKERS', '4'))
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '20240101'))
    SHOW_PROGRESS = _env_bool('SHOW_PROGRESS', 'true')

    # =============================================================================
    # DIAGNOSTICS
    # =============================================================================
    GRID_POINTS = int(os.getenv('GRID_POINTS', '200'))
    BANDWIDTH_FLOOR = float(os.getenv('BANDWIDTH_FLOOR', '1e-6'))

    def ensure_dirs(self):
        """Create output and checkpoint directories if they don't exist."""
        self.OUTPUTS_DIR.mkdir(parents=True, exist_ok=True)
        self.CHECKPOINT_DIR.mkdir(parents=True, exist_ok=True)


# Create a singleton instance for easy import
config = Config()


if __name__ == "__main__":
    # Print configuration for debugging
    print("Entropy-Aware Mixture Estimation Configuration")
    print("=" * 60)
    print(f"Base Directory: {Config.BASE_DIR}")
    print(f"Outputs Directory: {Config.OUTPUTS_DIR}")
    print(f"\nEM Settings:")
    print(f"  Tolerance: {Config.EM_TOL}")
    print(f"  Max Iterations: {Config.EM_MAX_ITER}")
    print(f"  Init Restarts: {Config.INIT_RESTARTS}")
    print(f"\nFull Likelihood Settings:")
    print(f"  Tolerance: {Config.FULL_TOL}")
    print(f"  Max Iterations: {Config.FULL_MAX_ITER}")
    print(f"  Profile Ridge: {Config.PROFILE_RIDGE}")
    print(f"\nBenchmark Settings:")
    print(f"  Max Workers: {Config.BENCH_MAX_WORKERS}")
    print(f"  Default Seed: {Config.DEFAULT_SEED}")
