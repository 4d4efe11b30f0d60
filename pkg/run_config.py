"""
Run Configuration Files
========================

JSON run configuration shared by the simulate, benchmark, fit and diagnose
commands. Every field has a default, so `{}` is a valid configuration for
the standard two-class simulation.

Example:
    {
      "seed": 7,
      "n_train": 500,
      "beta0": 1.0,
      "beta1": -5.0,
      "alpha_grid": [0.1, 0.5, 0.9],
      "basis": "identity"
    }
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Union

from config import config
from mixture_core import MixtureParams
from selection_mechanism import SelectionSpec
from simulation_bench import DEFAULT_ALPHA_GRID, BenchConfig, default_true_params


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    seed: int = config.DEFAULT_SEED
    g: int = 2
    basis: str = 'identity'
    renyi_order: Optional[float] = None
    tol: Optional[float] = None
    max_iter: Optional[int] = None
    alpha: Optional[float] = None
    alpha_grid: List[float] = field(default_factory=lambda: list(DEFAULT_ALPHA_GRID))
    mechanism: Optional[str] = None
    beta0: float = 1.0
    beta1: float = -5.0
    keep_prob: Optional[float] = None
    n_train: int = 500
    n_test: int = 2000
    replications: int = 100
    true_params: Optional[dict] = None
    include_full: bool = True
    grid_points: int = config.GRID_POINTS
    bandwidth: Optional[float] = None
    max_workers: Optional[int] = None

    def __post_init__(self):
        if self.mechanism is None:
            self.mechanism = 'mcar' if self.keep_prob is not None else 'entropy'
        self.validate()

    def validate(self):
        """Raise ConfigError on any inconsistent setting."""
        try:
            self.alpha_grid = [float(a) for a in self.alpha_grid]
            if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2 ** 64:
                raise ValueError(f"seed must be a non-negative 64-bit integer, got {self.seed!r}")
            if self.g < 1:
                raise ValueError(f"g must be >= 1, got {self.g}")
            if self.mechanism not in ('entropy', 'mcar'):
                raise ValueError(f"mechanism must be 'entropy' or 'mcar', got {self.mechanism!r}")
            if self.mechanism == 'mcar' and self.keep_prob is None:
                raise ValueError("mechanism 'mcar' needs keep_prob")
            if self.mechanism == 'entropy' and self.keep_prob is not None:
                raise ValueError("keep_prob applies to mechanism 'mcar' only")
            if self.keep_prob is not None and not 0.0 <= self.keep_prob <= 1.0:
                raise ValueError(f"keep_prob must lie in [0, 1], got {self.keep_prob}")
            if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
                raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
            if any(not 0.0 <= a <= 1.0 for a in self.alpha_grid):
                raise ValueError(f"alpha_grid entries must lie in [0, 1], got {self.alpha_grid}")
            if self.n_train < 0 or self.n_test < 0:
                raise ValueError("n_train and n_test must be >= 0")
            if self.replications < 1:
                raise ValueError(f"replications must be >= 1, got {self.replications}")
            if self.tol is not None and not self.tol > 0:
                raise ValueError(f"tol must be > 0, got {self.tol}")
            if self.max_iter is not None and self.max_iter < 1:
                raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
            if self.grid_points < 2:
                raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
            if self.bandwidth is not None and not self.bandwidth > 0:
                raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
            self.selection_spec()
            if self.true_params is not None and self.mixture().g != self.g:
                raise ValueError(f"true_params has {self.mixture().g} components but g={self.g}")
        except (TypeError, KeyError, ValueError) as e:
            raise ConfigError(str(e)) from e

    # =============================================================================
    # DERIVED OBJECTS
    # =============================================================================

    def selection_spec(self) -> SelectionSpec:
        return SelectionSpec.from_string(self.basis, self.renyi_order)

    def mixture(self) -> MixtureParams:
        if self.true_params is None:
            return default_true_params()
        return MixtureParams.from_dict(self.true_params)

    def effective_keep_prob(self) -> Optional[float]:
        return self.keep_prob if self.mechanism == 'mcar' else None

    def to_bench_config(self) -> BenchConfig:
        try:
            return BenchConfig(
                true_params=self.mixture(),
                beta0=self.beta0,
                beta1=self.beta1,
                keep_prob=self.effective_keep_prob(),
                n_train=self.n_train,
                n_test=self.n_test,
                replications=self.replications,
                alpha_grid=tuple(self.alpha_grid),
                seed=self.seed,
                spec=self.selection_spec(),
                include_full=self.include_full,
            )
        except ValueError as e:
            raise ConfigError(str(e)) from e

    # =============================================================================
    # SERIALIZATION
    # =============================================================================

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "RunConfig":
        if not isinstance(payload, dict):
            raise ConfigError("Run configuration must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        try:
            return cls(**payload)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
        return cls.from_dict(payload)

    def fingerprint(self) -> str:
        """Digest of the settings that determine benchmark output."""
        payload = self.to_dict()
        payload.pop('max_workers', None)
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def load_run_config(path: Union[str, Path, None]) -> RunConfig:
    """Read a run configuration file; None gives the defaults."""
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}: {e}") from e
    return RunConfig.from_json(text)


def save_run_config(path: Union[str, Path], run_config: RunConfig):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(run_config.to_json() + '\n')


if __name__ == "__main__":
    print(RunConfig(seed=7, alpha_grid=[0.1, 0.5, 0.9]).to_json())
