"""
Missingness Diagnostics Module
===============================

Checks whether labels are missing at random with respect to classification
uncertainty, by comparing the transformed entropies of labelled and
unlabelled observations under a fitted mixture.

Features:
- Labelled / unlabelled split of transformed entropies and their means
- One-sided Kolmogorov-Smirnov test (H1: labelled entropies stochastically smaller)
- One-sided Mann-Whitney U test (H1: Pr(V_U > V_L) > 0.5)
- Gaussian kernel density estimates with Silverman bandwidth
- Nadaraya-Watson estimate of the labelling probability
- Empirical CDF curves for both groups
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.stats import ks_2samp, mannwhitneyu, norm

from config import config
from mixture_core import MixtureParams, SemiDataset, entropy_vector, transformed_entropy

# Grid points with less total kernel weight than this have no NW estimate
MIN_KERNEL_WEIGHT = 1e-300


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class EntropySplit:
    """Transformed entropies of the labelled and unlabelled rows."""

    labelled_values: np.ndarray
    unlabelled_values: np.ndarray

    def __post_init__(self):
        for name in ('labelled_values', 'unlabelled_values'):
            values = np.array(getattr(self, name), dtype=float).reshape(-1)
            if not np.all(np.isfinite(values)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, values)

    @property
    def n_labelled(self) -> int:
        return self.labelled_values.size

    @property
    def n_unlabelled(self) -> int:
        return self.unlabelled_values.size

    def require_both(self):
        if self.n_labelled == 0 or self.n_unlabelled == 0:
            raise ValueError(
                f"Both groups need values (labelled={self.n_labelled}, unlabelled={self.n_unlabelled})"
            )


@dataclass(frozen=True)
class TestResult:
    """Statistic and one-sided p-value of a two-sample test."""

    __test__ = False  # not a pytest class

    statistic: float
    p_value: float
    method: str

    def to_dict(self) -> dict:
        return {'statistic': self.statistic, 'p_value': self.p_value, 'method': self.method}


@dataclass(frozen=True, eq=False)
class CurveEstimate:
    """Curve evaluated on a grid with the bandwidth used; NaN marks undefined points."""

    grid: np.ndarray
    values: np.ndarray
    bandwidth: float
    notes: Tuple[str, ...] = field(default=())

    def to_frame(self, column: str = 'value') -> pd.DataFrame:
        return pd.DataFrame({'grid': self.grid, column: self.values})


# =============================================================================
# ENTROPY SUMMARIES
# =============================================================================

def entropy_split(data: SemiDataset, params: MixtureParams,
                  renyi_order: Optional[float] = None) -> EntropySplit:
    """
    Transformed entropy of every row under params, partitioned by labelling status.

    Raises:
        ValueError: if params has fewer than two components
    """
    if params.g < 2:
        raise ValueError(f"Transformed entropy needs g >= 2, got {params.g}")
    v = np.atleast_1d(transformed_entropy(entropy_vector(data.features, params, renyi_order), params.g))
    mask = data.labelled_mask
    return EntropySplit(v[mask], v[~mask])


def summarize_entropy(split: EntropySplit) -> Tuple[float, float]:
    """(mean labelled, mean unlabelled) transformed entropy."""
    split.require_both()
    return float(np.mean(split.labelled_values)), float(np.mean(split.unlabelled_values))


# =============================================================================
# HYPOTHESIS TESTS
# =============================================================================

def _ecdf(sample_sorted: np.ndarray, points: np.ndarray) -> np.ndarray:
    return np.searchsorted(sample_sorted, points, side='right') / sample_sorted.size


def ks_one_sided(split: EntropySplit) -> TestResult:
    """
    One-sided KS statistic D+ = sup_v [F_L(v) - F_U(v)] over the pooled sample.

    The p-value is the asymptotic bound exp(-2 m D+^2), m = n_L n_U / (n_L + n_U).
    """
    split.require_both()
    result = ks_2samp(split.labelled_values, split.unlabelled_values,
                      alternative='greater', method='asymp')
    d_plus = max(0.0, float(result.statistic))
    m = split.n_labelled * split.n_unlabelled / (split.n_labelled + split.n_unlabelled)
    p_value = float(np.clip(np.exp(-2.0 * m * d_plus ** 2), 0.0, 1.0))
    return TestResult(statistic=d_plus, p_value=p_value, method='ks_one_sided')


def mann_whitney_u(split: EntropySplit) -> TestResult:
    """
    U = #{(u, l): V_U > V_L} + 0.5 #{ties}.

    One-sided p-value from the normal approximation with tie-corrected variance
    and continuity correction. A fully tied sample has p-value 1.
    """
    split.require_both()
    pooled = np.concatenate([split.labelled_values, split.unlabelled_values])
    if np.ptp(pooled) == 0:
        return TestResult(statistic=split.n_labelled * split.n_unlabelled / 2.0, p_value=1.0,
                          method='mann_whitney_u')
    result = mannwhitneyu(split.unlabelled_values, split.labelled_values, alternative='greater',
                          use_continuity=True, method='asymptotic')
    return TestResult(statistic=float(result.statistic), p_value=float(np.clip(result.pvalue, 0.0, 1.0)),
                      method='mann_whitney_u')


# =============================================================================
# KERNEL ESTIMATES
# =============================================================================

def select_bandwidth(values) -> Tuple[float, Tuple[str, ...]]:
    """
    Silverman's rule 0.9 min(sd, IQR/1.34) n^(-1/5).

    Falls back to the sd when the IQR is zero, and to the configured floor
    (flagged 'bandwidth_floor') when the sample has no spread.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size == 0:
        raise ValueError("Bandwidth selection needs at least one value")
    sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    q75, q25 = np.percentile(v, [75, 25])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    h = 0.9 * spread * v.size ** (-0.2)
    if not np.isfinite(h) or h < config.BANDWIDTH_FLOOR:
        return config.BANDWIDTH_FLOOR, ('bandwidth_floor',)
    return h, ()


def _resolve_bandwidth(values: np.ndarray, bandwidth: Optional[float]) -> Tuple[float, Tuple[str, ...]]:
    if bandwidth is None:
        return select_bandwidth(values)
    if not bandwidth > 0:
        raise ValueError(f"Bandwidth must be > 0, got {bandwidth}")
    return float(bandwidth), ()


def default_grid(values, points: Optional[int] = None, bandwidth: Optional[float] = None) -> np.ndarray:
    """Evenly spaced grid covering the sample plus three bandwidths either side."""
    v = np.asarray(values, dtype=float).reshape(-1)
    points = points or config.GRID_POINTS
    h, _ = _resolve_bandwidth(v, bandwidth)
    return np.linspace(v.min() - 3 * h, v.max() + 3 * h, points)


def kde(values, grid, bandwidth: Optional[float] = None) -> CurveEstimate:
    """Gaussian kernel density (1/nh) sum phi((x - v_i)/h) at each grid point."""
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size == 0:
        raise ValueError("Kernel density needs at least one value")
    grid = np.asarray(grid, dtype=float).reshape(-1)
    h, notes = _resolve_bandwidth(v, bandwidth)
    density = norm.pdf((grid[:, None] - v[None, :]) / h).sum(axis=1) / (v.size * h)
    return CurveEstimate(grid=grid, values=density, bandwidth=h, notes=notes)


def nadaraya_watson(entropies, indicators, grid, bandwidth: Optional[float] = None) -> CurveEstimate:
    """
    Kernel-weighted share of labelled rows near each grid point.

    Grid points whose total kernel weight is below MIN_KERNEL_WEIGHT are NaN
    and flagged 'undefined_points'.
    """
    e = np.asarray(entropies, dtype=float).reshape(-1)
    r = np.asarray(indicators, dtype=float).reshape(-1)
    if e.size != r.size:
        raise ValueError(f"Length mismatch: {e.size} entropies vs {r.size} indicators")
    if e.size == 0:
        raise ValueError("Nadaraya-Watson estimate needs at least one value")
    if not np.all((r == 0) | (r == 1)):
        raise ValueError("Indicators must be 0 or 1")
    grid = np.asarray(grid, dtype=float).reshape(-1)
    h, notes = _resolve_bandwidth(e, bandwidth)

    weights = norm.pdf((grid[:, None] - e[None, :]) / h)
    total = weights.sum(axis=1)
    defined = total >= MIN_KERNEL_WEIGHT
    values = np.full(grid.size, np.nan)
    values[defined] = np.clip((weights[defined] @ r) / total[defined], 0.0, 1.0)
    if not np.all(defined):
        notes = notes + ('undefined_points',)
    return CurveEstimate(grid=grid, values=values, bandwidth=h, notes=notes)


def ecdf_curves(split: EntropySplit, grid) -> pd.DataFrame:
    """Right-continuous empirical CDFs of both groups on the grid."""
    split.require_both()
    grid = np.asarray(grid, dtype=float).reshape(-1)
    return pd.DataFrame({
        'grid': grid,
        'ecdf_labelled': _ecdf(np.sort(split.labelled_values), grid),
        'ecdf_unlabelled': _ecdf(np.sort(split.unlabelled_values), grid),
    })


# =============================================================================
# FULL DIAGNOSTIC PASS
# =============================================================================

@dataclass
class DiagnosticsReport:
    """Everything the diagnose command writes out."""

    mean_labelled: float
    mean_unlabelled: float
    ks: TestResult
    mann_whitney: TestResult
    density_labelled: CurveEstimate
    density_unlabelled: CurveEstimate
    labelling_curve: CurveEstimate
    ecdf: pd.DataFrame
    notes: List[str] = field(default_factory=list)

    def summary_dict(self) -> dict:
        return {
            'mean_labelled': self.mean_labelled,
            'mean_unlabelled': self.mean_unlabelled,
            'ks_one_sided': self.ks.to_dict(),
            'mann_whitney_u': self.mann_whitney.to_dict(),
            'bandwidths': {
                'density_labelled': self.density_labelled.bandwidth,
                'density_unlabelled': self.density_unlabelled.bandwidth,
                'labelling_curve': self.labelling_curve.bandwidth,
            },
            'notes': list(self.notes),
        }

    def density_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'grid': self.density_labelled.grid,
            'density_labelled': self.density_labelled.values,
            'density_unlabelled': self.density_unlabelled.values,
        })


def run_diagnostics(data: SemiDataset, params: MixtureParams,
                    grid_points: Optional[int] = None, bandwidth: Optional[float] = None,
                    renyi_order: Optional[float] = None) -> DiagnosticsReport:
    """Entropy split, both tests and all curves on one shared grid."""
    split = entropy_split(data, params, renyi_order)
    mean_l, mean_u = summarize_entropy(split)
    pooled = np.concatenate([split.labelled_values, split.unlabelled_values])
    grid = default_grid(pooled, grid_points, bandwidth)

    density_l = kde(split.labelled_values, grid, bandwidth)
    density_u = kde(split.unlabelled_values, grid, bandwidth)
    indicators = np.concatenate([np.ones(split.n_labelled), np.zeros(split.n_unlabelled)])
    curve = nadaraya_watson(pooled, indicators, grid, bandwidth)

    notes = sorted({note for c in (density_l, density_u, curve) for note in c.notes})
    return DiagnosticsReport(
        mean_labelled=mean_l,
        mean_unlabelled=mean_u,
        ks=ks_one_sided(split),
        mann_whitney=mann_whitney_u(split),
        density_labelled=density_l,
        density_unlabelled=density_u,
        labelling_curve=curve,
        ecdf=ecdf_curves(split, grid),
        notes=notes,
    )


if __name__ == "__main__":
    demo = EntropySplit([-6.0, -4.5, -3.0, -1.0], [-1.5, 0.0, 0.5, 2.0])
    print("Means:", summarize_entropy(demo))
    print(ks_one_sided(demo))
    print(mann_whitney_u(demo))
