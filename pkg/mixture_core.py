"""
Mixture Core Module
====================

Gaussian mixture representation and the ignorance-likelihood estimator for
partially labelled data.

Features:
- Validated, immutable parameter and dataset containers
- Cholesky-based Gaussian log densities (single seam for other families)
- Log-space posterior responsibilities with max-subtraction
- Shannon, Renyi and logit-transformed entropies
- Labelled / unlabelled block log-likelihoods
- Row-weighted EM engine shared by the ignorance and FSC estimators
- Initialization policy: labelled class moments or k-means++ seeding
"""

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.special import entr, logit, logsumexp

from config import config

# Label code for an unlabelled row. Observed labels are 1..g.
MISSING_LABEL = 0

_LOG_2PI = np.log(2.0 * np.pi)

# Permutation search over components is exhaustive up to this many components
_MAX_PERMUTATION_SEARCH = 6


class FactorizationError(ValueError):
    """Covariance matrix is not symmetric positive definite."""


class LabelRangeError(ValueError):
    """Observed label outside 1..g."""


# =============================================================================
# DOMAIN TYPES
# =============================================================================

def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class MixtureParams:
    """Mixing weights plus per-component Gaussian mean and covariance."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).reshape(-1)
        means = np.array(self.means, dtype=float)
        covariances = np.array(self.covariances, dtype=float)

        if means.ndim == 1:
            means = means.reshape(len(weights), -1)
        g = len(weights)
        if g < 1:
            raise ValueError("Mixture needs at least one component")
        if means.shape[0] != g or covariances.ndim != 3 or covariances.shape[0] != g:
            raise ValueError(
                f"Component count mismatch: {g} weights, {means.shape[0]} means, "
                f"{covariances.shape[0] if covariances.ndim == 3 else '?'} covariances"
            )
        p = means.shape[1]
        if covariances.shape[1:] != (p, p):
            raise ValueError(f"Covariances must be {p}x{p}, got {covariances.shape[1:]}")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(means))
                and np.all(np.isfinite(covariances))):
            raise ValueError("Mixture parameters must be finite")
        if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"Weights must be positive and sum to 1, got {weights}")
        for h, cov in enumerate(covariances):
            if np.max(np.abs(cov - cov.T)) > 1e-12:
                raise ValueError(f"Covariance {h + 1} is not symmetric")
            if np.linalg.eigvalsh(cov)[0] <= 0:
                raise FactorizationError(f"Covariance {h + 1} is not positive definite")

        object.__setattr__(self, 'weights', _readonly(weights))
        object.__setattr__(self, 'means', _readonly(means))
        object.__setattr__(self, 'covariances', _readonly(covariances))

    @property
    def g(self) -> int:
        return len(self.weights)

    @property
    def p(self) -> int:
        return self.means.shape[1]

    @property
    def components(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.means, self.covariances))

    @classmethod
    def from_components(cls, weights: Sequence[float],
                        components: Sequence[Tuple[Sequence[float], Sequence[Sequence[float]]]]) -> "MixtureParams":
        means = np.array([np.asarray(m, dtype=float) for m, _ in components])
        covs = np.array([np.asarray(c, dtype=float) for _, c in components])
        return cls(weights, means, covs)

    def permuted(self, order: Sequence[int]) -> "MixtureParams":
        """New parameters whose component h is this object's component order[h]."""
        order = np.asarray(order, dtype=int)
        return MixtureParams(self.weights[order], self.means[order], self.covariances[order])

    def to_dict(self) -> dict:
        return {
            'weights': self.weights.tolist(),
            'means': self.means.tolist(),
            'covariances': self.covariances.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MixtureParams":
        return cls(payload['weights'], payload['means'], payload['covariances'])

    def allclose(self, other: "MixtureParams", atol: float = 1e-12) -> bool:
        return (self.g == other.g and self.p == other.p
                and np.allclose(self.weights, other.weights, rtol=0, atol=atol)
                and np.allclose(self.means, other.means, rtol=0, atol=atol)
                and np.allclose(self.covariances, other.covariances, rtol=0, atol=atol))


@dataclass(frozen=True, eq=False)
class SemiDataset:
    """
    Feature matrix with optional class labels.

    Labels are stored as integers, 1..g for labelled rows and MISSING_LABEL (0)
    for unlabelled rows; the labelling indicators are derived from them.
    """

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.array(self.features, dtype=float)
        if features.ndim == 1:
            features = features.reshape(-1, 1) if features.size else features.reshape(0, 1)
        if features.ndim != 2:
            raise ValueError(f"Features must be an n x p matrix, got shape {features.shape}")
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if len(labels) != features.shape[0]:
            raise ValueError(f"{features.shape[0]} feature rows but {len(labels)} labels")
        if np.any(labels < 0):
            raise LabelRangeError("Labels must be 1..g or missing")
        if not np.all(np.isfinite(features)):
            raise ValueError("Features must be finite")
        object.__setattr__(self, 'features', _readonly(features))
        object.__setattr__(self, 'labels', _readonly(labels))

    @classmethod
    def from_arrays(cls, features, labels: Optional[Sequence] = None) -> "SemiDataset":
        """Build a dataset where labels may contain None / NaN for missing entries."""
        features = np.asarray(features, dtype=float)
        n = features.shape[0] if features.ndim > 0 else 0
        if labels is None:
            return cls(features, np.zeros(n, dtype=np.int64))
        coded = []
        for value in labels:
            if value is None or (isinstance(value, float) and np.isnan(value)):
                coded.append(MISSING_LABEL)
            else:
                coded.append(int(value))
        return cls(features, np.array(coded, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def indicators(self) -> np.ndarray:
        return (self.labels != MISSING_LABEL).astype(np.int64)

    @property
    def labelled_mask(self) -> np.ndarray:
        return self.labels != MISSING_LABEL

    @property
    def n_labelled(self) -> int:
        return int(np.count_nonzero(self.labelled_mask))

    @property
    def n_unlabelled(self) -> int:
        return self.n - self.n_labelled

    @property
    def labelled_features(self) -> np.ndarray:
        return self.features[self.labelled_mask]

    @property
    def labelled_classes(self) -> np.ndarray:
        """Zero-based class indices of the labelled rows."""
        return self.labels[self.labelled_mask] - 1

    @property
    def unlabelled_features(self) -> np.ndarray:
        return self.features[~self.labelled_mask]

    def with_labels(self, labels: np.ndarray) -> "SemiDataset":
        return SemiDataset(self.features, labels)


@dataclass
class FitReport:
    """Estimated parameters plus the objective trace and convergence metadata."""

    params: MixtureParams
    objective: float
    trace: List[float]
    converged: bool
    iterations: int
    method: str
    coeffs: Optional[object] = None  # SelectionCoeffs for the full-likelihood fit
    alpha: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.trace:
            raise ValueError("FitReport trace must not be empty")
        self.trace = [float(v) for v in self.trace]
        self.objective = self.trace[-1]

    def add_note(self, note: str):
        if note not in self.notes:
            self.notes.append(note)

    def to_dict(self) -> dict:
        return {
            'method': self.method,
            'alpha': self.alpha,
            'converged': self.converged,
            'iterations': self.iterations,
            'objective': self.objective,
            'trace': list(self.trace),
            'params': self.params.to_dict(),
            'coeffs': self.coeffs.to_dict() if self.coeffs is not None else None,
            'notes': list(self.notes),
        }


# =============================================================================
# DENSITIES AND RESPONSIBILITIES
# =============================================================================

def _cholesky(cov: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.cholesky(cov, lower=True)
    except np.linalg.LinAlgError as e:
        raise FactorizationError(f"Cholesky factorization failed: {e}") from e


def _log_gaussian_rows(X: np.ndarray, mean: np.ndarray, chol: np.ndarray) -> np.ndarray:
    n, p = X.shape
    if n == 0:
        return np.empty(0)
    diff = (X - mean).T
    # soln = L^-1 (x - mu), so the quadratic form is |soln|^2
    soln = scipy.linalg.solve_triangular(chol, diff, lower=True)
    maha = np.sum(soln ** 2, axis=0)
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    return -0.5 * (p * _LOG_2PI + logdet + maha)


def log_component_density(x, mean, cov) -> float:
    """
    Multivariate Gaussian log density of one point.

    This is the single component-density seam; other families plug in here.

    Raises:
        FactorizationError: if cov is not positive definite
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    if x.shape != mean.shape or cov.shape != (len(mean), len(mean)):
        raise ValueError(f"Dimension mismatch: x {x.shape}, mean {mean.shape}, cov {cov.shape}")
    return float(_log_gaussian_rows(x.reshape(1, -1), mean, _cholesky(cov))[0])


def log_density_matrix(X: np.ndarray, params: MixtureParams) -> np.ndarray:
    """n x g matrix of log f(x_i; theta_h)."""
    X = np.asarray(X, dtype=float).reshape(-1, params.p)
    out = np.empty((X.shape[0], params.g))
    for h, (mean, cov) in enumerate(params.components):
        out[:, h] = _log_gaussian_rows(X, mean, _cholesky(cov))
    return out


def log_joint_matrix(X: np.ndarray, params: MixtureParams) -> np.ndarray:
    """n x g matrix of log pi_h + log f(x_i; theta_h)."""
    return log_density_matrix(X, params) + np.log(params.weights)


def responsibilities_matrix(X: np.ndarray, params: MixtureParams) -> np.ndarray:
    """Posterior class probabilities for every row of X, computed in log space."""
    lj = log_joint_matrix(X, params)
    if lj.shape[0] == 0:
        return lj
    tau = np.exp(lj - logsumexp(lj, axis=1, keepdims=True))
    return tau / tau.sum(axis=1, keepdims=True)


def responsibilities(x, params: MixtureParams) -> np.ndarray:
    """Posterior class probabilities of a single feature vector."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return responsibilities_matrix(x.reshape(1, -1), params)[0]


# =============================================================================
# ENTROPY MEASURES
# =============================================================================

def shannon_entropy(tau) -> np.ndarray:
    """
    Shannon entropy of a probability vector (or of each row of a matrix).

    Uses 0 log 0 = 0; the result is clipped to [0, log g].
    """
    tau = np.asarray(tau, dtype=float)
    g = tau.shape[-1]
    e = np.sum(entr(tau), axis=-1)
    e = np.clip(e, 0.0, np.log(g))
    return float(e) if e.ndim == 0 else e


def renyi_entropy(tau, gamma: float) -> np.ndarray:
    """
    Renyi entropy of order gamma, (1 - gamma)^-1 log sum_h tau_h^gamma.

    Raises:
        ValueError: for gamma == 1 (use shannon_entropy) or gamma < 0
    """
    if gamma == 1:
        raise ValueError("Renyi order 1 is the Shannon limit; use shannon_entropy")
    if gamma < 0:
        raise ValueError(f"Renyi order must be >= 0, got {gamma}")
    tau = np.asarray(tau, dtype=float)
    powered = np.where(tau > 0, np.power(np.where(tau > 0, tau, 1.0), gamma), 0.0)
    h = np.log(np.sum(powered, axis=-1)) / (1.0 - gamma)
    return float(h) if np.ndim(h) == 0 else h


def transformed_entropy(e, g: int, clamp: Optional[float] = None):
    """
    Logit of the entropy rescaled to the unit interval.

    The entropy is clamped to [eps, log g - eps] first so that the result is
    finite at both ends.

    Raises:
        ValueError: if g < 2
    """
    if g < 2:
        raise ValueError(f"Transformed entropy needs g >= 2, got {g}")
    eps = config.ENTROPY_CLAMP if clamp is None else clamp
    log_g = np.log(g)
    clamped = np.clip(np.asarray(e, dtype=float), eps, log_g - eps)
    out = logit(clamped / log_g)
    return float(out) if np.ndim(out) == 0 else out


def entropy_vector(X: np.ndarray, params: MixtureParams, renyi_order: Optional[float] = None) -> np.ndarray:
    """Per-row classification entropy under params (Shannon unless renyi_order is given)."""
    tau = responsibilities_matrix(X, params)
    if tau.shape[0] == 0:
        return np.zeros(0)
    if renyi_order is None:
        return np.atleast_1d(shannon_entropy(tau))
    return np.atleast_1d(renyi_entropy(tau, renyi_order))


# =============================================================================
# IGNORANCE LIKELIHOOD
# =============================================================================

def _check_compatible(params: MixtureParams, data: SemiDataset):
    if data.n and data.p != params.p:
        raise ValueError(f"Data has {data.p} features but mixture has dimension {params.p}")
    if data.n_labelled and data.labels.max() > params.g:
        bad = int(np.argmax(data.labels > params.g))
        raise LabelRangeError(
            f"Row {bad + 1} has label {data.labels[bad]} outside 1..{params.g}"
        )


def log_labelled_block(params: MixtureParams, data: SemiDataset) -> float:
    """Sum over labelled rows of log pi_z + log f(x; theta_z)."""
    _check_compatible(params, data)
    if data.n_labelled == 0:
        return 0.0
    lj = log_joint_matrix(data.labelled_features, params)
    return float(np.sum(lj[np.arange(lj.shape[0]), data.labelled_classes]))


def log_unlabelled_block(params: MixtureParams, data: SemiDataset) -> float:
    """Sum over unlabelled rows of log sum_h pi_h f(x; theta_h)."""
    _check_compatible(params, data)
    if data.n_unlabelled == 0:
        return 0.0
    lj = log_joint_matrix(data.unlabelled_features, params)
    return float(np.sum(logsumexp(lj, axis=1)))


def log_ignorance_likelihood(params: MixtureParams, data: SemiDataset) -> float:
    """Log-likelihood of observed features and labels, ignoring the labelling mechanism."""
    return log_labelled_block(params, data) + log_unlabelled_block(params, data)


# =============================================================================
# M-STEP AND INITIALIZATION
# =============================================================================

def _covariance_floor(X: np.ndarray) -> float:
    variance = float(np.mean(np.var(X, axis=0))) if X.shape[0] > 1 else 0.0
    if not np.isfinite(variance) or variance <= 0:
        variance = 1.0
    return config.COVARIANCE_FLOOR_SCALE * variance


def _regularize(cov: np.ndarray, floor: float) -> Tuple[np.ndarray, bool]:
    """Add floor * I (growing tenfold) until the smallest eigenvalue clears the floor."""
    cov = 0.5 * (cov + cov.T)
    if np.linalg.eigvalsh(cov)[0] > floor:
        return cov, False
    p = cov.shape[0]
    jitter = floor
    for _ in range(40):
        candidate = cov + jitter * np.eye(p)
        if np.linalg.eigvalsh(candidate)[0] > 0:
            try:
                _cholesky(candidate)
                return candidate, True
            except FactorizationError:
                pass
        jitter *= 10.0
    raise FactorizationError("Covariance could not be regularized to positive definite")


def weighted_m_step(X: np.ndarray, weights: np.ndarray,
                    previous: Optional[MixtureParams] = None,
                    floor: Optional[float] = None) -> Tuple[MixtureParams, List[str]]:
    """
    M-step from an n x g matrix of (row weight x responsibility) values.

    Args:
        X: n x p feature matrix
        weights: n x g non-negative weights
        previous: parameters kept for components with no weight
        floor: covariance floor (default from the data)

    Returns:
        (params, notes) where notes lists any regularization applied
    """
    n, p = X.shape
    g = weights.shape[1]
    floor = _covariance_floor(X) if floor is None else floor
    notes = []

    totals = weights.sum(axis=0)
    tiny = 1e-10 * max(float(totals.sum()), 1e-300)
    means = np.empty((g, p))
    covs = np.empty((g, p, p))
    for h in range(g):
        if totals[h] <= tiny:
            if previous is None:
                raise FactorizationError(f"Component {h + 1} received no weight")
            means[h] = previous.means[h]
            covs[h] = previous.covariances[h]
            notes.append('empty_component')
            continue
        means[h] = weights[:, h] @ X / totals[h]
        diff = X - means[h]
        cov = (weights[:, h, None] * diff).T @ diff / totals[h]
        covs[h], regularized = _regularize(cov, floor)
        if regularized:
            notes.append('covariance_regularized')

    mix = np.maximum(totals, tiny)
    mix = mix / mix.sum()
    return MixtureParams(mix, means, covs), sorted(set(notes))


def supervised_mle(features: np.ndarray, classes: np.ndarray, g: int) -> MixtureParams:
    """
    Closed-form estimate from fully labelled data.

    Args:
        features: n x p matrix
        classes: zero-based class index per row
        g: number of components

    Returns:
        Class proportions, class means and (1/n_h) class covariances
    """
    features = np.asarray(features, dtype=float)
    onehot = np.zeros((len(classes), g))
    onehot[np.arange(len(classes)), classes] = 1.0
    params, _ = weighted_m_step(features, onehot)
    return params


def _kmeanspp_params(X: np.ndarray, g: int, rng: np.random.Generator, floor: float) -> MixtureParams:
    n, p = X.shape
    centers = [X[rng.integers(n)]]
    for _ in range(1, g):
        d2 = np.min(((X[:, None, :] - np.array(centers)[None]) ** 2).sum(axis=2), axis=1)
        total = d2.sum()
        idx = rng.integers(n) if total <= 0 else rng.choice(n, p=d2 / total)
        centers.append(X[idx])
    centers = np.array(centers)
    assign = np.argmin(((X[:, None, :] - centers[None]) ** 2).sum(axis=2), axis=1)

    pooled = np.cov(X, rowvar=False, bias=True).reshape(p, p)
    pooled, _ = _regularize(pooled, floor)
    counts = np.bincount(assign, minlength=g).astype(float)
    means = np.empty((g, p))
    covs = np.empty((g, p, p))
    for h in range(g):
        members = X[assign == h]
        means[h] = members.mean(axis=0) if len(members) else centers[h]
        if len(members) >= p + 1:
            cov = np.cov(members, rowvar=False, bias=True).reshape(p, p)
            covs[h], _ = _regularize(cov, floor)
        else:
            covs[h] = pooled
    weights = np.maximum(counts, 1.0)
    return MixtureParams(weights / weights.sum(), means, covs)


def _best_permutation(params: MixtureParams, data: SemiDataset) -> Tuple[MixtureParams, float]:
    best, best_value = params, log_ignorance_likelihood(params, data)
    if data.n_labelled == 0 or params.g > _MAX_PERMUTATION_SEARCH:
        return best, best_value
    for order in itertools.permutations(range(params.g)):
        candidate = params.permuted(order)
        value = log_ignorance_likelihood(candidate, data)
        if value > best_value:
            best, best_value = candidate, value
    return best, best_value


def initialize_params(data: SemiDataset, g: int, seed: Optional[int] = None,
                      rng: Optional[np.random.Generator] = None,
                      restarts: Optional[int] = None) -> MixtureParams:
    """
    Starting values for EM.

    Uses labelled per-class moments when every class has at least p+1 labelled
    rows; otherwise k-means++ seeding on all features with several restarts,
    keeping the seed (and component ordering) with the best ignorance likelihood.
    """
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    if data.n < g:
        raise ValueError(f"Need at least g={g} rows, got {data.n}")
    if data.n_labelled and data.labels.max() > g:
        raise LabelRangeError(f"Labels exceed g={g}")

    X = data.features
    floor = _covariance_floor(X)
    counts = np.bincount(data.labelled_classes, minlength=g)
    if data.n_labelled and np.all(counts >= data.p + 1):
        onehot = np.zeros((data.n_labelled, g))
        onehot[np.arange(data.n_labelled), data.labelled_classes] = 1.0
        params, _ = weighted_m_step(data.labelled_features, onehot, floor=floor)
        return params

    rng = rng if rng is not None else np.random.default_rng(seed)
    restarts = config.INIT_RESTARTS if restarts is None else restarts
    best, best_value = None, -np.inf
    for _ in range(max(1, restarts)):
        candidate, value = _best_permutation(_kmeanspp_params(X, g, rng, floor), data)
        if best is None or value > best_value:
            best, best_value = candidate, value
    return best


# =============================================================================
# EM ENGINE
# =============================================================================

def run_weighted_em(data: SemiDataset, init: MixtureParams,
                    labelled_weight: float, unlabelled_weight: float,
                    tol: float, max_iter: int, method: str) -> FitReport:
    """
    EM for the row-weighted objective

        labelled_weight * A(params) + unlabelled_weight * B(params)

    where A and B are the labelled and unlabelled block log-likelihoods.
    Labelled rows keep their one-hot responsibilities; unlabelled rows are
    re-estimated each E-step. Convergence is tested on the objective rescaled
    by n / (total row weight) so that equal-weight variants stop together.
    """
    _check_compatible(init, data)
    X = data.features
    g = init.g
    mask = data.labelled_mask
    row_weights = np.where(mask, labelled_weight, unlabelled_weight).astype(float)
    total_weight = float(row_weights.sum())
    if total_weight <= 0:
        raise ValueError("All rows have zero weight")
    scale = data.n / total_weight

    fixed = np.zeros((data.n, g))
    fixed[np.flatnonzero(mask), data.labelled_classes] = 1.0
    floor = _covariance_floor(X)

    def objective(params: MixtureParams) -> float:
        return (labelled_weight * log_labelled_block(params, data)
                + unlabelled_weight * log_unlabelled_block(params, data))

    params = init
    trace = [objective(params)]
    notes: List[str] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        tau = fixed.copy()
        if data.n_unlabelled:
            tau[~mask] = responsibilities_matrix(X[~mask], params)
        params, step_notes = weighted_m_step(X, tau * row_weights[:, None],
                                             previous=params, floor=floor)
        notes.extend(n for n in step_notes if n not in notes)
        trace.append(objective(params))
        if abs(trace[-1] - trace[-2]) * scale < tol:
            converged = True
            break

    report = FitReport(params=params, objective=trace[-1], trace=trace,
                       converged=converged, iterations=iterations, method=method)
    for note in notes:
        report.add_note(note)
    if not converged:
        report.add_note('max_iter_reached')
    return report


def em_fit_ignorance(data: SemiDataset, g: int, init: Optional[MixtureParams] = None,
                     seed: Optional[int] = None, tol: Optional[float] = None,
                     max_iter: Optional[int] = None) -> FitReport:
    """
    Maximize the ignorance likelihood by EM.

    Args:
        data: partially labelled dataset
        g: number of components
        init: starting parameters (default: initialization policy with seed)
        seed: seed for the initialization policy
        tol: absolute log-likelihood change for convergence
        max_iter: maximum EM iterations

    Returns:
        FitReport with method 'ignorance'
    """
    if data.n < g:
        raise ValueError(f"Need at least g={g} rows, got {data.n}")
    if init is None:
        init = initialize_params(data, g, seed=seed)
    elif init.g != g:
        raise ValueError(f"Initial parameters have {init.g} components, expected {g}")
    return run_weighted_em(
        data, init, 1.0, 1.0,
        tol=config.EM_TOL if tol is None else tol,
        max_iter=config.EM_MAX_ITER if max_iter is None else max_iter,
        method='ignorance',
    )


if __name__ == "__main__":
    demo = MixtureParams([0.5, 0.5], [[0.0, 0.0], [0.0, 3.0]],
                         [[[1.0, 0.7], [0.7, 1.0]], np.eye(2)])
    print("Responsibilities at origin:", responsibilities([0.0, 0.0], demo))
    print("Shannon entropy of (0.9, 0.1):", shannon_entropy([0.9, 0.1]))
    print("Transformed entropy at log(2)/2:", transformed_entropy(np.log(2) / 2, 2))
