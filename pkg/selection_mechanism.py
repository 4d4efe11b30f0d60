"""
Selection Mechanism Module
===========================

Logistic model for the probability that an observation is labelled, written
as a basis expansion of its classification entropy.

Features:
- Basis descriptors: raw-entropy polynomials and transformed-entropy polynomials
- Implicit logistic design (labelled rows first, response 1; unlabelled rows, response 0)
- Newton-Raphson logistic fit with step halving and optional ridge
- Separation detection for unpenalized fits
- Numerically stable selection log-likelihood and its score
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit, log_expit

from config import config
from mixture_core import transformed_entropy


class SeparationError(RuntimeError):
    """Logistic fit has no finite maximum likelihood estimate."""


# =============================================================================
# BASIS SPECIFICATION
# =============================================================================

@dataclass(frozen=True)
class BasisTerm:
    """One basis function: entropy (kind 'poly') or transformed entropy ('tpoly') to a power."""

    kind: str
    degree: int = 1

    def __post_init__(self):
        if self.kind not in ('poly', 'tpoly'):
            raise ValueError(f"Unknown basis kind: {self.kind}")
        if self.degree < 1:
            raise ValueError(f"Basis degree must be >= 1, got {self.degree}")

    def evaluate(self, e: np.ndarray, g: int) -> np.ndarray:
        base = transformed_entropy(e, g) if self.kind == 'tpoly' else e
        return np.power(np.asarray(base, dtype=float), self.degree)


@dataclass(frozen=True)
class SelectionSpec:
    """Ordered basis functions b_1..b_T, and the entropy measure they are applied to."""

    terms: Tuple[BasisTerm, ...] = (BasisTerm('poly', 1),)
    renyi_order: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))
        if len(self.terms) < 1:
            raise ValueError("Selection model needs at least one basis function")
        if self.renyi_order is not None and (self.renyi_order < 0 or self.renyi_order == 1):
            raise ValueError(f"Renyi order must be >= 0 and != 1, got {self.renyi_order}")

    @property
    def T(self) -> int:
        return len(self.terms)

    @classmethod
    def identity(cls) -> "SelectionSpec":
        return cls()

    @classmethod
    def polynomial(cls, degree: int) -> "SelectionSpec":
        return cls(tuple(BasisTerm('poly', d) for d in range(1, degree + 1)))

    @classmethod
    def transformed_polynomial(cls, degree: int) -> "SelectionSpec":
        return cls(tuple(BasisTerm('tpoly', d) for d in range(1, degree + 1)))

    @classmethod
    def from_string(cls, text: str, renyi_order: Optional[float] = None) -> "SelectionSpec":
        """Parse 'identity', 'poly:d' or 'tpoly:d'."""
        text = text.strip().lower()
        if text == 'identity':
            spec = cls.identity()
        else:
            kind, _, degree = text.partition(':')
            if kind not in ('poly', 'tpoly') or not degree.isdigit() or int(degree) < 1:
                raise ValueError(f"Basis must be identity, poly:d or tpoly:d, got '{text}'")
            spec = cls.polynomial(int(degree)) if kind == 'poly' else cls.transformed_polynomial(int(degree))
        return cls(spec.terms, renyi_order)

    def to_string(self) -> str:
        kinds = {term.kind for term in self.terms}
        degrees = [term.degree for term in self.terms]
        if len(kinds) == 1 and degrees == list(range(1, len(degrees) + 1)):
            kind = kinds.pop()
            if kind == 'poly' and len(degrees) == 1:
                return 'identity'
            return f"{kind}:{len(degrees)}"
        raise ValueError("Only contiguous polynomial bases have a string form")


@dataclass(frozen=True, eq=False)
class SelectionCoeffs:
    """Coefficients (beta_0, beta_1, ..., beta_T) of the labelling log odds."""

    beta: np.ndarray
    notes: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float).reshape(-1)
        if beta.size < 1 or not np.all(np.isfinite(beta)):
            raise ValueError(f"Selection coefficients must be finite, got {beta}")
        beta.setflags(write=False)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'notes', tuple(self.notes))

    def check(self, spec: SelectionSpec):
        if self.beta.size != spec.T + 1:
            raise ValueError(f"Expected {spec.T + 1} coefficients, got {self.beta.size}")

    def to_dict(self) -> dict:
        return {'beta': self.beta.tolist(), 'notes': list(self.notes)}


@dataclass(frozen=True, eq=False)
class LogisticDesign:
    """Implicit response vector and design matrix of the labelling model."""

    response: np.ndarray
    design: np.ndarray

    @property
    def n(self) -> int:
        return len(self.response)


# =============================================================================
# BASIS EVALUATION AND DESIGN
# =============================================================================

def basis_matrix(entropies, spec: SelectionSpec, g: int = 2) -> np.ndarray:
    """len(entropies) x T matrix of b_t(e_i)."""
    e = np.asarray(entropies, dtype=float).reshape(-1)
    if e.size == 0:
        return np.zeros((0, spec.T))
    return np.column_stack([term.evaluate(e, g) for term in spec.terms])


def basis_expand(e: float, spec: SelectionSpec, g: int = 2) -> np.ndarray:
    """(b_1(e), ..., b_T(e)) for one entropy value."""
    return basis_matrix([e], spec, g)[0]


def linear_predictor(e, spec: SelectionSpec, coeffs: SelectionCoeffs, g: int = 2):
    """Log odds of labelling, beta_0 + sum_t beta_t b_t(e). Vectorized over e."""
    coeffs.check(spec)
    scalar = np.ndim(e) == 0
    eta = coeffs.beta[0] + basis_matrix(e, spec, g) @ coeffs.beta[1:]
    return float(eta[0]) if scalar else eta


def labelling_probability(e, spec: SelectionSpec, coeffs: SelectionCoeffs, g: int = 2):
    return expit(linear_predictor(e, spec, coeffs, g))


def build_design(entropies_labelled, entropies_unlabelled, spec: SelectionSpec, g: int = 2) -> LogisticDesign:
    """Stack labelled rows (response 1) above unlabelled rows (response 0), intercept column first."""
    e1 = np.asarray(entropies_labelled, dtype=float).reshape(-1)
    e2 = np.asarray(entropies_unlabelled, dtype=float).reshape(-1)
    entropies = np.concatenate([e1, e2])
    design = np.column_stack([np.ones(len(entropies)), basis_matrix(entropies, spec, g)])
    response = np.concatenate([np.ones(len(e1)), np.zeros(len(e2))])
    return LogisticDesign(response=response, design=design)


# =============================================================================
# LOGISTIC FIT
# =============================================================================

def _penalized_loglik(design: LogisticDesign, beta: np.ndarray, penalty: np.ndarray) -> float:
    eta = design.design @ beta
    y = design.response
    return float(np.sum(y * log_expit(eta) + (1 - y) * log_expit(-eta))
                 - 0.5 * np.sum(penalty * beta ** 2))


def logistic_score(design: LogisticDesign, beta, ridge: float = 0.0,
                   penalize_intercept: bool = False) -> np.ndarray:
    """Gradient of the (penalized) logistic log-likelihood."""
    beta = np.asarray(beta, dtype=float)
    penalty = _penalty_vector(len(beta), ridge, penalize_intercept)
    return design.design.T @ (design.response - expit(design.design @ beta)) - penalty * beta


def _penalty_vector(k: int, ridge: float, penalize_intercept: bool) -> np.ndarray:
    penalty = np.full(k, float(ridge))
    if not penalize_intercept:
        penalty[0] = 0.0
    return penalty


def logistic_fit(design: LogisticDesign, ridge: float = 0.0,
                 tol: Optional[float] = None, max_iter: Optional[int] = None) -> SelectionCoeffs:
    """
    Maximize the ridge-penalized logistic log-likelihood by Newton's method.

    The ridge term applies to beta_1..beta_T. If every response is the same and
    ridge > 0, the intercept is penalized too and the fit is flagged
    'degenerate_response'; with ridge == 0 that case has no finite MLE.

    Args:
        design: implicit response and design matrix
        ridge: penalty weight (>= 0)
        tol: gradient sup-norm for convergence
        max_iter: maximum Newton iterations

    Returns:
        SelectionCoeffs, with notes flagging degenerate fits

    Raises:
        SeparationError: if ridge == 0 and the coefficients diverge
    """
    if ridge < 0:
        raise ValueError(f"Ridge must be >= 0, got {ridge}")
    tol = config.NEWTON_TOL if tol is None else tol
    max_iter = config.NEWTON_MAX_ITER if max_iter is None else max_iter
    X, y = design.design, design.response
    k = X.shape[1]
    notes = []

    degenerate = design.n == 0 or np.all(y == y[0])
    if degenerate:
        if ridge == 0:
            raise SeparationError(
                "All labelling indicators are equal, so the logistic fit has no finite "
                "solution; use ridge > 0"
            )
        notes.append('degenerate_response')
    penalty = _penalty_vector(k, ridge, penalize_intercept=degenerate)

    beta = np.zeros(k)
    current = _penalized_loglik(design, beta, penalty)
    converged = False
    for _ in range(max_iter):
        prob = expit(X @ beta)
        grad = X.T @ (y - prob) - penalty * beta
        if np.max(np.abs(grad)) < tol:
            converged = True
            break
        hessian = (X * (prob * (1 - prob))[:, None]).T @ X + np.diag(penalty)
        try:
            step = np.linalg.solve(hessian, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hessian, grad, rcond=None)[0]

        # Step halving on likelihood decrease
        scale = 1.0
        for _ in range(60):
            candidate = beta + scale * step
            value = _penalized_loglik(design, candidate, penalty)
            if value >= current - 1e-12 * max(1.0, abs(current)):
                break
            scale *= 0.5
        beta, current = candidate, value

        if ridge == 0 and np.max(np.abs(beta)) > config.SEPARATION_BOUND:
            raise SeparationError(
                f"Logistic coefficients diverged (|beta| > {config.SEPARATION_BOUND:g}); "
                "the labelling indicators are separated by the basis. Use ridge > 0"
            )

    fitted = expit(X @ beta)
    if ridge == 0 and np.max(np.abs(y - fitted)) < 1e-6:
        raise SeparationError(
            "Every labelling indicator is fitted with probability ~1, so the basis separates "
            "labelled from unlabelled rows and the MLE is infinite. Use ridge > 0"
        )
    if not converged:
        grad = X.T @ (y - fitted) - penalty * beta
        if np.max(np.abs(grad)) >= tol:
            notes.append('newton_max_iter')
    return SelectionCoeffs(beta, tuple(notes))


# =============================================================================
# SELECTION LIKELIHOOD
# =============================================================================

def log_selection_likelihood(coeffs: SelectionCoeffs, spec: SelectionSpec,
                             entropies_labelled, entropies_unlabelled, g: int = 2) -> float:
    """Sum of log expit(eta) over labelled rows plus log(1 - expit(eta)) over unlabelled rows."""
    coeffs.check(spec)
    e1 = np.asarray(entropies_labelled, dtype=float).reshape(-1)
    e2 = np.asarray(entropies_unlabelled, dtype=float).reshape(-1)
    total = 0.0
    if e1.size:
        total += float(np.sum(log_expit(linear_predictor(e1, spec, coeffs, g))))
    if e2.size:
        total += float(np.sum(log_expit(-linear_predictor(e2, spec, coeffs, g))))
    return total


def selection_score(coeffs: SelectionCoeffs, spec: SelectionSpec,
                    entropies_labelled, entropies_unlabelled, g: int = 2) -> np.ndarray:
    """Gradient of log_selection_likelihood with respect to beta."""
    design = build_design(entropies_labelled, entropies_unlabelled, spec, g)
    return logistic_score(design, coeffs.beta)


if __name__ == "__main__":
    spec = SelectionSpec.identity()
    coeffs = SelectionCoeffs([1.0, -5.0])
    print("Log odds at e=log 2:", linear_predictor(np.log(2), spec, coeffs))
    demo = build_design([0.05, 0.1, 0.3, 0.6], [0.2, 0.5, 0.65, 0.69], spec)
    print("Fitted coefficients:", logistic_fit(demo).beta)
