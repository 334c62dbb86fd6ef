"""
Logistic regression by Newton-Raphson with step-halving and Wald inference
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg, stats
from scipy.special import expit

from ..utils.errors import CollinearityError, InputError, SeparationError

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-8
MAX_ITERATIONS = 100
SEPARATION_NORM = 1e3


class RegressionFit:
    """Logistic fit with inverse-Fisher covariance and Wald statistics"""

    def __init__(self, names: List[str], coefficients: np.ndarray, covariance: np.ndarray,
                 alpha: float, converged: bool, iterations: int, gradient_norm: float,
                 log_likelihood: float):
        self.names = list(names)
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.covariance = np.asarray(covariance, dtype=float)
        self.alpha = alpha
        self.converged = converged
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        self.log_likelihood = log_likelihood

        self.std_errors = np.sqrt(np.diag(self.covariance))
        self.z = self.coefficients / self.std_errors
        self.p_values = 2 * stats.norm.sf(np.abs(self.z))
        quantile = stats.norm.ppf(1 - alpha / 2)
        self.ci_low = self.coefficients - quantile * self.std_errors
        self.ci_high = self.coefficients + quantile * self.std_errors

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            'term': self.names,
            'beta': self.coefficients,
            'se': self.std_errors,
            'z': self.z,
            'p_value': self.p_values,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
        })

    def to_dict(self) -> Dict:
        return {
            'terms': self.names,
            'beta': self.coefficients.tolist(),
            'se': self.std_errors.tolist(),
            'z': self.z.tolist(),
            'p_value': self.p_values.tolist(),
            'ci': [[lo, hi] for lo, hi in zip(self.ci_low.tolist(), self.ci_high.tolist())],
            'alpha': self.alpha,
            'convergence': {
                'converged': self.converged,
                'iterations': self.iterations,
                'gradient_norm': self.gradient_norm,
                'log_likelihood': self.log_likelihood,
            },
        }


def log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> float:
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def score(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return X.T @ (y - expit(X @ beta))


def fisher_information(X: np.ndarray, beta: np.ndarray) -> np.ndarray:
    mu = expit(X @ beta)
    return (X * (mu * (1 - mu))[:, None]).T @ X


def _solve(information: np.ndarray, gradient: np.ndarray) -> np.ndarray:
    values = linalg.eigvalsh(information)
    if values.max() <= 0 or values.min() <= 1e-12 * values.max():
        raise CollinearityError("singular Fisher information: design columns are collinear")
    return linalg.solve(information, gradient, assume_a='pos')


def logistic_fit(X, y, alpha: float = 0.05, names: Optional[Sequence[str]] = None,
                 tol: float = GRADIENT_TOLERANCE, max_iter: int = MAX_ITERATIONS) -> RegressionFit:
    """
    Fit a Bernoulli/logit model by Newton-Raphson

    Args:
        X: Design matrix (n x p), intercept column included by the caller
        y: Binary labels
        alpha: Level of the (1-alpha) Wald intervals
        names: Column names
        tol: Gradient infinity-norm tolerance
        max_iter: Iteration cap

    Returns:
        RegressionFit

    Raises:
        InputError: On shape problems, non-binary labels, a zero column or n <= p
        SeparationError: On perfect or quasi-complete separation
        CollinearityError: On singular Fisher information
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n, p = X.shape
    names = list(names) if names is not None else [f"x{j}" for j in range(p)]
    if len(y) != n:
        raise InputError(f"X has {n} rows but y has {len(y)} labels")
    if len(names) != p:
        raise InputError(f"{len(names)} names for {p} columns")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise InputError("labels must be 0 or 1")
    zero = [names[j] for j in range(p) if np.all(X[:, j] == 0)]
    if zero:
        raise InputError(f"constant-zero column(s): {', '.join(zero)}")
    if y.min() == y.max():
        raise SeparationError(f"all {n} labels equal {int(y[0])}: the likelihood has no finite maximizer")
    if n <= p:
        raise InputError(f"need more observations than parameters (n={n}, p={p})")

    beta = np.zeros(p)
    current = log_likelihood(X, y, beta)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        gradient = score(X, y, beta)
        if np.max(np.abs(gradient)) < tol:
            converged = True
            iterations -= 1
            break
        step = _solve(fisher_information(X, beta), gradient)
        for _ in range(50):
            candidate = beta + step
            value = log_likelihood(X, y, candidate)
            if value >= current - 1e-12:
                break
            step = step / 2
        beta, current = candidate, value
        if np.linalg.norm(beta) > SEPARATION_NORM:
            raise SeparationError(f"coefficients diverge (||beta|| = {np.linalg.norm(beta):.3g})")

    gradient = score(X, y, beta)
    gradient_norm = float(np.max(np.abs(gradient)))
    converged = converged or gradient_norm < tol
    mu = expit(X @ beta)
    if np.max(np.abs(y - mu)) < 1e-6:
        raise SeparationError("fitted probabilities reproduce the labels exactly")
    if not converged:
        logger.warning("logistic fit did not converge in %d iterations (gradient %.3g)",
                       max_iter, gradient_norm)

    information = fisher_information(X, beta)
    values = linalg.eigvalsh(information)
    if values.min() <= 1e-12 * values.max():
        raise CollinearityError("singular Fisher information at the estimate")
    covariance = linalg.inv(information)
    covariance = (covariance + covariance.T) / 2
    return RegressionFit(names, beta, covariance, alpha, converged, iterations,
                         gradient_norm, current)


def design_matrix(frame: pd.DataFrame, columns: Sequence[str],
                  intercept: bool = True) -> Tuple[np.ndarray, List[str]]:
    """Stack the named columns of a table, with a leading intercept column"""
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise InputError(f"unknown design column(s): {', '.join(missing)}")
    X = frame[list(columns)].to_numpy(dtype=float)
    names = list(columns)
    if intercept:
        X = np.column_stack([np.ones(len(frame)), X])
        names = ['intercept'] + names
    return X, names
