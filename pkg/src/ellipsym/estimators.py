"""Location and scatter estimators.

Besides the sample mean and covariance this module provides Tyler's
M-estimator of scatter, the distribution-free estimator used by the
pseudo-Gaussian and skew-optimal tests.  Tyler's estimator is defined only
up to scale; the iteration here fixes the scale so that the average squared
Mahalanobis norm of the data equals the dimension, which makes it agree
asymptotically with the covariance matrix under ellipticity with finite
second moments.

References
----------
Tyler, D. E. (1987). A distribution-free M-estimator of multivariate
scatter. The Annals of Statistics, 15(1), 234-251.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .exceptions import ConvergenceError, DomainError, UsageError
from .linalg import SPD_RTOL, sym_inv_sqrt

ZERO_NORM_TOL = 1e-12


def validate_sample(X) -> NDArray[np.float64]:
    """Coerce X to a float n x d array and enforce n > d >= 2."""
    A = np.asarray(X, dtype=float)
    if A.ndim != 2:
        raise DomainError(f"sample must be a 2-D array, got ndim={A.ndim}")
    n, d = A.shape
    if d < 2:
        raise DomainError(f"sample must have at least 2 columns, got d={d}")
    if n <= d:
        raise DomainError(f"sample needs more rows than columns (n={n}, d={d})")
    if not np.all(np.isfinite(A)):
        raise DomainError("sample contains non-finite values")
    return A


def sample_mean(X) -> NDArray[np.float64]:
    """Arithmetic mean of the rows."""
    return validate_sample(X).mean(axis=0)


def sample_cov(X, denominator: str = "n") -> NDArray[np.float64]:
    """Centered cross-product matrix divided by n or n-1.

    Parameters
    ----------
    X : array_like, shape (n, d)
    denominator : {"n", "n-1"}
        "n" gives the maximum-likelihood version, "n-1" the unbiased one.

    Raises
    ------
    DomainError
        If the result is rank deficient (smallest eigenvalue at or below
        ``SPD_RTOL`` times the largest).
    """
    A = validate_sample(X)
    if denominator not in ("n", "n-1"):
        raise UsageError(f"denominator must be 'n' or 'n-1', got {denominator!r}")
    n = A.shape[0]
    W = A - A.mean(axis=0)
    S = W.T @ W / (n if denominator == "n" else n - 1)
    vals = np.linalg.eigvalsh(S)
    if vals[0] <= SPD_RTOL * vals[-1] or vals[-1] <= 0.0:
        raise DomainError(
            f"sample covariance is singular (eigenvalues {vals[0]:.6g} .. {vals[-1]:.6g})"
        )
    return S


def tyler_scatter(
    X,
    location,
    tol: float = 1e-12,
    max_iter: int = 500,
) -> NDArray[np.float64]:
    """Tyler's M-estimator of scatter about a given location.

    Runs the fixed-point iteration

        V <- (d/n) * sum_i w_i w_i' / (w_i' V^{-1} w_i),   w_i = x_i - location,

    starting at the second-moment matrix about ``location`` and trace-
    normalizing each iterate.  Convergence is declared when the fixed-point
    residual  || V^{-1/2} M(V) V^{-1/2} - I ||_max  drops below ``tol``,
    i.e. when the direction vectors s_i = V^{-1/2} w_i / ||V^{-1/2} w_i||
    satisfy (d/n) sum_i s_i s_i' = I to within tol.  The returned matrix is
    rescaled so that (1/n) sum_i w_i' V^{-1} w_i = d.

    Raises
    ------
    DomainError
        If an observation coincides with ``location``.
    ConvergenceError
        If the residual has not dropped below ``tol`` after ``max_iter``
        iterations; the message carries the last residual.
    """
    A = validate_sample(X)
    theta = np.asarray(location, dtype=float)
    if theta.shape != (A.shape[1],):
        raise UsageError(
            f"location must be a vector of length {A.shape[1]}, got shape {theta.shape}"
        )
    n, d = A.shape
    W = A - theta
    sq = np.einsum("ij,ij->i", W, W)
    if np.any(sq < ZERO_NORM_TOL**2):
        raise DomainError("an observation coincides with the location (norm < 1e-12)")

    V = W.T @ W / n
    V *= d / np.trace(V)
    resid = np.inf
    for _ in range(max_iter):
        q = np.einsum("ij,ji->i", W, np.linalg.solve(V, W.T))
        if np.any(q <= 0.0):
            raise DomainError("scatter iterate lost positive definiteness")
        M = (W / q[:, None]).T @ W * (d / n)
        iroot = sym_inv_sqrt(V)
        E = iroot @ M @ iroot
        resid = np.max(np.abs(E - np.eye(d)))
        if resid < tol:
            break
        V = M * (d / np.trace(M))
    else:
        raise ConvergenceError(
            f"Tyler iteration did not converge in {max_iter} steps "
            f"(last residual {resid:.3e}, tol {tol:.1e})"
        )
    # scale fix: average squared Mahalanobis norm equals d
    q = np.einsum("ij,ji->i", W, np.linalg.solve(V, W.T))
    return V * (q.mean() / d)
