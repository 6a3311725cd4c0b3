"""The six hypothesis tests for elliptical symmetry.

Every test takes an (n, d) data matrix and returns a :class:`TestResult`
carrying the observed statistic, its p-value, a descriptor of the null law
the p-value was computed under, and the effective parameters.

========  ==========================================  =======================
key       statistic                                   null law
========  ==========================================  =======================
ks        Koltchinskii-Sakhanenko sup of a harmonic    bootstrap
          empirical process
mpq       Manzotti et al. average of degree-3 and -4   (1 - eps) * chi2
          harmonics outside a small radius
schott    Schott's Wald test on fourth moments         chi2
hp        Huffer-Park sector/shell Pearson counts      bootstrap or
                                                       Monte-Carlo calibrated
pg        pseudo-Gaussian Fechner-asymmetry test       chi2(d)
so        skew-optimal location-score test             chi2(d)
========  ==========================================  =======================

The bootstrap tests resample a null-mimicking ellipse: standardized radii
are drawn with replacement, attached to fresh uniform directions, and mapped
back through the estimated location and scatter.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .distributions import NullLaw, RadialDensity, pvalue, sample_uniform_sphere
from .estimators import (
    ZERO_NORM_TOL,
    sample_cov,
    sample_mean,
    tyler_scatter,
    validate_sample,
)
from .exceptions import DomainError, NumericError, UsageError
from .harmonics import build_basis, harmonic_dim
from .linalg import gram_schmidt_root, sym_inv_sqrt, sym_sqrt
from .resample import ALL_BUT_ONE, BootstrapPlan, run_replicates

#: display names, keyed by the short method identifiers used everywhere else
METHOD_LABELS = {
    "ks": "Test for elliptical symmetry by Koltchinskii and Sakhanenko",
    "mpq": "Test for elliptical symmetry by Manzotti et al.",
    "schott": "Schott test for elliptical symmetry",
    "hp": "Test for elliptical symmetry by Huffer and Park",
    "pg": "Pseudo-Gaussian test for elliptical symmetry",
    "so": "SkewOptimal test for elliptical symmetry",
}

HP_SECTORS = ("orthants", "permutations", "bivariateangles")

#: Monte-Carlo replicates used to calibrate the Huffer-Park statistic when
#: no bootstrap replicate count is requested.
HP_CALIBRATION_SIMS = 2000

#: largest sector/shell grid the Huffer-Park counts table may occupy
_HP_MAX_CELLS = 5_000_000


@dataclass(frozen=True)
class TestResult:
    """Outcome of one test: statistic, p-value, null law, parameters."""

    method: str
    statistic: float
    p_value: float
    null_law: NullLaw
    params: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return METHOD_LABELS[self.method]

    def describe(self) -> dict:
        """JSON-ready summary of the result."""
        return {
            "method": self.method,
            "label": self.label,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "null_law": self.null_law.describe(),
            "params": {k: _jsonable(v) for k, v in self.params.items()},
        }


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def _standardized(X, location, scatter):
    """(Y, norms, U): whitened residuals, their norms, and directions."""
    Y = (X - location) @ sym_inv_sqrt(scatter)
    norms = np.linalg.norm(Y, axis=1)
    if np.any(norms < ZERO_NORM_TOL):
        i = int(np.argmin(norms))
        raise DomainError(
            f"observation {i} coincides with the location estimate; "
            "directions are undefined"
        )
    return Y, norms, Y / norms[:, None]


def _check_location(location, d: int) -> NDArray[np.float64]:
    theta = np.asarray(location, dtype=float)
    if theta.shape != (d,):
        raise UsageError(
            f"location must be a vector of length {d}, got shape {theta.shape}"
        )
    if not np.all(np.isfinite(theta)):
        raise UsageError("location must be finite")
    return theta


def _null_resampler(X):
    """Null-mimicking resampler for the bootstrap tests.

    Fits the ellipse (mean, 1/n covariance), then draws datasets whose
    radii are resampled from the observed standardized radii and whose
    directions are uniform on the sphere.  Per replicate the draw order is:
    radius indices first, then the direction block.
    """
    n, d = X.shape
    theta = sample_mean(X)
    scatter = sample_cov(X, denominator="n")
    _, norms, _ = _standardized(X, theta, scatter)
    root = sym_sqrt(scatter)

    def generate(rng: np.random.Generator) -> NDArray[np.float64]:
        idx = rng.integers(0, n, size=n)
        u = sample_uniform_sphere(d, n, rng)
        return theta + (norms[idx, None] * u) @ root

    return generate


# ---------------------------------------------------------------------------
# Koltchinskii-Sakhanenko
# ---------------------------------------------------------------------------


def _ks_statistic(X, basis) -> float:
    n = X.shape[0]
    theta = sample_mean(X)
    scatter = sample_cov(X, denominator="n")
    _, norms, U = _standardized(X, theta, scatter)
    order = np.argsort(norms, kind="stable")
    psi = basis.evaluate(U[order])
    psi[:, 0] -= 1.0  # center the constant harmonic at its spherical mean
    cum = np.cumsum(psi, axis=0)
    return float(np.linalg.norm(cum, axis=1).max() / math.sqrt(n))


def ks_test(
    X,
    R: int = 1000,
    seed: int = 0,
    workers: int = ALL_BUT_ONE,
    max_degree: int = 4,
) -> TestResult:
    """Koltchinskii-Sakhanenko test, bootstrap calibrated.

    Observations are ordered by the norm of the standardized residual and
    the basis evaluations (constant harmonic centered at 1) are summed
    cumulatively; the statistic is n^{-1/2} times the largest Euclidean
    norm reached by that cumulative sum.
    """
    X = validate_sample(X)
    n, d = X.shape
    basis = build_basis(d, max_degree)
    params = {"n": n, "d": d, "R": R, "seed": seed, "max_degree": max_degree}
    if n <= basis.size:
        msg = (
            f"sample size {n} does not exceed the harmonic basis size "
            f"{basis.size}; the bootstrap calibration is unreliable"
        )
        warnings.warn(msg, stacklevel=2)
        params["warning"] = msg

    stat = _ks_statistic(X, basis)
    generate = _null_resampler(X)
    plan = BootstrapPlan(R=R, seed=seed, workers=workers)
    reference = run_replicates(plan, generate, lambda Xs: _ks_statistic(Xs, basis))
    law = NullLaw.bootstrap(reference)
    return TestResult("ks", stat, pvalue(law, stat), law, params)


# ---------------------------------------------------------------------------
# Manzotti / Perez / Quiroz
# ---------------------------------------------------------------------------


def mpq_test(X, epsilon: float = 0.05) -> TestResult:
    """Manzotti et al. test on degree-3 and degree-4 harmonic averages.

    Directions whose standardized radius lies at or below the empirical
    epsilon-quantile are discarded; the statistic is n times the squared
    Euclidean norm of the remaining harmonic averages, with null law
    (1 - epsilon) times chi-squared.
    """
    X = validate_sample(X)
    n, d = X.shape
    if not 0.0 <= epsilon < 1.0:
        raise UsageError(f"epsilon must lie in [0, 1), got {epsilon}")

    theta = sample_mean(X)
    scatter = sample_cov(X, denominator="n-1")
    _, norms, U = _standardized(X, theta, scatter)
    if epsilon == 0.0:
        rho = 0.0
    else:
        k = math.ceil(epsilon * n)
        rho = float(np.sort(norms)[k - 1])

    basis = build_basis(d, 4)
    psi = basis.evaluate(U[norms > rho], degrees=(3, 4))
    means = psi.sum(axis=0) / n
    stat = float(n * means @ means)

    df = harmonic_dim(d, 3) + harmonic_dim(d, 4)
    law = NullLaw.scaled_chi2(scale=1.0 - epsilon, df=df)
    params = {"n": n, "d": d, "epsilon": epsilon, "radius_cutoff": rho, "df": df}
    return TestResult("mpq", stat, pvalue(law, stat), law, params)


# ---------------------------------------------------------------------------
# Schott
# ---------------------------------------------------------------------------


def schott_df(d: int) -> int:
    """Degrees of freedom of Schott's statistic: d^2 + d(d-1)(d^2+7d-6)/24 - 1."""
    if d < 2:
        raise UsageError(f"schott_df requires d >= 2, got {d}")
    return d * d + d * (d - 1) * (d * d + 7 * d - 6) // 24 - 1


def schott_test(X) -> TestResult:
    """Schott's Wald-type test on the standardized fourth-moment matrix.

    Compares tr(M4*^2) and vec(I)' M4*^2 vec(I) of the standardized
    fourth-moment matrix M4* against the value an elliptical law with the
    sample's own radial moments would produce.  Null law chi-squared.
    """
    X = validate_sample(X)
    n, d = X.shape
    theta = sample_mean(X)
    scatter = sample_cov(X, denominator="n-1")
    Y = (X - theta) @ sym_inv_sqrt(scatter)
    r = np.einsum("ij,ij->i", Y, Y)  # squared Mahalanobis norms

    # rows of Z are vec(y y'), so M4* = Z'Z / n
    Z = np.einsum("ni,nj->nij", Y, Y).reshape(n, d * d)
    M4s = Z.T @ Z / n

    kap1 = float(np.sum(r**2)) / (n * d * (d + 2))  # 1 + kappa-hat
    eta1 = float(np.sum(r**3)) / (n * d * (d + 2) * (d + 4))
    ome1 = float(np.sum(r**4)) / (n * d * (d + 2) * (d + 4) * (d + 6))
    a = ome1 + kap1**3 - 2.0 * kap1 * eta1
    beta1 = (1.0 / ome1) / 24.0
    beta2 = -3.0 * a / (24.0 * ome1**2 + 12.0 * (d + 4) * a * ome1)

    M2 = M4s @ M4s
    trace = float(np.trace(M2))
    vec_i = np.eye(d).reshape(-1)
    quad = float(vec_i @ M2 @ vec_i)
    stat = n * (
        beta1 * trace
        + beta2 * quad
        - (3.0 * beta1 + (d + 2) * beta2) * d * (d + 2) * kap1**2
    )

    df = schott_df(d)
    law = NullLaw.chi2(df)
    params = {"n": n, "d": d, "df": df}
    return TestResult("schott", stat, pvalue(law, stat), law, params)


# ---------------------------------------------------------------------------
# Huffer-Park
# ---------------------------------------------------------------------------


def _lex_ranks(perms: NDArray[np.int64]) -> NDArray[np.int64]:
    """Lexicographic rank of each row among all permutations of 0..d-1."""
    n, d = perms.shape
    ranks = np.zeros(n, dtype=np.int64)
    for i in range(d - 1):
        smaller_after = np.sum(perms[:, i + 1 :] < perms[:, i : i + 1], axis=1)
        ranks += smaller_after * math.factorial(d - 1 - i)
    return ranks


def _hp_sectors(Y, sector: str, g: int) -> NDArray[np.int64]:
    n, d = Y.shape
    if sector == "orthants":
        neg = Y < 0.0
        return neg @ (1 << np.arange(d, dtype=np.int64))
    if sector == "permutations":
        order = np.argsort(Y, axis=1, kind="stable")
        return _lex_ranks(order)
    # bivariate angles (d == 2): g equal arcs starting at angle zero,
    # with an exact arc boundary assigned to the lower arc
    phi = np.mod(np.arctan2(Y[:, 1], Y[:, 0]), 2.0 * math.pi)
    scaled = phi * g / (2.0 * math.pi)
    m = np.floor(scaled)
    m[(scaled == m) & (scaled > 0.0)] -= 1.0
    return np.minimum(m, g - 1).astype(np.int64)


def _hp_shells(norms, c: int) -> NDArray[np.int64]:
    """Equal-count shell index per observation (ties broken by row order).

    When n is not a multiple of c the remainder is spread one extra
    observation per shell starting from the innermost shell.
    """
    n = norms.shape[0]
    order = np.argsort(norms, kind="stable")
    base, rem = divmod(n, c)
    sizes = base + (np.arange(c) < rem)
    shells = np.empty(n, dtype=np.int64)
    shells[order] = np.repeat(np.arange(c), sizes)
    return shells


def hp_counts(X, c: int, sector: str = "orthants", g: Optional[int] = None):
    """The Huffer-Park (sector, shell) counts table, shape (g, c).

    Residuals are standardized with the lower-triangular Gram-Schmidt root
    of the 1/n covariance; sectors partition the direction, shells hold
    equal counts of the radius ranks.
    """
    X = validate_sample(X)
    n, d = X.shape
    c, g, sector = _hp_check(n, d, c, sector, g)
    theta = sample_mean(X)
    root = gram_schmidt_root(sample_cov(X, denominator="n"))
    Y = (X - theta) @ root.T
    counts = np.bincount(
        _hp_sectors(Y, sector, g) * c + _hp_shells(np.linalg.norm(Y, axis=1), c),
        minlength=g * c,
    ).reshape(g, c)
    return counts


def _hp_check(n, d, c, sector, g):
    if sector not in HP_SECTORS:
        raise UsageError(f"sector must be one of {HP_SECTORS}, got {sector!r}")
    if not isinstance(c, (int, np.integer)) or c < 1:
        raise UsageError(f"shell count c must be a positive integer, got {c!r}")
    if c > n:
        raise UsageError(f"shell count c = {c} exceeds the sample size {n}")
    if sector == "orthants":
        if g is not None:
            raise UsageError("g is fixed at 2^d for orthant sectors; leave it unset")
        g = 2**d
    elif sector == "permutations":
        if g is not None:
            raise UsageError("g is fixed at d! for permutation sectors; leave it unset")
        g = math.factorial(d)
    else:
        if d != 2:
            raise UsageError("bivariate angle sectors require d = 2")
        if g is None or not isinstance(g, (int, np.integer)) or g < 1:
            raise UsageError("bivariate angle sectors require a positive integer g")
        g = int(g)
    if g * c > _HP_MAX_CELLS:
        raise UsageError(
            f"counts table with {g} sectors x {c} shells is too large "
            f"(over {_HP_MAX_CELLS} cells)"
        )
    return int(c), g, sector


def _hp_statistic(X, c: int, sector: str, g: int) -> float:
    n = X.shape[0]
    counts = hp_counts(X, c, sector=sector, g=None if sector != "bivariateangles" else g)
    gg, cc = counts.shape
    expected = n / (gg * cc)
    return float(np.sum((counts - expected) ** 2) / expected)


def huffer_park_test(
    X,
    c: int,
    sector: str = "orthants",
    g: Optional[int] = None,
    R: Optional[int] = None,
    seed: int = 0,
    workers: int = ALL_BUT_ONE,
) -> TestResult:
    """Huffer-Park Pearson test on sector-by-shell cell counts.

    With ``R`` set, the p-value is bootstrapped from null-mimicking
    resamples.  Without ``R`` (orthant sectors only) the null is calibrated
    by Monte Carlo: the statistic's distribution for a Gaussian sample of
    the same size, which is what the chi-bar asymptotics approximate.
    """
    X = validate_sample(X)
    n, d = X.shape
    c, g_eff, sector = _hp_check(n, d, c, sector, g)
    if R is None and sector != "orthants":
        raise UsageError(
            f"the {sector!r} sectors have no built-in calibration; "
            "pass a bootstrap replicate count R"
        )

    params = {"n": n, "d": d, "c": c, "sector": sector, "g": g_eff, "seed": seed}
    if g_eff * c > n / 5.0:
        msg = (
            f"sector/shell grid has {g_eff * c} cells for {n} observations "
            "(expected count below 5 per cell); the statistic is unstable"
        )
        warnings.warn(msg, stacklevel=2)
        params["warning"] = msg

    counts = hp_counts(X, c, sector=sector, g=g)
    expected = n / (g_eff * c)
    stat = float(np.sum((counts - expected) ** 2) / expected)
    params["counts"] = counts

    if R is not None:
        params["R"] = R
        generate = _null_resampler(X)
        plan = BootstrapPlan(R=R, seed=seed, workers=workers)
        reference = run_replicates(
            plan, generate, lambda Xs: _hp_statistic(Xs, c, sector, g_eff)
        )
        law = NullLaw.bootstrap(reference)
    else:
        params["calibration_sims"] = HP_CALIBRATION_SIMS
        plan = BootstrapPlan(R=HP_CALIBRATION_SIMS, seed=seed, workers=workers)
        reference = run_replicates(
            plan,
            lambda rng: rng.standard_normal((n, d)),
            lambda Xs: _hp_statistic(Xs, c, sector, g_eff),
        )
        law = NullLaw.monte_carlo(reference)

    return TestResult("hp", stat, pvalue(law, stat), law, params)


# ---------------------------------------------------------------------------
# pseudo-Gaussian (Cassart's Fechner-asymmetry tests)
# ---------------------------------------------------------------------------


def _signed_squares(U):
    return np.sign(U) * U * U


def _cd_constant(d: int) -> float:
    return (
        4.0
        * math.gamma(d / 2.0)
        / ((d * d - 1) * math.sqrt(math.pi) * math.gamma((d - 1) / 2.0))
    )


def pseudo_gaussian_test(X, location=None, naive: bool = False) -> TestResult:
    """Pseudo-Gaussian test against Fechner-type skewed alternatives.

    With a known ``location`` the statistic aggregates signed squared
    directions weighted by squared radii; radial weighting makes it valid
    under any elliptical null with finite fourth moments.  Without a
    location the mean is estimated and the statistic is the efficient
    central-sequence form with the location-estimation effect projected
    out.  Scatter is Tyler's M-estimator in both cases; null law chi2(d).

    ``naive=True`` evaluates the known-location statistic through its
    O(n^2) pairwise double sum instead of the collapsed O(n d) form; the
    two agree to rounding and the flag exists for verification.
    """
    X = validate_sample(X)
    n, d = X.shape

    if location is not None:
        theta = _check_location(location, d)
        scatter = tyler_scatter(X, theta)
        _, norms, U = _standardized(X, theta, scatter)
        m4 = float(np.mean(norms**4))
        A = norms[:, None] ** 2 * _signed_squares(U)
        if naive:
            total = float((A @ A.T).sum())
        else:
            v = A.sum(axis=0)
            total = float(v @ v)
        stat = d * (d + 2) / (3.0 * n * m4) * total
        law = NullLaw.chi2(d)
        params = {"n": n, "d": d, "location": "specified", "naive": naive}
        return TestResult("pg", stat, pvalue(law, stat), law, params)

    theta = sample_mean(X)
    scatter = tyler_scatter(X, theta)
    _, norms, U = _standardized(X, theta, scatter)
    m1 = float(np.mean(norms))
    m2 = float(np.mean(norms**2))
    m3 = float(np.mean(norms**3))
    m4 = float(np.mean(norms**4))
    cd = _cd_constant(d)

    delta = (
        norms[:, None] * (cd * (d + 1) * m1 * U - norms[:, None] * _signed_squares(U))
    ).sum(axis=0) / math.sqrt(n)
    gamma = (
        3.0 / (d * (d + 2)) * m4
        - 2.0 * cd**2 * (d + 1) * m1 * m3
        + cd**2 * (d + 1) ** 2 / d * m1 * m1 * m2
    )
    if gamma <= 0.0:
        raise NumericError(
            f"information estimate is not positive (gamma = {gamma:.6g})"
        )
    stat = float(delta @ delta) / gamma
    law = NullLaw.chi2(d)
    params = {"n": n, "d": d, "location": "estimated"}
    return TestResult("pg", stat, pvalue(law, stat), law, params)


# ---------------------------------------------------------------------------
# skew-optimal
# ---------------------------------------------------------------------------


def skew_optimal_test(
    X,
    location=None,
    f: str = "t",
    param: Optional[float] = None,
) -> TestResult:
    """Skew-optimal test based on location scores of a radial density.

    With a known ``location`` the statistic is the Wald form
    n (mean - location)' V^{-1} (mean - location) with V Tyler's scatter
    about the location, and the radial density plays no role.  Without a
    location, radial scores phi_f reweight the directions; ``f`` is one of
    "t" (param nu > 2, default 4), "logistic" (no param), or "powerExp"
    (param beta > 0, beta != 1, default 0.5).  Null law chi2(d).
    """
    X = validate_sample(X)
    n, d = X.shape

    if location is not None:
        theta = _check_location(location, d)
        scatter = tyler_scatter(X, theta)
        diff = sample_mean(X) - theta
        stat = float(n * diff @ np.linalg.solve(scatter, diff))
        law = NullLaw.chi2(d)
        params = {"n": n, "d": d, "location": "specified"}
        return TestResult("so", stat, pvalue(law, stat), law, params)

    density = RadialDensity(f, param)
    theta = sample_mean(X)
    scatter = tyler_scatter(X, theta)
    _, norms, U = _standardized(X, theta, scatter)

    phi = density.phi(norms, d)
    dphi = density.phi_prime(norms, d)
    K = float(np.mean(dphi + (d - 1) * phi / norms))
    if abs(K) < 1e-12:
        raise NumericError("radial score normalization vanished (K-hat = 0)")
    w = norms - (d / K) * phi
    wsq = float(w @ w)
    if wsq <= 0.0:
        raise NumericError("all score weights vanished")
    num = (w[:, None] * U).sum(axis=0)
    stat = float(d * (num @ num) / wsq)
    law = NullLaw.chi2(d)
    params = {
        "n": n,
        "d": d,
        "location": "estimated",
        "f": density.family,
        "param": density.param,
    }
    return TestResult("so", stat, pvalue(law, stat), law, params)
