"""Probability machinery: chi-squared laws, radial densities, samplers,
null-law descriptors and p-values.

Samplers use numpy Generators seeded explicitly, so every draw in the
package is reproducible.  The draw order inside each sampler is part of
its contract (golden files depend on it) and must not change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy import special

from .exceptions import DomainError, UsageError
from .linalg import sym_sqrt

_SQRT_2PI = math.sqrt(2.0 * math.pi)

#: density of the standard normal at zero, the Pi-dot(0) factor of the
#: skew-optimal statistics (it cancels in the final quadratic form).
NORMAL_PDF_AT_ZERO = 1.0 / _SQRT_2PI


def chi2_cdf(x: float, df: float) -> float:
    """Chi-squared CDF (regularized incomplete gamma)."""
    if df <= 0:
        raise UsageError(f"df must be positive, got {df}")
    if x < 0:
        raise UsageError(f"chi2_cdf requires x >= 0, got {x}")
    return float(special.chdtr(df, x))


def chi2_sf(x: float, df: float) -> float:
    """Chi-squared survival function, 1 - CDF, computed without cancellation."""
    if df <= 0:
        raise UsageError(f"df must be positive, got {df}")
    if x < 0:
        raise UsageError(f"chi2_sf requires x >= 0, got {x}")
    return float(special.chdtrc(df, x))


def chi2_quantile(p: float, df: float) -> float:
    """Inverse chi-squared CDF for p in the open interval (0, 1)."""
    if df <= 0:
        raise UsageError(f"df must be positive, got {df}")
    if not 0.0 < p < 1.0:
        raise UsageError(f"chi2_quantile requires 0 < p < 1, got {p}")
    return float(2.0 * special.gammaincinv(df / 2.0, p))


# ---------------------------------------------------------------------------
# radial densities
# ---------------------------------------------------------------------------

RADIAL_FAMILIES = ("t", "logistic", "powerExp")


@dataclass(frozen=True)
class RadialDensity:
    """A radial density family used by the skew-optimal test.

    family : {"t", "logistic", "powerExp"}
    param : degrees of freedom nu (> 2) for "t"; kurtosis parameter
        beta (> 0, != 1) for "powerExp"; must be None for "logistic".

    The t family's density is f(x) = (1 + x^2/nu)^(-(nu+d)/2), so its
    score phi_f = -(log f)' depends on the ambient dimension d, which is
    supplied at evaluation time.
    """

    family: str
    param: Optional[float] = None

    def __post_init__(self):
        if self.family not in RADIAL_FAMILIES:
            raise UsageError(
                f"unknown radial density {self.family!r}; expected one of {RADIAL_FAMILIES}"
            )
        if self.family == "t":
            nu = 4.0 if self.param is None else float(self.param)
            if nu <= 2.0:
                raise UsageError(f"t radial density requires nu > 2, got {nu}")
            object.__setattr__(self, "param", nu)
        elif self.family == "powerExp":
            beta = 0.5 if self.param is None else float(self.param)
            if beta <= 0.0:
                raise UsageError(f"powerExp requires beta > 0, got {beta}")
            if beta == 1.0:
                raise UsageError(
                    "powerExp requires beta != 1 (beta = 1 is the Gaussian case)"
                )
            object.__setattr__(self, "param", beta)
        else:  # logistic
            if self.param is not None:
                raise UsageError("logistic radial density takes no parameter")

    def density(self, x, d: int):
        """The (unnormalized) radial density f(x)."""
        x = np.asarray(x, dtype=float)
        if self.family == "t":
            nu = self.param
            return (1.0 + x * x / nu) ** (-(nu + d) / 2.0)
        if self.family == "logistic":
            e = np.exp(-x * x)
            return e / (1.0 + e) ** 2
        beta = self.param
        return np.exp(-0.5 * x ** (2.0 * beta))

    def phi(self, x, d: int):
        """The score phi_f(x) = -f'(x)/f(x)."""
        x = np.asarray(x, dtype=float)
        if self.family == "t":
            nu = self.param
            return (nu + d) * x / (nu + x * x)
        if self.family == "logistic":
            return 2.0 * x * np.tanh(0.5 * x * x)
        beta = self.param
        return beta * x ** (2.0 * beta - 1.0)

    def phi_prime(self, x, d: int):
        """Derivative of the score."""
        x = np.asarray(x, dtype=float)
        if self.family == "t":
            nu = self.param
            return (nu + d) * (nu - x * x) / (nu + x * x) ** 2
        if self.family == "logistic":
            t = np.tanh(0.5 * x * x)
            return 2.0 * t + 2.0 * x * x * (1.0 - t * t)
        beta = self.param
        return beta * (2.0 * beta - 1.0) * x ** (2.0 * beta - 2.0)


def radial_phi(f: RadialDensity, x, d: int):
    """(phi_f(x), phi_f'(x)) for x > 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise UsageError("radial_phi requires x > 0")
    return f.phi(arr, d), f.phi_prime(arr, d)


# ---------------------------------------------------------------------------
# null laws and p-values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NullLaw:
    """Descriptor of a test's null distribution.

    kind : {"chi2", "scaled_chi2", "monte_carlo", "bootstrap"}
    df, scale : parameters of the (scaled) chi-squared laws.
    reference : sorted tuple of simulated statistic values for the
        resampling-based kinds.
    """

    kind: str
    df: Optional[float] = None
    scale: Optional[float] = None
    reference: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("chi2", "scaled_chi2", "monte_carlo", "bootstrap"):
            raise UsageError(f"unknown null law kind {self.kind!r}")
        if self.kind in ("chi2", "scaled_chi2"):
            if self.df is None or self.df <= 0:
                raise UsageError("chi-squared null law requires df > 0")
        if self.kind == "scaled_chi2":
            if self.scale is None or not 0.0 < self.scale <= 1.0:
                raise UsageError("scaled chi-squared law requires scale in (0, 1]")
        if self.kind in ("monte_carlo", "bootstrap"):
            if not self.reference:
                raise UsageError(f"{self.kind} null law requires a reference sample")

    @staticmethod
    def chi2(df: float) -> "NullLaw":
        return NullLaw(kind="chi2", df=float(df))

    @staticmethod
    def scaled_chi2(scale: float, df: float) -> "NullLaw":
        return NullLaw(kind="scaled_chi2", df=float(df), scale=float(scale))

    @staticmethod
    def monte_carlo(reference) -> "NullLaw":
        return NullLaw(kind="monte_carlo",
                       reference=tuple(sorted(float(v) for v in reference)))

    @staticmethod
    def bootstrap(reference) -> "NullLaw":
        return NullLaw(kind="bootstrap",
                       reference=tuple(sorted(float(v) for v in reference)))

    def describe(self) -> dict:
        """JSON-ready summary (reference samples reported by size only)."""
        out: dict = {"kind": self.kind}
        if self.df is not None:
            out["df"] = self.df
        if self.scale is not None:
            out["scale"] = self.scale
        if self.reference is not None:
            out["reference_size"] = len(self.reference)
        return out


def pvalue(law: NullLaw, statistic: float) -> float:
    """p-value of an observed statistic under a null law.

    Resampling laws use the add-one convention
    (1 + #{reference >= statistic}) / (1 + #reference), so the result is
    always strictly positive.
    """
    if not math.isfinite(statistic):
        raise UsageError(f"statistic must be finite, got {statistic}")
    if law.kind == "chi2":
        return chi2_sf(statistic, law.df)
    if law.kind == "scaled_chi2":
        return chi2_sf(statistic / law.scale, law.df)
    ref = np.asarray(law.reference)
    exceed = int(np.sum(ref >= statistic))
    return (1.0 + exceed) / (1.0 + len(ref))


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_uniform_sphere(d: int, n: int, seed) -> NDArray[np.float64]:
    """n i.i.d. points uniform on S^{d-1} (normalized Gaussian vectors)."""
    if d < 1 or n < 1:
        raise UsageError("sample_uniform_sphere requires d >= 1 and n >= 1")
    rng = _rng(seed)
    Z = rng.standard_normal((n, d))
    norms = np.linalg.norm(Z, axis=1)
    while np.any(norms < 1e-12):  # essentially impossible, but stay exact
        bad = norms < 1e-12
        Z[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(Z, axis=1)
    return Z / norms[:, None]


def sample_mvn(mean, cov, n: int, seed) -> NDArray[np.float64]:
    """n draws from N(mean, cov) via the symmetric square root of cov."""
    mean = np.asarray(mean, dtype=float)
    root = sym_sqrt(cov)
    if mean.shape != (root.shape[0],):
        raise UsageError("mean and cov dimensions do not match")
    if n < 1:
        raise UsageError("sample_mvn requires n >= 1")
    rng = _rng(seed)
    Z = rng.standard_normal((n, root.shape[0]))
    return mean + Z @ root


def sample_mvt(mean, cov, nu: float, n: int, seed) -> NDArray[np.float64]:
    """n draws from the multivariate t with nu degrees of freedom.

    Gaussian numerator over an independent chi scaling: X = mean +
    sqrt(nu / W) * Z @ cov^{1/2} with W ~ chi2(nu).  Draw order: the n x d
    normal block first, then the n chi-squared variables.
    """
    if nu <= 0:
        raise UsageError(f"sample_mvt requires nu > 0, got {nu}")
    mean = np.asarray(mean, dtype=float)
    root = sym_sqrt(cov)
    if mean.shape != (root.shape[0],):
        raise UsageError("mean and cov dimensions do not match")
    if n < 1:
        raise UsageError("sample_mvt requires n >= 1")
    rng = _rng(seed)
    Z = rng.standard_normal((n, root.shape[0]))
    w = rng.chisquare(nu, size=n)
    return mean + (Z @ root) * np.sqrt(nu / w)[:, None]


def sample_skewed(d: int, n: int, slant: float, seed) -> NDArray[np.float64]:
    """Skew-normal-type draws for power studies.

    Z is a standard normal d-vector and W an independent standard normal
    scalar; the draw is Z if W < slant * Z_1 and Z with the sign of its
    first coordinate flipped otherwise.  slant = 0 reduces to N(0, I_d).
    """
    if slant < 0:
        raise UsageError(f"sample_skewed requires slant >= 0, got {slant}")
    if d < 2 or n < 1:
        raise UsageError("sample_skewed requires d >= 2 and n >= 1")
    rng = _rng(seed)
    Z = rng.standard_normal((n, d))
    W = rng.standard_normal(n)
    flip = ~(W < slant * Z[:, 0])
    Z[flip, 0] = -Z[flip, 0]
    return Z
