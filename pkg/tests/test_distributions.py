import math

import numpy as np
import pytest

import naive
from ellipsym import (
    NullLaw,
    RadialDensity,
    UsageError,
    chi2_cdf,
    chi2_quantile,
    chi2_sf,
    pvalue,
    radial_phi,
    sample_mvn,
    sample_mvt,
    sample_skewed,
    sample_uniform_sphere,
)


# ---------------------------------------------------------------------------
# chi-squared helpers
# ---------------------------------------------------------------------------


def test_chi2_closed_form_df2():
    for x in (0.0, 0.5, 1.7, 9.0):
        assert abs(chi2_cdf(x, 2) - (1.0 - math.exp(-x / 2))) < 1e-14
        assert abs(chi2_sf(x, 2) - math.exp(-x / 2)) < 1e-14


def test_chi2_quantile_roundtrip():
    for df in (1, 2, 5.5):
        for p in (0.01, 0.5, 0.975):
            assert abs(chi2_cdf(chi2_quantile(p, df), df) - p) < 1e-12


def test_chi2_guards():
    with pytest.raises(UsageError):
        chi2_cdf(-1.0, 2)
    with pytest.raises(UsageError):
        chi2_sf(1.0, 0)
    with pytest.raises(UsageError):
        chi2_quantile(0.0, 2)
    with pytest.raises(UsageError):
        chi2_quantile(1.0, 2)


# ---------------------------------------------------------------------------
# radial densities
# ---------------------------------------------------------------------------


def test_radial_defaults():
    assert RadialDensity("t").param == 4.0
    assert RadialDensity("powerExp").param == 0.5
    assert RadialDensity("logistic").param is None


def test_radial_validation():
    with pytest.raises(UsageError):
        RadialDensity("t", 2.0)  # needs nu > 2
    with pytest.raises(UsageError):
        RadialDensity("powerExp", 1.0)  # beta = 1 excluded
    with pytest.raises(UsageError):
        RadialDensity("powerExp", 0.0)
    with pytest.raises(UsageError):
        RadialDensity("logistic", 3.0)  # takes no parameter
    with pytest.raises(UsageError):
        RadialDensity("gaussian")


def test_scores_match_oracle():
    xs = np.array([0.3, 0.9, 1.4, 2.6])
    d = 3
    for family, param in (("t", 4.0), ("t", 7.5), ("logistic", None), ("powerExp", 0.5), ("powerExp", 2.0)):
        f = RadialDensity(family, param)
        phi, dphi = radial_phi(f, xs, d)
        for x, p, dp in zip(xs, phi, dphi):
            op, odp = naive._phi_oracle(family, param, float(x), d)
            assert abs(p - op) < 1e-13
            assert abs(dp - odp) < 1e-13


def test_score_is_negative_log_density_slope():
    # phi_f = -f'/f, checked by central differences on the density itself
    d = 2
    h = 1e-6
    for family, param in (("t", 4.0), ("logistic", None), ("powerExp", 0.5)):
        f = RadialDensity(family, param)
        for x in (0.5, 1.0, 2.0):
            fp = (f.density(x + h, d) - f.density(x - h, d)) / (2 * h)
            assert abs(f.phi(x, d) - (-fp / f.density(x, d))) < 1e-5


def test_radial_phi_guards():
    with pytest.raises(UsageError):
        radial_phi(RadialDensity("t"), np.array([0.5, 0.0]), 2)


# ---------------------------------------------------------------------------
# null laws and p-values
# ---------------------------------------------------------------------------


def test_null_law_validation():
    with pytest.raises(UsageError):
        NullLaw(kind="gamma")
    with pytest.raises(UsageError):
        NullLaw.chi2(0)
    with pytest.raises(UsageError):
        NullLaw.scaled_chi2(0.0, 4)
    with pytest.raises(UsageError):
        NullLaw.scaled_chi2(1.2, 4)
    with pytest.raises(UsageError):
        NullLaw.bootstrap([])


def test_pvalue_chi2():
    law = NullLaw.chi2(2)
    assert abs(pvalue(law, 3.0) - math.exp(-1.5)) < 1e-14
    scaled = NullLaw.scaled_chi2(0.5, 2)
    assert abs(pvalue(scaled, 3.0) - math.exp(-3.0)) < 1e-14


def test_pvalue_addone_counting():
    law = NullLaw.monte_carlo([1.0, 2.0, 3.0, 4.0])
    assert pvalue(law, 2.5) == (1 + 2) / (1 + 4)
    assert pvalue(law, 0.0) == 1.0
    assert pvalue(law, 9.0) == (1 + 0) / (1 + 4)
    # ties count as exceedances
    assert pvalue(law, 3.0) == (1 + 2) / (1 + 4)


def test_pvalue_rejects_nonfinite():
    with pytest.raises(UsageError):
        pvalue(NullLaw.chi2(2), float("nan"))


def test_describe_is_json_ready():
    law = NullLaw.bootstrap([0.1, 0.2])
    out = law.describe()
    assert out == {"kind": "bootstrap", "reference_size": 2}
    assert NullLaw.scaled_chi2(0.95, 4).describe() == {
        "kind": "scaled_chi2",
        "df": 4.0,
        "scale": 0.95,
    }


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def test_sphere_sampler_properties():
    U = sample_uniform_sphere(3, 500, seed=4)
    assert U.shape == (500, 3)
    assert np.allclose(np.linalg.norm(U, axis=1), 1.0, atol=1e-12)
    again = sample_uniform_sphere(3, 500, seed=4)
    assert np.array_equal(U, again)
    assert np.max(np.abs(U.mean(axis=0))) < 0.1


def test_mvn_sampler_moments():
    mean = np.array([1.0, -2.0])
    cov = np.array([[2.0, 0.6], [0.6, 1.0]])
    X = sample_mvn(mean, cov, 40_000, seed=5)
    assert np.allclose(X.mean(axis=0), mean, atol=0.05)
    assert np.allclose(np.cov(X.T), cov, atol=0.08)
    with pytest.raises(UsageError):
        sample_mvn(np.zeros(3), np.eye(2), 10, seed=0)


def test_mvt_sampler_heavy_tails():
    X = sample_mvt(np.zeros(2), np.eye(2), 4.0, 100_000, seed=6)
    x = X[:, 0]
    kurt = np.mean((x - x.mean()) ** 4) / np.var(x) ** 2
    assert kurt > 3.5  # well above the Gaussian value 3
    with pytest.raises(UsageError):
        sample_mvt(np.zeros(2), np.eye(2), 0.0, 10, seed=0)


def test_skewed_sampler():
    X0 = sample_skewed(2, 50_000, 0.0, seed=7)
    # slant zero is standard normal
    assert np.max(np.abs(X0.mean(axis=0))) < 0.03
    assert np.allclose(np.cov(X0.T), np.eye(2), atol=0.05)
    X5 = sample_skewed(2, 50_000, 5.0, seed=8)
    x = X5[:, 0]
    skew = np.mean((x - x.mean()) ** 3) / np.std(x) ** 3
    assert skew > 0.5  # first coordinate is right-skewed
    y = X5[:, 1]
    assert abs(np.mean((y - y.mean()) ** 3) / np.std(y) ** 3) < 0.05
    with pytest.raises(UsageError):
        sample_skewed(2, 10, -1.0, seed=0)
    with pytest.raises(UsageError):
        sample_skewed(1, 10, 1.0, seed=0)
