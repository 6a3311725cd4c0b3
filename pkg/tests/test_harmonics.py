import numpy as np
import pytest

import naive
from ellipsym import UsageError, build_basis, eval_basis, harmonic_dim


def unit_rows(rng, n, d):
    Z = rng.standard_normal((n, d))
    return Z / np.linalg.norm(Z, axis=1)[:, None]


def test_harmonic_dim_table():
    # dim H(d, k) = C(d+k-1, k) - C(d+k-3, k-2)
    assert [harmonic_dim(2, k) for k in range(5)] == [1, 2, 2, 2, 2]
    assert [harmonic_dim(3, k) for k in range(5)] == [1, 3, 5, 7, 9]
    assert [harmonic_dim(4, k) for k in range(5)] == [1, 4, 9, 16, 25]
    assert [harmonic_dim(5, k) for k in range(5)] == [1, 5, 14, 30, 55]


def test_basis_sizes_and_degrees():
    for d in (2, 3, 4, 5):
        basis = build_basis(d, 4)
        for k in range(5):
            sl = basis.degree_slice(k)
            assert sl.stop - sl.start == harmonic_dim(d, k)
        assert basis.size == sum(harmonic_dim(d, k) for k in range(5))


def test_basis_is_cached():
    assert build_basis(3, 4) is build_basis(3, 4)


def test_basis_argument_guards():
    with pytest.raises(UsageError):
        build_basis(1, 4)
    with pytest.raises(UsageError):
        build_basis(3, 0)
    with pytest.raises(UsageError):
        build_basis(3, 5)


def test_orthonormality_monte_carlo(rng):
    for d in (2, 3, 4):
        basis = build_basis(d, 4)
        U = unit_rows(rng, 40_000, d)
        psi = basis.evaluate(U)
        G = psi.T @ psi / len(U)
        assert np.max(np.abs(G - np.eye(basis.size))) < 0.08


def test_constant_harmonic_is_one(rng):
    for d in (2, 4):
        basis = build_basis(d, 4)
        psi = basis.evaluate(unit_rows(rng, 10, d))
        assert np.allclose(psi[:, 0], 1.0)


def test_pointwise_degree_sum_equals_dimension(rng):
    # sum over the degree-k functions of psi(u)^2 is the constant dim H(d, k)
    # for every u: the reproducing kernel at (u, u) is rotation invariant.
    for d in (2, 3, 5):
        basis = build_basis(d, 4)
        psi = basis.evaluate(unit_rows(rng, 200, d))
        for k in range(5):
            sl = basis.degree_slice(k)
            sums = np.sum(psi[:, sl] ** 2, axis=1)
            assert np.allclose(sums, harmonic_dim(d, k), atol=1e-9)


def test_parity_is_exact(rng):
    for d in (2, 3, 4):
        basis = build_basis(d, 4)
        U = unit_rows(rng, 500, d)
        plus = basis.evaluate(U)
        minus = basis.evaluate(-U)
        signs = np.where(basis.degrees % 2 == 0, 1.0, -1.0)
        assert np.array_equal(minus, plus * signs)  # bit for bit


def test_rotation_preserves_degree_norms(rng):
    for d in (2, 3):
        basis = build_basis(d, 4)
        U = unit_rows(rng, 300, d)
        Q = np.linalg.qr(rng.standard_normal((d, d)))[0]
        a = basis.evaluate(U)
        b = basis.evaluate(U @ Q.T)
        for k in range(5):
            sl = basis.degree_slice(k)
            na = np.sum(a[:, sl] ** 2, axis=1)
            nb = np.sum(b[:, sl] ** 2, axis=1)
            assert np.allclose(na, nb, atol=1e-10)


def test_circle_degree_norms_match_closed_form(rng):
    # in d = 2 the degree-k pair spans sqrt(2) cos/sin(k phi), so the squared
    # norms per degree must match the closed-form circle harmonics exactly
    basis = build_basis(2, 4)
    U = unit_rows(rng, 50, 2)
    psi = basis.evaluate(U)
    for i, u in enumerate(U):
        circle = naive.circle_harmonics(u, [0, 1, 2, 3, 4])
        for k in range(5):
            sl = basis.degree_slice(k)
            mine = np.sum(psi[i, sl] ** 2)
            theirs = sum(
                v**2 for v in naive.circle_harmonics(u, [k])
            )
            assert abs(mine - theirs) < 1e-10
    assert len(circle) == basis.size


def test_evaluate_guards(rng):
    basis = build_basis(2, 4)
    with pytest.raises(UsageError):
        basis.evaluate(np.array([[1.0, 1.0]]))  # not a unit vector
    with pytest.raises(UsageError):
        basis.evaluate(np.ones((3, 3)))  # wrong dimension
    u = np.array([0.6, 0.8])
    row = basis.evaluate(u)
    assert row.shape == (basis.size,)
    assert np.allclose(row, eval_basis(basis, u))


def test_degree_selection_matches_slices(rng):
    basis = build_basis(3, 4)
    U = unit_rows(rng, 20, 3)
    full = basis.evaluate(U)
    part = basis.evaluate(U, degrees=(3, 4))
    sl3, sl4 = basis.degree_slice(3), basis.degree_slice(4)
    assert np.array_equal(part, np.hstack([full[:, sl3], full[:, sl4]]))
