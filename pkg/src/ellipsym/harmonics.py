"""Orthonormal real spherical harmonics of degree 0..4 on S^{d-1}, any d >= 2.

The basis is built by Gram-Schmidt orthonormalization of monomial
restrictions to the sphere.  Restrictions of the monomials of degree k,
together with all lower degrees of the same parity, span the harmonic
spaces H_k + H_{k-2} + ..., so orthogonalizing them in degree order (lex
order within a degree) leaves exactly dim H_k new functions per degree;
candidates that are linearly dependent on their predecessors drop out.

Everything up to the final normalization runs in exact integer arithmetic.
Moments of monomials under the uniform probability measure on the sphere,

    E[prod u_j^{a_j}] = prod_j (a_j - 1)!!  /  prod_{t=0}^{M-1} (d + 2t),

with M = (sum a_j)/2 (zero when any a_j is odd), share the common
denominator prod_{t<T}(d+2t), so the Gram matrix of the monomials is an
integer matrix over that denominator and the Gram-Schmidt recurrence can
be run fraction-free.  Exact arithmetic makes two things trivial that are
delicate in floating point: rank decisions (a dependent candidate reduces
to exactly zero) and parity (each basis function is supported on monomials
of a single exponent-parity class, so psi(-u) = (-1)^k psi(u) holds
exactly).

The moment matrix is block diagonal across exponent-parity classes
(moments vanish unless every coordinate's exponent parity matches), so the
orthogonalization runs independently per class, which keeps the integer
sizes and the run time small.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from .exceptions import UsageError

MAX_DEGREE = 4

_UNIT_TOL = 1e-8


def harmonic_dim(d: int, k: int) -> int:
    """Dimension of the space of spherical harmonics of degree k on S^{d-1}.

    C(d+k-1, k) - C(d+k-3, k-2) for k >= 2; 1 for k = 0; d for k = 1.
    """
    if d < 2:
        raise UsageError(f"harmonic_dim requires d >= 2, got {d}")
    if k < 0:
        raise UsageError(f"harmonic_dim requires k >= 0, got {k}")
    if k == 0:
        return 1
    if k == 1:
        return d
    return math.comb(d + k - 1, k) - math.comb(d + k - 3, k - 2)


def _monomials_of_degree(d: int, k: int) -> list[tuple[int, ...]]:
    """Exponent tuples summing to k, in ascending lexicographic order."""
    if k == 0:
        return [(0,) * d]
    out = set()
    for combo in combinations_with_replacement(range(d), k):
        e = [0] * d
        for j in combo:
            e[j] += 1
        out.add(tuple(e))
    return sorted(out)


def _double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def _moment_numerator(exps: Sequence[int], d: int, T: int) -> int:
    """Integer numerator of E[prod u_j^{a_j}] over the common denominator
    prod_{t<T}(d+2t).  Zero if any exponent is odd."""
    M = 0
    num = 1
    for a in exps:
        if a & 1:
            return 0
        M += a >> 1
        num *= _double_factorial(a - 1)
    for t in range(M, T):
        num *= d + 2 * t
    return num


@dataclass(frozen=True)
class HarmonicBasis:
    """An evaluable orthonormal basis of spherical harmonics.

    Attributes
    ----------
    d : dimension of the ambient space.
    max_degree : highest harmonic degree included (<= 4).
    degrees : integer array of length m, the degree of each basis function.
        Functions are ordered by degree; the first is the constant 1.
    exponents : (N, d) integer array of the monomials the functions are
        expressed in.
    coefficients : (m, N) float array; function s is
        sum_t coefficients[s, t] * u ** exponents[t].
    """

    d: int
    max_degree: int
    degrees: NDArray[np.int64]
    exponents: NDArray[np.int64]
    coefficients: NDArray[np.float64]
    _max_exponent: int = field(repr=False, default=0)

    @property
    def size(self) -> int:
        return len(self.degrees)

    def degree_slice(self, k: int) -> slice:
        """Index slice of the degree-k functions."""
        idx = np.flatnonzero(self.degrees == k)
        if idx.size == 0:
            raise UsageError(f"basis has no degree-{k} functions")
        return slice(int(idx[0]), int(idx[-1]) + 1)

    def evaluate(
        self,
        U,
        degrees: Optional[Sequence[int]] = None,
        check_unit: bool = True,
    ) -> NDArray[np.float64]:
        """Evaluate the basis at unit vectors.

        Parameters
        ----------
        U : array_like, shape (n, d) or (d,)
            Points on the unit sphere (validated to 1e-8 unless
            ``check_unit`` is False).
        degrees : optional sequence of degrees to restrict the output to.

        Returns
        -------
        (n, m') array of evaluations (or (m',) for a single vector), where
        m' counts the selected functions, in basis order.
        """
        A = np.asarray(U, dtype=float)
        single = A.ndim == 1
        if single:
            A = A[None, :]
        if A.ndim != 2 or A.shape[1] != self.d:
            raise UsageError(f"expected points of dimension {self.d}, got shape {A.shape}")
        if check_unit:
            sq = np.einsum("ij,ij->i", A, A)
            bad = np.abs(np.sqrt(sq) - 1.0) > _UNIT_TOL
            if np.any(bad):
                i = int(np.argmax(bad))
                raise UsageError(
                    f"point {i} is not on the unit sphere (norm {math.sqrt(sq[i]):.6g})"
                )
        if degrees is None:
            coef = self.coefficients
        else:
            mask = np.isin(self.degrees, np.asarray(list(degrees)))
            coef = self.coefficients[mask]
        n = A.shape[0]
        N = self.exponents.shape[0]
        out = np.empty((n, coef.shape[0]))
        # chunk so the monomial matrix stays ~tens of MB
        chunk = max(1024, int(4_000_000 / max(N, 1)))
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            block = A[lo:hi]
            # per-variable power tables by repeated multiplication, which is
            # exactly sign-symmetric (so odd/even parity holds bit for bit)
            mon = np.ones((hi - lo, N))
            for j in range(self.d):
                powers = np.empty((hi - lo, self._max_exponent + 1))
                powers[:, 0] = 1.0
                for k in range(1, self._max_exponent + 1):
                    np.multiply(powers[:, k - 1], block[:, j], out=powers[:, k])
                mon *= powers[:, self.exponents[:, j]]
            np.matmul(mon, coef.T, out=out[lo:hi])
        return out[0] if single else out


def eval_basis(basis: HarmonicBasis, u) -> NDArray[np.float64]:
    """Evaluate every basis function at one unit vector."""
    return basis.evaluate(u)


def _orthogonalize_class(
    members: list[int],
    candidates: list[tuple[int, int]],
    exps: list[tuple[int, ...]],
    d: int,
    T: int,
) -> list[tuple[int, list[int], int]]:
    """Fraction-free Gram-Schmidt within one exponent-parity class.

    ``members`` are global monomial indices of the class, ``candidates``
    pairs (degree, global index) in processing order.  Returns accepted
    triples (global candidate index, integer coefficient vector over the
    class members, squared-norm numerator alpha), where the true squared
    norm is alpha / prod_{t<T}(d+2t).
    """
    local = {gidx: i for i, gidx in enumerate(members)}
    nloc = len(members)
    gram = [
        [_moment_numerator([a + b for a, b in zip(exps[gi], exps[gj])], d, T)
         for gj in members]
        for gi in members
    ]
    accepted: list[tuple[int, list[int], int]] = []
    basis_vecs: list[tuple[list[int], list[int], int]] = []  # (v, Gv, alpha)
    for _, gidx in candidates:
        v = [0] * nloc
        v[local[gidx]] = 1
        for nvec, wvec, alpha in basis_vecs:
            beta = sum(a * b for a, b in zip(v, wvec))
            if beta:
                v = [alpha * a - beta * b for a, b in zip(v, nvec)]
                g = 0
                for x in v:
                    g = math.gcd(g, x)
                if g > 1:
                    v = [x // g for x in v]
        w = [sum(v[i] * gram[i][j] for i in range(nloc)) for j in range(nloc)]
        alpha = sum(a * b for a, b in zip(v, w))
        if alpha == 0:
            # v is a nonzero polynomial but the zero function on the sphere
            # (e.g. x^2 + y^2 - 1): the candidate is dependent, skip it.
            continue
        if alpha < 0:
            raise ArithmeticError("moment Gram matrix lost positive semidefiniteness")
        basis_vecs.append((v, w, alpha))
        accepted.append((gidx, v, alpha))
    return accepted


def _to_float(v: list[int], alpha: int, denom: int) -> NDArray[np.float64]:
    """Convert an integer coefficient vector to floats, dividing by the
    exact norm sqrt(alpha/denom).  Large integers are pre-scaled by a power
    of two so the conversion cannot overflow."""
    shift = max(0, max(abs(x).bit_length() for x in v) - 500)
    scale = 1 << shift
    vf = np.array([float(Fraction(x, scale)) for x in v])
    norm = math.sqrt(float(Fraction(alpha, denom * scale * scale)))
    return vf / norm


def _build(d: int, max_degree: int) -> HarmonicBasis:
    mono: list[tuple[int, ...]] = []
    degree_of: list[int] = []
    for k in range(max_degree + 1):
        ms = _monomials_of_degree(d, k)
        mono.extend(ms)
        degree_of.extend([k] * len(ms))
    N = len(mono)
    T = max_degree  # pairwise products have total half-degree <= max_degree

    classes: dict[tuple[int, ...], list[int]] = {}
    for idx, e in enumerate(mono):
        classes.setdefault(tuple(a & 1 for a in e), []).append(idx)

    denom = 1
    for t in range(T):
        denom *= d + 2 * t

    # (degree, generating candidate index, dense coefficient row)
    rows: list[tuple[int, int, NDArray[np.float64]]] = []
    for members in classes.values():
        cands = sorted((degree_of[g], g) for g in members)
        for gidx, v, alpha in _orthogonalize_class(members, cands, mono, d, T):
            dense = np.zeros(N)
            dense[members] = _to_float(v, alpha, denom)
            rows.append((degree_of[gidx], gidx, dense))
    rows.sort(key=lambda r: (r[0], r[1]))

    degrees = np.array([r[0] for r in rows], dtype=np.int64)
    coefficients = np.vstack([r[2] for r in rows])
    for k in range(max_degree + 1):
        got = int(np.count_nonzero(degrees == k))
        if got != harmonic_dim(d, k):
            raise ArithmeticError(
                f"degree {k} produced {got} functions, expected {harmonic_dim(d, k)}"
            )
    return HarmonicBasis(
        d=d,
        max_degree=max_degree,
        degrees=degrees,
        exponents=np.array(mono, dtype=np.int64),
        coefficients=coefficients,
        _max_exponent=max_degree,
    )


_cache: dict[tuple[int, int], HarmonicBasis] = {}
_cache_lock = threading.Lock()


def build_basis(d: int, max_degree: int = MAX_DEGREE) -> HarmonicBasis:
    """Orthonormal spherical-harmonic basis of degrees 0..max_degree.

    The basis for each (d, max_degree) pair is built once and cached; the
    construction is deterministic (monomials in degree order, lex order
    within a degree), so repeated builds agree bit for bit.

    Parameters
    ----------
    d : int
        Ambient dimension, at least 2.
    max_degree : int
        Highest harmonic degree, between 1 and 4.
    """
    if d < 2:
        raise UsageError(f"build_basis requires d >= 2, got {d}")
    if not 1 <= max_degree <= MAX_DEGREE:
        raise UsageError(
            f"max_degree must be between 1 and {MAX_DEGREE}, got {max_degree}"
        )
    key = (d, max_degree)
    with _cache_lock:
        basis = _cache.get(key)
        if basis is None:
            basis = _build(d, max_degree)
            _cache[key] = basis
    return basis
