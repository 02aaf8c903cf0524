"""Dense linear algebra kernels.

Singular values, eigenvalue moduli, Kronecker products, exterior powers,
and the singular value function phi_s.  Everything operates on small dense
real matrices (d <= 6 in practice) in double precision; robustness is
preferred over speed, so spectra always go through full LAPACK solvers.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .errors import (
    BadRankError,
    ConvergenceFailureError,
    NonFiniteError,
    SingularMatrixError,
)

# Reject |det M| < INVERTIBILITY_RTOL * ||M||^d as numerically singular.
INVERTIBILITY_RTOL = 1e-12


def as_matrix(M) -> np.ndarray:
    """Validate and return a finite square float matrix."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise NonFiniteError("matrix entries must be finite")
    return A


def singular_values(M) -> np.ndarray:
    """Singular values of M, sorted non-increasingly.

    The first entry is the operator norm and the product of all entries
    equals |det M|.
    """
    return np.linalg.svd(as_matrix(M), compute_uv=False)


def eigen_moduli(M) -> np.ndarray:
    """Moduli of the eigenvalues of M, sorted non-increasingly."""
    A = as_matrix(M)
    try:
        eigs = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise ConvergenceFailureError(f"eigenvalue iteration failed: {exc}") from exc
    return np.sort(np.abs(eigs))[::-1]


def operator_norm(M) -> float:
    return float(singular_values(M)[0])


def check_invertible(M) -> np.ndarray:
    """Return M if |det M| > INVERTIBILITY_RTOL * ||M||^d, else raise.

    phi_s trusts the smallest singular values, so rank collapse has to be
    rejected rather than propagated.
    """
    A = as_matrix(M)
    top = float(np.linalg.svd(A, compute_uv=False)[0])
    det = abs(float(np.linalg.det(A)))
    if not det > INVERTIBILITY_RTOL * top ** A.shape[0]:
        raise SingularMatrixError(
            f"|det| = {det:.3e} is below tolerance for a matrix of norm {top:.3e}"
        )
    return A


def kronecker(A, B) -> np.ndarray:
    """Kronecker product in the block layout (a_ij * B)."""
    return np.kron(as_matrix(A), as_matrix(B))


def wedge_index_sets(d: int, k: int) -> list[tuple[int, ...]]:
    """Lexicographically ordered k-element subsets of range(d)."""
    return list(combinations(range(d), k))


def exterior_power(M, k: int) -> np.ndarray:
    """Matrix of the induced action on the k-th wedge space.

    Basis vectors are e_{i1} ^ ... ^ e_{ik} with i1 < ... < ik, index sets
    in lexicographic order; the (I, J) entry is the minor det(M[I, J]).
    The construction is multiplicative ((MN)^wedge = M^wedge N^wedge) and
    commutes with transposition, so its singular values are the k-fold
    products of singular values of M.
    """
    A = as_matrix(M)
    d = A.shape[0]
    if not isinstance(k, int) or not 1 <= k <= d:
        raise BadRankError(f"wedge order k={k} outside 1..{d}")
    subsets = wedge_index_sets(d, k)
    out = np.empty((len(subsets), len(subsets)))
    for a, rows in enumerate(subsets):
        block = A[list(rows), :]
        for b, cols in enumerate(subsets):
            out[a, b] = np.linalg.det(block[:, list(cols)])
    return out


def log_phi_s_from_spectrum(values, s: float) -> np.ndarray | float:
    """log phi_s evaluated from (stacks of) non-increasing spectra.

    `values` may be singular values or eigenvalue moduli; the same
    interpolation (product of the floor(s) leading entries times a
    fractional power of the next, |det|-power above d) applies to both.
    Vectorized over all leading axes.
    """
    sv = np.asarray(values, dtype=float)
    d = sv.shape[-1]
    if s < 0:
        raise ValueError("s must be non-negative")
    with np.errstate(divide="ignore"):
        logs = np.log(sv)
    if s >= d:
        out = (s / d) * logs.sum(axis=-1)
    else:
        k = math.floor(s)
        frac = s - k
        out = logs[..., :k].sum(axis=-1)
        if frac > 0.0:
            out = out + frac * logs[..., k]
    if out.ndim == 0:
        return float(out)
    return out


def phi_s(M, s: float) -> float:
    """Singular value function of an invertible matrix.

    For 0 <= s <= d this is sigma_1 ... sigma_floor(s) * sigma_ceil(s)^{s - floor(s)};
    for s >= d it is |det M|^{s/d}.  Submultiplicative in M for every s.
    """
    A = check_invertible(M)
    sv = np.linalg.svd(A, compute_uv=False)
    return float(np.exp(log_phi_s_from_spectrum(sv, s)))


def phi_s_via_exterior(M, s: float) -> float:
    """phi_s through wedge-power norms: ||M^^floor(s)||^{1+floor(s)-s} * ||M^^ceil(s)||^{s-floor(s)}.

    Independent route from the direct singular-value product; the two must
    agree to rounding.  Above s = d falls back to the |det| branch.
    """
    A = check_invertible(M)
    d = A.shape[0]
    if s < 0:
        raise ValueError("s must be non-negative")
    if s >= d:
        return float(abs(np.linalg.det(A)) ** (s / d))
    k = math.floor(s)
    frac = s - k
    lo = 1.0 if k == 0 else operator_norm(exterior_power(A, k))
    if frac == 0.0:
        return float(lo)
    hi = operator_norm(exterior_power(A, k + 1))
    return float(lo ** (1.0 - frac) * hi ** frac)
