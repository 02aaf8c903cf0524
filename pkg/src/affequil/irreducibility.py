"""Numeric witnesses and falsifiers for (strong) irreducibility.

Nothing here decides irreducibility: the subspace search is a heuristic
that is complete only for tuples preserving a span of eigenvectors of
some word product (which covers every fixture in this package), the
orbit search can only confirm a finite invariant union it actually
closes, and the conjugacy checks are necessary-condition tests on
spectra.  Outcomes are phrased accordingly: None always means "no
witness found up to the given depth", never "none exists".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import SingularMatrixError
from .linalg import INVERTIBILITY_RTOL, as_matrix, operator_norm
from .words import (
    MatrixTuple,
    SymbolPermutation,
    Word,
    enumerate_words,
    word_matrix,
)

# Subspace equality means largest principal angle with sine below this.
SUBSPACE_TOL = 1e-8
# Eigenvalues closer than this (relative to the spectral radius) share a
# cluster; their joint eigenspace is used instead of individual vectors.
CLUSTER_RTOL = 1e-8
# Orbit closure gives up beyond this many tracked subspaces.
MAX_UNION_COMPONENTS = 64


def orthonormal_basis(columns: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the column span, rank-revealed by SVD."""
    A = np.atleast_2d(np.asarray(columns, dtype=float))
    u, sv, _ = np.linalg.svd(A, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return u[:, :0]
    rank = int((sv > rtol * sv[0]).sum())
    return u[:, :rank]


def principal_angle_sine(Q1: np.ndarray, Q2: np.ndarray) -> float:
    """Sine of the largest principal angle between two equal-dim spans."""
    if Q1.shape != Q2.shape:
        raise ValueError("spans must have equal dimension")
    cosines = np.linalg.svd(Q1.T @ Q2, compute_uv=False)
    c = min(1.0, float(cosines.min()))
    return math.sqrt(max(0.0, 1.0 - c * c))


def subspaces_equal(Q1: np.ndarray, Q2: np.ndarray, tol: float = SUBSPACE_TOL) -> bool:
    return Q1.shape[1] == Q2.shape[1] and principal_angle_sine(Q1, Q2) <= tol


@dataclass(frozen=True)
class SubspaceWitness:
    """A single jointly invariant proper subspace, with its defect."""

    basis: np.ndarray
    residual: float
    source_word: Word | None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class FiniteUnionWitness:
    """A finite set of proper subspaces mapped into itself by every generator."""

    bases: tuple[np.ndarray, ...]
    residual: float
    source_word: Word | None

    @property
    def n_components(self) -> int:
        return len(self.bases)


def _eig_cluster_units(M: np.ndarray) -> list[list[int]]:
    """Indices of eigenvalues grouped into conjugation-closed clusters."""
    eigvals = np.linalg.eigvals(M)
    scale = max(float(np.abs(eigvals).max()), 1e-300)
    clusters: list[list[int]] = []
    for i, lam in enumerate(eigvals):
        for cluster in clusters:
            if abs(lam - eigvals[cluster[0]]) <= CLUSTER_RTOL * scale:
                cluster.append(i)
                break
        else:
            clusters.append([i])
    # Merge each cluster with its conjugate partner so every selectable
    # unit spans a real subspace.
    units: list[list[int]] = []
    used = [False] * len(clusters)
    for a, cluster in enumerate(clusters):
        if used[a]:
            continue
        used[a] = True
        unit = list(cluster)
        rep = eigvals[cluster[0]]
        if abs(rep.imag) > CLUSTER_RTOL * scale:
            for b in range(a + 1, len(clusters)):
                if used[b]:
                    continue
                if abs(np.conj(rep) - eigvals[clusters[b][0]]) <= CLUSTER_RTOL * scale:
                    used[b] = True
                    unit.extend(clusters[b])
                    break
        units.append(unit)
    return units


def _candidate_subspaces(M: np.ndarray) -> Iterator[np.ndarray]:
    """Real invariant subspaces of M spanned by eigenvector cluster unions."""
    d = M.shape[0]
    eigvals, eigvecs = np.linalg.eig(M)
    units = _eig_cluster_units(M)
    n_units = len(units)
    for mask in range(1, 2 ** n_units - 1):
        indices = [i for u in range(n_units) if mask >> u & 1 for i in units[u]]
        cols = eigvecs[:, indices]
        real_cols = np.hstack([cols.real, cols.imag])
        Q = orthonormal_basis(real_cols)
        if 1 <= Q.shape[1] <= d - 1:
            yield Q


def invariance_residual(T: MatrixTuple, Q: np.ndarray) -> float:
    """Max over generators of the principal-angle defect of A_i V vs V."""
    worst = 0.0
    for m in T.matrices:
        image = orthonormal_basis(m @ Q)
        if image.shape[1] != Q.shape[1]:
            return 1.0
        worst = max(worst, principal_angle_sine(image, Q))
    return worst


def _scan_words(T: MatrixTuple, depth: int) -> Iterator[Word]:
    for length in range(1, depth + 1):
        yield from enumerate_words(T.n_maps, length)


N_COMBINATION_PROBES = 4
COMBINATION_PROBE_SEED = 20240

def _probe_matrices(
    T: MatrixTuple, depth: int
) -> Iterator[tuple[Word | None, np.ndarray]]:
    """Word products up to `depth`, then seeded random combinations of them.

    A jointly invariant subspace is invariant under any linear combination
    of word products, and a generic combination has simple spectrum where
    the individual products may carry structurally repeated eigenvalues
    whose eigenspaces smear across distinct invariant subspaces.  The
    combination probes recover those subspaces as plain cluster unions;
    they emit no false positives because every candidate is still checked
    against the generators.
    """
    products = []
    for word in _scan_words(T, depth):
        M = word_matrix(T, word)
        products.append(M)
        yield word, M
    rng = np.random.default_rng(COMBINATION_PROBE_SEED)
    for _ in range(N_COMBINATION_PROBES):
        coeffs = rng.normal(size=len(products))
        yield None, sum(c * M for c, M in zip(coeffs, products))


def search_invariant_subspaces(
    T: MatrixTuple,
    depth: int,
    tol: float = SUBSPACE_TOL,
    max_witnesses: int | None = None,
) -> list[SubspaceWitness]:
    """All distinct jointly invariant subspaces found by the eigenvector scan.

    Candidates are spans of eigenvalue-cluster subsets of word products up
    to `depth` (and of seeded combinations of those products), checked
    against every generator.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    found: list[SubspaceWitness] = []
    for word, M in _probe_matrices(T, depth):
        for Q in _candidate_subspaces(M):
            if any(subspaces_equal(Q, w.basis, tol) for w in found):
                continue
            r = invariance_residual(T, Q)
            if r <= tol:
                found.append(SubspaceWitness(basis=Q, residual=r, source_word=word))
                if max_witnesses is not None and len(found) >= max_witnesses:
                    return found
    return found


def _orbit_closure(
    T: MatrixTuple, Q: np.ndarray, rounds: int, tol: float
) -> tuple[list[np.ndarray], bool]:
    """Breadth-first orbit of Q under the generators.

    Returns (members, True) once a full sweep of the frontier adds no new
    subspace -- every member was a frontier once, so the set is then
    closed -- and (members, False) when the round budget or the component
    cap runs out first.
    """
    members = [Q]
    frontier = [Q]
    for _ in range(rounds):
        new: list[np.ndarray] = []
        for U in frontier:
            for m in T.matrices:
                image = orthonormal_basis(m @ U)
                if image.shape[1] != U.shape[1]:
                    return members, False
                if not any(subspaces_equal(image, V, tol) for V in members + new):
                    new.append(image)
                    if len(members) + len(new) > MAX_UNION_COMPONENTS:
                        return members, False
        if not new:
            return members, True
        members.extend(new)
        frontier = new
    return members, False


def _union_residual(T: MatrixTuple, members: list[np.ndarray]) -> float:
    worst = 0.0
    for U in members:
        for m in T.matrices:
            image = orthonormal_basis(m @ U)
            best = min(
                principal_angle_sine(image, V)
                for V in members
                if V.shape[1] == image.shape[1]
            )
            worst = max(worst, best)
    return worst


def invariant_subspace_search(
    T: MatrixTuple,
    mode: str,
    depth: int,
    tol: float = SUBSPACE_TOL,
) -> SubspaceWitness | FiniteUnionWitness | None:
    """Search for a jointly invariant subspace or a finite invariant union.

    `single` returns the first eigenvector-candidate subspace invariant
    under every generator.  `finite_union` follows each candidate's orbit
    under the generators for up to `depth` closure rounds and reports the
    orbit if it stabilizes to a finite set mapped into itself.  A None
    result means no witness was found up to the given depth.
    """
    if mode == "single":
        found = search_invariant_subspaces(T, depth, tol, max_witnesses=1)
        return found[0] if found else None
    if mode != "finite_union":
        raise ValueError("mode must be 'single' or 'finite_union'")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    seen: list[np.ndarray] = []
    for word, M in _probe_matrices(T, depth):
        for Q in _candidate_subspaces(M):
            if any(subspaces_equal(Q, S, tol) for S in seen):
                continue
            seen.append(Q)
            members, stabilized = _orbit_closure(T, Q, rounds=depth, tol=tol)
            if stabilized:
                residual = _union_residual(T, members)
                if residual <= tol:
                    return FiniteUnionWitness(
                        bases=tuple(members),
                        residual=residual,
                        source_word=word,
                    )
    return None


@dataclass(frozen=True)
class QMProfile:
    """Best connecting-word ratios for the bridge 1^n -> (any k) -> 2^n.

    ratio_n = max over |k| <= n0 (the empty word included) of
    phi_s(A_{1^n} A_k A_{2^n}) / (phi_s(A_{1^n}) phi_s(A_{2^n})).
    Quasi-multiplicativity would keep these ratios bounded below; decay to
    zero exhibits its failure.
    """

    s: float
    n0: int
    rows: tuple[tuple[int, float], ...]

    def ratios(self) -> np.ndarray:
        return np.array([r for _, r in self.rows])

    def fitted_decay_slope(self) -> float:
        """Least-squares slope of log ratio_n against n."""
        ns = np.array([n for n, _ in self.rows], dtype=float)
        logs = np.log(self.ratios())
        coeffs = np.polyfit(ns, logs, 1)
        return float(coeffs[0])

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "ratio"])
            for n, r in self.rows:
                writer.writerow([n, repr(r)])


def _wedge_orders(s: float, d: int) -> list[int]:
    k = math.floor(s)
    orders = []
    if k >= 1:
        orders.append(min(k, d))
    if s > k and k + 1 <= d:
        orders.append(k + 1)
    return sorted(set(orders))


def _log_phi_from_norms(norms: dict[int, float], s: float, d: int) -> float:
    """log phi_s from wedge-power operator norms (0 < s <= d).

    ||A^^k|| is the product of the k leading singular values, so phi_s is
    the geometric interpolation between consecutive wedge norms; top
    singular values of carried wedge products stay well-conditioned for
    long words where the small singular values of A itself do not.
    """
    k = math.floor(s)
    frac = s - k
    lo = 0.0 if k == 0 else math.log(norms[min(k, d)])
    if frac == 0.0 or k >= d:
        return lo
    return (1.0 - frac) * lo + frac * math.log(norms[k + 1])


def quasi_multiplicativity_profile(
    T: MatrixTuple,
    s: float,
    n0: int,
    n_max: int,
    budget: int | None = None,
) -> QMProfile:
    """Connecting-word ratio profile for n = 1..n_max.

    Works in the wedge representations needed by phi_s, carrying powers of
    the two block generators, so only operator norms are ever extracted.
    """
    if not 0.0 < s <= T.dim:
        raise ValueError(f"profile supports 0 < s <= d, got s={s}")
    if T.n_maps < 2:
        raise ValueError("alphabet must contain symbols 1 and 2")
    if n0 < 0 or n_max < 1:
        raise ValueError("n0 must be >= 0 and n_max >= 1")
    orders = _wedge_orders(s, T.dim)
    reps = {k: T.exterior(k) for k in orders}

    connectors: list[Word] = [()]
    for length in range(1, n0 + 1):
        connectors.extend(enumerate_words(T.n_maps, length, budget=budget))
    connector_mats = {
        k: [word_matrix(reps[k], w) for w in connectors] for k in orders
    }

    rows = []
    left = {k: np.eye(reps[k].dim) for k in orders}
    right = {k: np.eye(reps[k].dim) for k in orders}
    for n in range(1, n_max + 1):
        for k in orders:
            left[k] = left[k] @ reps[k][1]
            right[k] = right[k] @ reps[k][2]
        log_phi_left = _log_phi_from_norms(
            {k: operator_norm(left[k]) for k in orders}, s, T.dim
        )
        log_phi_right = _log_phi_from_norms(
            {k: operator_norm(right[k]) for k in orders}, s, T.dim
        )
        best = -math.inf
        for idx in range(len(connectors)):
            norms = {
                k: operator_norm(left[k] @ connector_mats[k][idx] @ right[k])
                for k in orders
            }
            best = max(best, _log_phi_from_norms(norms, s, T.dim))
        rows.append((n, math.exp(best - log_phi_left - log_phi_right)))
    return QMProfile(s=float(s), n0=n0, rows=tuple(rows))


def kronecker_intersection_check(X1, X2) -> tuple[int, int, int]:
    """Rank/intersection data of the coordinate-projector obstruction.

    With P the rank-one projector onto the first coordinate of R^2,
    U2 = ker(P (x) I) and V1 = (I (x) P) R^4, returns

        rank((P (x) I)(X1 (x) X2)(I (x) P)),
        rank((X1 (x) X2)(I (x) P)),
        dim(U2 intersect (X1 (x) X2) V1).

    For invertible X1, X2 these are (1, 2, 1): the image of V1 always
    meets U2 in exactly one dimension, which is what pins the connecting
    word ratios of the Kronecker pair down.
    """
    A1 = as_matrix(X1)
    A2 = as_matrix(X2)
    if A1.shape != (2, 2) or A2.shape != (2, 2):
        raise ValueError("expected 2x2 matrices")
    for A in (A1, A2):
        top = operator_norm(A)
        if not abs(float(np.linalg.det(A))) > INVERTIBILITY_RTOL * top ** 2:
            raise SingularMatrixError("inputs must be invertible 2x2 matrices")
    P = np.array([[1.0, 0.0], [0.0, 0.0]])
    I2 = np.eye(2)
    M = np.kron(A1, A2)
    IP = np.kron(I2, P)
    PI = np.kron(P, I2)
    rank_a = int(np.linalg.matrix_rank(PI @ M @ IP))
    rank_b = int(np.linalg.matrix_rank(M @ IP))

    u2_basis = _nullspace(PI)
    v1_image = orthonormal_basis(M @ IP)
    stacked = np.hstack([u2_basis, -v1_image])
    intersection = stacked.shape[1] - int(np.linalg.matrix_rank(stacked))
    return rank_a, rank_b, intersection


def _nullspace(A: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    u, sv, vt = np.linalg.svd(A)
    if sv.size and sv[0] > 0:
        rank = int((sv > rtol * sv[0]).sum())
    else:
        rank = 0
    return vt[rank:].T


def projective_ratio_multiset(M) -> list[complex]:
    """Eigenvalue ratios over all ordered pairs; invariant under scaling."""
    eigvals = np.linalg.eigvals(as_matrix(M))
    d = eigvals.size
    return [
        complex(eigvals[i] / eigvals[j])
        for i in range(d)
        for j in range(d)
        if i != j
    ]


def _multisets_match(xs: list[complex], ys: list[complex], rtol: float = 1e-8) -> bool:
    if len(xs) != len(ys):
        return False
    remaining = list(ys)
    for x in xs:
        tol = rtol * max(1.0, abs(x))
        best = None
        for idx, y in enumerate(remaining):
            if abs(x - y) <= tol:
                best = idx
                break
        if best is None:
            return False
        remaining.pop(best)
    return True


@dataclass(frozen=True)
class ObstructionReport:
    """Spectral obstructions to the two intertwining hypotheses.

    `conjugacy_word` is the first word whose projective ratio multiset
    differs from its iota-image's (no single h can conjugate the family
    onto its relabeling); `inverse_transpose_word` the first word whose
    multiset differs from that of the image's inverse-transpose.  A found
    word certifies the corresponding hypothesis; None only means the
    spectral test was inconclusive up to the depth, and is flagged as
    such.
    """

    depth: int
    conjugacy_word: Word | None
    inverse_transpose_word: Word | None

    @property
    def conjugacy_excluded(self) -> bool:
        return self.conjugacy_word is not None

    @property
    def inverse_transpose_excluded(self) -> bool:
        return self.inverse_transpose_word is not None

    def notes(self) -> list[str]:
        out = []
        if not self.conjugacy_excluded:
            out.append(
                "spectral test inconclusive for the conjugation form up to "
                f"depth {self.depth}"
            )
        if not self.inverse_transpose_excluded:
            out.append(
                "spectral test inconclusive for the inverse-transpose form "
                f"up to depth {self.depth}"
            )
        return out


def conjugacy_obstruction(
    base: MatrixTuple, iota: SymbolPermutation, depth: int
) -> ObstructionReport:
    """Scan words for spectral obstructions to the two intertwining forms."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    conj_word = None
    invt_word = None
    for length in range(1, depth + 1):
        if conj_word is not None and invt_word is not None:
            break
        for word in enumerate_words(base.n_maps, length):
            B = word_matrix(base, word)
            B_image = word_matrix(base, iota(word))
            ratios = projective_ratio_multiset(B)
            if conj_word is None and not _multisets_match(
                ratios, projective_ratio_multiset(B_image)
            ):
                conj_word = word
            if invt_word is None and not _multisets_match(
                ratios, projective_ratio_multiset(np.linalg.inv(B_image).T)
            ):
                invt_word = word
            if conj_word is not None and invt_word is not None:
                break
    return ObstructionReport(
        depth=depth,
        conjugacy_word=conj_word,
        inverse_transpose_word=invt_word,
    )
