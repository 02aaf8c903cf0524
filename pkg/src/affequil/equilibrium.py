"""Level-n Gibbs weights, distinctness diagnostics, and Lyapunov dimension.

Equilibrium states are infinite-level objects; here they are represented
through their level-n cylinder weights, which the Gibbs property pins
down up to a uniform constant.  Two diagnostics track whether the two
factor potentials of a Kronecker pair generate distinct states: the
per-word log-ratio of the factor potentials along powers of a witness
word (whose divergence rules out a shared Gibbs constant), and the
total-variation distance between the two level distributions.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import NotAWitnessError, NotContractingError, OutOfRangeSError
from .linalg import eigen_moduli, log_phi_s_from_spectrum
from .potentials import Potential
from .pressure import DimensionResult, _bisect_monotone, log_level_sum, tree_sum
from .words import (
    MatrixTuple,
    SymbolPermutation,
    Word,
    count_words,
    enumerate_words,
    iter_product_levels,
    word_matrix,
    word_rank,
)

# A word witnesses spectral asymmetry when its top eigenvalue-ratio differs
# from its image's by more than this on the log scale; eigen-solver noise
# sits around 1e-12 there.
WITNESS_LOG_TOL = 1e-6


@dataclass(frozen=True)
class LevelDistribution:
    """Probability weights over all words of one length, lexicographic order."""

    n_symbols: int
    level: int
    weights: np.ndarray
    potential_label: str

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (count_words(self.n_symbols, self.level),):
            raise ValueError("weight vector length must be N**level")
        if not (w > 0).all():
            raise ValueError("level weights must be strictly positive")
        if abs(tree_sum(w) - 1.0) > 1e-12:
            raise ValueError("level weights must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def weight(self, word: Word) -> float:
        if len(word) != self.level:
            raise ValueError(f"expected a word of length {self.level}")
        return float(self.weights[word_rank(word, self.n_symbols)])

    def items(self) -> Iterator[tuple[Word, float]]:
        for word, w in zip(
            enumerate_words(self.n_symbols, self.level), self.weights
        ):
            yield word, float(w)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["word", "weight"])
            for word, w in self.items():
                writer.writerow(["".join(map(str, word)), repr(w)])

    def to_json_dict(self) -> dict:
        return {
            "alphabet": self.n_symbols,
            "level": self.level,
            "potential": self.potential_label,
            "weights": {
                "".join(map(str, word)): w for word, w in self.items()
            },
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)


def gibbs_level_weights(
    P: Potential, n: int, budget: int | None = None
) -> LevelDistribution:
    """Self-normalized potential values over level n: w(i) = Phi(i)/sum Phi.

    These are the natural finite-level stand-ins for the equilibrium
    state's cylinder weights: the Gibbs property bounds the true weights
    between constant multiples of them.
    """
    log_values = P.level_log_values(n, budget)
    log_total = log_level_sum(log_values)
    weights = np.exp(log_values - log_total)
    weights = weights / tree_sum(weights)
    return LevelDistribution(
        n_symbols=P.n_symbols,
        level=n,
        weights=weights,
        potential_label=P.label,
    )


def total_variation(a: LevelDistribution, b: LevelDistribution) -> float:
    if a.n_symbols != b.n_symbols or a.level != b.level:
        raise ValueError("distributions must share alphabet and level")
    return 0.5 * tree_sum(np.abs(a.weights - b.weights))


def weight_extension_spread(
    P: Potential, n: int, budget: int | None = None
) -> tuple[float, float]:
    """(min, max) of weight_{n+1}(wj) / weight_n(w) over all w, j.

    A finite spread is the empirical face of the Gibbs sandwich; the true
    constant is not computable, so the spread is reported, not bounded.
    """
    dist_n = gibbs_level_weights(P, n, budget)
    dist_next = gibbs_level_weights(P, n + 1, budget)
    ratios = dist_next.weights.reshape(-1, P.n_symbols) / dist_n.weights[:, None]
    return float(ratios.min()), float(ratios.max())


@dataclass(frozen=True)
class BernoulliMeasure:
    """Product measure on the coding space with marginal p on symbols."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("p must be a probability vector")
        if not (p > 0).all():
            raise ValueError("Bernoulli weights must be strictly positive")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError("Bernoulli weights must sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def uniform(cls, n_symbols: int) -> "BernoulliMeasure":
        return cls(np.full(n_symbols, 1.0 / n_symbols))

    @property
    def n_symbols(self) -> int:
        return self.p.size

    def entropy(self) -> float:
        return float(-(self.p * np.log(self.p)).sum())

    def cylinder(self, word: Word) -> float:
        return float(np.prod([self.p[a - 1] for a in word]))

    def level_weights(self, n: int) -> np.ndarray:
        """Cylinder weights of all length-n words, lexicographic order."""
        out = self.p
        for _ in range(n - 1):
            out = np.kron(out, self.p)
        return out


def log_eigen_ratio(M) -> float:
    """log of the ratio of the two largest eigenvalue moduli."""
    moduli = eigen_moduli(M)
    return float(math.log(moduli[0]) - math.log(moduli[1]))


def spectral_ratio_witness(
    base: MatrixTuple,
    iota: SymbolPermutation,
    depth: int,
    log_tol: float = WITNESS_LOG_TOL,
) -> Word | None:
    """First word whose top eigenvalue-ratio differs from its iota-image's.

    Scans words by length, lexicographically.  Returns None when no word
    up to the given depth separates the ratios -- which is not a
    certificate that none exists.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    for length in range(1, depth + 1):
        for word in enumerate_words(base.n_maps, length):
            r = log_eigen_ratio(word_matrix(base, word))
            r_image = log_eigen_ratio(word_matrix(base, iota(word)))
            if abs(r - r_image) > log_tol:
                return word
    return None


@dataclass(frozen=True)
class RatioDiagnostic:
    """Factor-potential log-ratios along powers of a witness word.

    r_n = (1/n) log(F1(w^n) / F2(w^n)) converges to
    (s-1) * [log-ratio(B_w) - log-ratio(B_{iota(w)})]; a nonzero limit
    means the unnormalized ratio diverges geometrically, which is
    incompatible with the two factor potentials sharing an equilibrium
    state (their Gibbs envelopes would force the ratio to stay bounded).
    """

    word: Word
    s: float
    repeats: tuple[int, ...]
    values: tuple[float, ...]
    asymptote: float

    def rows(self) -> Iterator[tuple[int, float]]:
        return iter(zip(self.repeats, self.values))


def distinctness_diagnostic(
    base: MatrixTuple,
    iota: SymbolPermutation,
    s: float,
    word: Word,
    n_max: int,
) -> RatioDiagnostic:
    """Track the factor-potential ratio along word^n for n = 1..n_max.

    The factor ratio collapses to singular-value ratios of the two block
    products:

        (1/n) log(F1/F2)(w^n)
            = (s-1)/n * [log(s1/s2)(B_w^n) - log(s1/s2)(B_{iota(w)}^n)],

    so only powers of the two d-dim base products are formed.
    """
    if not 1.0 < s <= 2.0:
        raise OutOfRangeSError("distinctness diagnostic requires 1 < s <= 2")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    M1 = word_matrix(base, word)
    M2 = word_matrix(base, iota(word))
    r1 = log_eigen_ratio(M1)
    r2 = log_eigen_ratio(M2)
    if abs(r1 - r2) <= WITNESS_LOG_TOL:
        raise NotAWitnessError(
            f"word {word}: top eigenvalue ratios agree to within {WITNESS_LOG_TOL}"
        )
    asymptote = (s - 1.0) * (r1 - r2)

    repeats = []
    values = []
    P1 = np.eye(base.dim)
    P2 = np.eye(base.dim)
    for n in range(1, n_max + 1):
        P1 = P1 @ M1
        P2 = P2 @ M2
        sv1 = np.linalg.svd(P1, compute_uv=False)
        sv2 = np.linalg.svd(P2, compute_uv=False)
        gap1 = math.log(sv1[0]) - math.log(sv1[1])
        gap2 = math.log(sv2[0]) - math.log(sv2[1])
        repeats.append(n)
        values.append((s - 1.0) * (gap1 - gap2) / n)
    return RatioDiagnostic(
        word=tuple(word),
        s=float(s),
        repeats=tuple(repeats),
        values=tuple(values),
        asymptote=asymptote,
    )


def lyapunov_dimension(
    T: MatrixTuple,
    mu: BernoulliMeasure,
    n: int,
    tol: float,
    budget: int | None = None,
) -> DimensionResult:
    """Bracket the zero of h(mu) + level-n Lyapunov integral of phi_s.

    The integral (1/n) sum mu([w]) log phi_s(A_w) decreases to its limit
    in n (subadditivity), so the returned bracket over-estimates the true
    Lyapunov dimension; it also never exceeds the same-level affinity
    bracket because the entropy-weighted sum is dominated by the log of
    the level sum.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mu.n_symbols != T.n_maps:
        raise ValueError("measure and tuple must share the alphabet")
    if T.max_norm() >= 1.0:
        raise NotContractingError("Lyapunov dimension requires max ||A_i|| < 1")
    stack = None
    for _, stack in iter_product_levels(T, n, budget):
        pass
    spectra = np.linalg.svd(stack, compute_uv=False)
    weights = mu.level_weights(n)
    h = mu.entropy()

    def objective(s: float) -> float:
        logs = np.asarray(log_phi_s_from_spectrum(spectra, s))
        return h + tree_sum(weights * logs) / n

    lo, hi, iterations, f_lo, f_hi = _bisect_monotone(objective, 0.0, 2.0 * T.dim, tol)
    return DimensionResult(
        lo=lo,
        hi=hi,
        level=n,
        iterations=iterations,
        objective_at_lo=f_lo,
        objective_at_hi=f_hi,
    )
