"""Finite-level pressure estimation and affinity-dimension bracketing.

The level-n pressure of a potential is (1/n) log sum of its values over
all length-n words.  By submultiplicativity that sequence decreases to
the pressure, so every level value is a rigorous upper bound; periodic
words give zero-entropy lower bounds through eigenvalue moduli.  No rate
for the convergence is available, so the gap between `upper` and `lower`
is reported, never closed: bisection output brackets the level-n zero,
which over-estimates the true dimension by the (unknown) finite-level
gap.

All level sums are reduced over a fixed-shape fan-in-2 tree in canonical
(lexicographic) order, so identical inputs give bit-identical sums no
matter how the work is partitioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, NotContractingError
from .linalg import log_phi_s_from_spectrum
from .potentials import FactorPotential, PhiSPotential, Potential
from .words import MatrixTuple, count_words, iter_product_levels

BISECTION_MAX_ITER = 200


def tree_sum(values) -> float:
    """Sum with a fixed fan-in-2 tree determined only by the length."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return 0.0
    while v.size > 1:
        half = v.size // 2
        paired = v[0 : 2 * half : 2] + v[1 : 2 * half : 2]
        v = np.concatenate([paired, v[2 * half :]]) if v.size % 2 else paired
    return float(v[0])


def log_level_sum(log_values) -> float:
    """log of the sum of exp(log_values), max-shifted for conditioning."""
    lv = np.asarray(log_values, dtype=float)
    m = float(lv.max())
    if not math.isfinite(m):
        return m
    return m + math.log(tree_sum(np.exp(lv - m)))


@dataclass(frozen=True)
class PressureEstimate:
    """Level-n pressure value with its running upper and periodic lower bounds.

    `value` is the level-n estimate, `upper` the minimum over all levels
    m <= n computed in the same call (still an upper bound for the
    pressure), `lower` the best periodic-orbit bound at level n (None for
    potential kinds without an eigenvalue-moduli form).
    """

    level: int
    value: float
    upper: float
    lower: float | None
    word_count: int


def level_pressure_profile(
    P: Potential, n: int, budget: int | None = None
) -> list[tuple[int, float]]:
    """[(m, level-m pressure estimate)] for m = 1..n in one tree walk."""
    return [
        (m, log_level_sum(lv) / m) for m, lv in P.iter_level_log_values(n, budget)
    ]


def level_pressure(P: Potential, n: int, budget: int | None = None) -> PressureEstimate:
    """Exact level-n pressure estimate with bounds.

    Walks the depth-n product tree once, evaluating the potential at every
    level on the way down, so `upper` comes for free.
    """
    profile = level_pressure_profile(P, n, budget)
    value = profile[-1][1]
    upper = min(v for _, v in profile)
    lower = None
    if isinstance(P, PhiSPotential):
        lower = lower_bound_periodic(P, n, budget)
    return PressureEstimate(
        level=n,
        value=value,
        upper=upper,
        lower=lower,
        word_count=count_words(P.n_symbols, n),
    )


def lower_bound_periodic(
    P: PhiSPotential, n: int, budget: int | None = None
) -> float:
    """Best zero-entropy lower bound from length-n periodic words.

    For the periodic point with repeating block w the Lyapunov data of the
    block product are its eigenvalue moduli, so the variational principle
    gives P >= (1/n) log phi_s evaluated on the moduli of A_w; the bound
    is also dominated by every finite-level estimate.
    """
    if not isinstance(P, PhiSPotential):
        raise TypeError("periodic lower bounds are defined for phi_s potentials")
    stack = None
    for _, stack in iter_product_levels(P.tuple, n, budget):
        pass
    moduli = np.sort(np.abs(np.linalg.eigvals(stack)), axis=-1)[..., ::-1]
    values = np.asarray(log_phi_s_from_spectrum(moduli, P.s))
    return float(values.max()) / n


@dataclass(frozen=True)
class DimensionResult:
    """Bisection bracket for a dimension estimate.

    The objective at `lo` is >= 0 and at `hi` is <= 0; both endpoint
    values are recorded so the bracket semantics stay visible.  The
    result brackets the zero of the *level-n* objective, an upper proxy
    for the limit quantity.
    """

    lo: float
    hi: float
    level: int
    iterations: int
    objective_at_lo: float
    objective_at_hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _bisect_monotone(objective, lo: float, hi: float, tol: float) -> tuple:
    """Bisect a non-increasing objective, verifying monotonicity on the
    evaluated points and bracket signs at the endpoints."""
    evaluated: dict[float, float] = {}

    def f(x: float) -> float:
        if x not in evaluated:
            evaluated[x] = objective(x)
        return evaluated[x]

    if f(lo) < 0:
        raise BracketError(f"objective at s={lo} is negative: {f(lo):.6g}")
    if f(hi) > 0:
        raise BracketError(f"objective at s={hi} is positive: {f(hi):.6g}")
    iterations = 0
    while hi - lo > tol and iterations < BISECTION_MAX_ITER:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    points = sorted(evaluated)
    for a, b in zip(points, points[1:]):
        slack = 1e-10 * (1.0 + abs(evaluated[a]))
        if evaluated[b] > evaluated[a] + slack:
            raise BracketError(
                f"objective not non-increasing between s={a} and s={b}"
            )
    return lo, hi, iterations, evaluated[lo], evaluated[hi]


def affinity_dimension(
    T: MatrixTuple, n: int, tol: float, budget: int | None = None
) -> DimensionResult:
    """Bracket the zero of the level-n pressure of s -> phi_s.

    The singular spectra of all level-n products are computed once; each
    bisection step then re-weights them, so the cost is one tree walk
    plus O(iterations) vectorized passes.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if T.max_norm() >= 1.0:
        raise NotContractingError("affinity dimension requires max ||A_i|| < 1")
    stack = None
    for _, stack in iter_product_levels(T, n, budget):
        pass
    spectra = np.linalg.svd(stack, compute_uv=False)

    def objective(s: float) -> float:
        return log_level_sum(log_phi_s_from_spectrum(spectra, s)) / n

    lo, hi, iterations, f_lo, f_hi = _bisect_monotone(objective, 0.0, 2.0 * T.dim, tol)
    return DimensionResult(
        lo=lo,
        hi=hi,
        level=n,
        iterations=iterations,
        objective_at_lo=f_lo,
        objective_at_hi=f_hi,
    )


@dataclass(frozen=True)
class PressureEqualityReport:
    """Level sums of the two factor potentials against the phi_s sum.

    The two factor sums agree up to summation order (the permutation is a
    level bijection), and the phi_s sum is sandwiched between their mean
    and their total because phi_s is the pointwise maximum of the two.
    """

    level: int
    s: float
    log_sum_factor1: float
    log_sum_factor2: float
    log_sum_phi: float
    symmetric: bool
    symmetry_rel_diff: float
    sandwich_holds: bool

    @property
    def sum_factor1(self) -> float:
        return math.exp(self.log_sum_factor1)

    @property
    def sum_factor2(self) -> float:
        return math.exp(self.log_sum_factor2)

    @property
    def sum_phi(self) -> float:
        return math.exp(self.log_sum_phi)


def pressure_equality_check(
    P1: Potential, P2: Potential, n: int, budget: int | None = None
) -> PressureEqualityReport:
    """Verify sum F1 = sum F2 and the mean/total sandwich at level n."""
    if not (isinstance(P1, FactorPotential) and isinstance(P2, FactorPotential)):
        raise TypeError("pressure_equality_check expects the two factor potentials")
    if {P1.which, P2.which} != {1, 2}:
        raise ValueError("need one factor potential of each kind (which=1 and which=2)")
    if P1.s != P2.s or P1.iota != P2.iota or P1.base is not P2.base:
        if P1.s != P2.s or P1.iota != P2.iota or len(P1.base.matrices) != len(
            P2.base.matrices
        ) or any(
            not np.array_equal(a, b)
            for a, b in zip(P1.base.matrices, P2.base.matrices)
        ):
            raise ValueError("factor potentials must share base, permutation and s")
    first = P1 if P1.which == 1 else P2
    second = P2 if P1.which == 1 else P1

    log_s1 = log_level_sum(first.level_log_values(n, budget))
    log_s2 = log_level_sum(second.level_log_values(n, budget))
    phis = PhiSPotential(first.base.kron_pair(first.iota), first.s)
    log_s = log_level_sum(phis.level_log_values(n, budget))

    rel = abs(log_s1 - log_s2)
    log_total = float(np.logaddexp(log_s1, log_s2))
    slack = 1e-9 * (1.0 + abs(log_s))
    sandwich = (log_total - math.log(2.0) <= log_s + slack) and (
        log_s <= log_total + slack
    )
    return PressureEqualityReport(
        level=n,
        s=first.s,
        log_sum_factor1=log_s1,
        log_sum_factor2=log_s2,
        log_sum_phi=log_s,
        symmetric=rel <= 1e-12,
        symmetry_rel_diff=rel,
        sandwich_holds=sandwich,
    )
