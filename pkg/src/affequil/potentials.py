"""Submultiplicative potentials on words.

Three kinds are provided:

* ``PhiSPotential`` -- the singular value function of word products,
  ``w -> phi_s(A_w)``;
* ``NormProductPotential`` -- weighted norm products
  ``w -> prod_j ||A_w^(j)||^{beta_j}`` over several matrix tuples sharing
  one alphabet;
* ``FactorPotential`` -- the two factor potentials of a Kronecker pair
  ``A_i = B_i (x) B_{iota(i)}``,

      F1(w) = ||B_w||^s * ||B_{iota(w)}||^{2-s} * ||B_{iota(w)}^^2||^{s-1},
      F2(w) = F1(iota(w)),

  defined for 1 < s <= 2.  For that range phi_s(A_w) equals
  max(F1(w), F2(w)) because the top two singular values of a Kronecker
  product are sigma_1*sigma_1 and max(sigma_1*sigma_2, sigma_2*sigma_1).

``dualize`` folds exponents s in [d^2-2, d^2-1) onto (1, 2] by passing to
scaled inverse-transposes, preserving phi values of all word products.

Every kind evaluates whole levels through prefix-product carries: the
depth-n product tree is walked once per component tuple and norms are
taken in a single batched SVD per level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import OutOfRangeSError
from .linalg import log_phi_s_from_spectrum, phi_s
from .words import (
    MatrixTuple,
    SymbolPermutation,
    Word,
    iter_product_levels,
    word_matrix,
)


def _stack_top_log_norms(stack: np.ndarray) -> np.ndarray:
    """log of the operator norm for each matrix in a stack."""
    sv = np.linalg.svd(stack, compute_uv=False)
    return np.log(sv[..., 0])


class Potential:
    """Evaluatable positive weight on words, submultiplicative by design.

    Subclasses set `label`, `n_symbols` and implement `log_eval` plus the
    per-level batched evaluation.  `evidence` is a free-form annotation
    (e.g. irreducibility diagnostics attached by the caller); it is echoed
    into reports but never validated -- strong irreducibility of the
    underlying tuples cannot be certified numerically.
    """

    label: str = "potential"
    n_symbols: int = 0
    evidence: Mapping | None = None

    def eval(self, word: Word) -> float:
        return math.exp(self.log_eval(word))

    def log_eval(self, word: Word) -> float:
        raise NotImplementedError

    def iter_level_log_values(
        self, n: int, budget: int | None = None
    ) -> Iterator[tuple[int, np.ndarray]]:
        """Yield (m, log values over all length-m words) for m = 1..n."""
        raise NotImplementedError

    def level_log_values(self, n: int, budget: int | None = None) -> np.ndarray:
        values = None
        for _, values in self.iter_level_log_values(n, budget):
            pass
        return values


class PhiSPotential(Potential):
    """w -> phi_s(A_w) for a fixed matrix tuple and exponent s >= 0."""

    def __init__(self, tuple_: MatrixTuple, s: float, evidence: Mapping | None = None):
        if s < 0:
            raise OutOfRangeSError("phi_s requires s >= 0")
        self.tuple = tuple_
        self.s = float(s)
        self.n_symbols = tuple_.n_maps
        self.evidence = evidence
        self.label = f"phi_s(s={self.s:g})"

    def log_eval(self, word: Word) -> float:
        sv = np.linalg.svd(word_matrix(self.tuple, word), compute_uv=False)
        return float(log_phi_s_from_spectrum(sv, self.s))

    def iter_level_log_values(self, n, budget=None):
        for m, stack in iter_product_levels(self.tuple, n, budget):
            sv = np.linalg.svd(stack, compute_uv=False)
            yield m, np.asarray(log_phi_s_from_spectrum(sv, self.s))

    def iter_level_spectra(self, n, budget=None):
        """Yield (m, singular-value stacks); spectra are s-independent, so
        callers scanning many exponents reuse one product walk."""
        for m, stack in iter_product_levels(self.tuple, n, budget):
            yield m, np.linalg.svd(stack, compute_uv=False)


class NormProductPotential(Potential):
    """w -> prod_j ||A_w^(j)||^{beta_j} over tuples sharing one alphabet."""

    def __init__(
        self,
        tuples: Sequence[MatrixTuple],
        betas: Sequence[float],
        evidence: Mapping | None = None,
        label: str | None = None,
    ):
        if len(tuples) != len(betas) or not tuples:
            raise ValueError("need one positive exponent per matrix tuple")
        if any(b <= 0 for b in betas):
            raise ValueError("norm-product exponents must be positive")
        if len({t.n_maps for t in tuples}) != 1:
            raise ValueError("all tuples must share the alphabet size")
        self.tuples = tuple(tuples)
        self.betas = tuple(float(b) for b in betas)
        self.n_symbols = tuples[0].n_maps
        self.evidence = evidence
        self.label = label or f"norm_product(betas={self.betas})"

    def log_eval(self, word: Word) -> float:
        out = 0.0
        for t, b in zip(self.tuples, self.betas):
            sv = np.linalg.svd(word_matrix(t, word), compute_uv=False)
            out += b * math.log(float(sv[0]))
        return out

    def iter_level_log_values(self, n, budget=None):
        walks = [iter_product_levels(t, n, budget) for t in self.tuples]
        for levels in zip(*walks):
            m = levels[0][0]
            total = np.zeros(levels[0][1].shape[0])
            for (_, stack), b in zip(levels, self.betas):
                total += b * _stack_top_log_norms(stack)
            yield m, total


class FactorPotential(Potential):
    """One of the two factor potentials of a Kronecker pair, 1 < s <= 2.

    `which=1` gives F1 as in the module docstring; `which=2` gives
    F2(w) = F1(iota(w)).  Component norms are computed from the d-dim
    base matrices (and their wedge squares), never from d^2-dim products.
    """

    def __init__(
        self,
        base: MatrixTuple,
        iota: SymbolPermutation,
        s: float,
        which: int = 1,
        evidence: Mapping | None = None,
    ):
        if not 1.0 < s <= 2.0:
            raise OutOfRangeSError(
                f"factor potentials require 1 < s <= 2, got s={s}; dualize first"
            )
        if which not in (1, 2):
            raise ValueError("which must be 1 or 2")
        if iota.n_symbols != base.n_maps:
            raise ValueError("permutation size does not match the base tuple")
        if base.dim < 2:
            raise ValueError("base matrices must be at least 2x2")
        self.base = base
        self.iota = iota
        self.s = float(s)
        self.which = which
        self.n_symbols = base.n_maps
        self.evidence = evidence
        self.label = f"factor{which}(s={self.s:g})"

        first = base.permuted(iota.power(which - 1))
        second = base.permuted(iota.power(which))
        components = [(first, self.s), (second, 2.0 - self.s), (second.exterior(2), self.s - 1.0)]
        self._components = [(t, b) for t, b in components if b > 0.0]

    def log_eval(self, word: Word) -> float:
        out = 0.0
        for t, b in self._components:
            sv = np.linalg.svd(word_matrix(t, word), compute_uv=False)
            out += b * math.log(float(sv[0]))
        return out

    def iter_level_log_values(self, n, budget=None):
        walks = [iter_product_levels(t, n, budget) for t, _ in self._components]
        betas = [b for _, b in self._components]
        for levels in zip(*walks):
            m = levels[0][0]
            total = np.zeros(levels[0][1].shape[0])
            for (_, stack), b in zip(levels, betas):
                total += b * _stack_top_log_norms(stack)
            yield m, total


def factor_pair(
    base: MatrixTuple, iota: SymbolPermutation, s: float
) -> tuple[FactorPotential, FactorPotential]:
    return (
        FactorPotential(base, iota, s, which=1),
        FactorPotential(base, iota, s, which=2),
    )


@dataclass(frozen=True)
class MaxIdentityCheck:
    """phi_s of the Kronecker word product against the two factor values."""

    word: Word
    value: float
    factor1: float
    factor2: float
    holds: bool


def max_identity_check(
    base: MatrixTuple,
    iota: SymbolPermutation,
    s: float,
    word: Word,
    rtol: float = 1e-8,
) -> MaxIdentityCheck:
    """Check phi_s(A_w) = max(F1(w), F2(w)) for A_i = B_i (x) B_{iota(i)}."""
    f1, f2 = factor_pair(base, iota, s)
    pair = base.kron_pair(iota)
    value = phi_s(word_matrix(pair, word), s)
    r1 = f1.eval(word)
    r2 = f2.eval(word)
    best = max(r1, r2)
    holds = abs(value - best) <= rtol * max(abs(value), abs(best))
    return MaxIdentityCheck(word=tuple(word), value=value, factor1=r1, factor2=r2, holds=holds)


@dataclass(frozen=True)
class DualizedSystem:
    """Scaled inverse-transpose system folding s in [d^2-2, d^2-1) to (1, 2].

    phi_{dual_s} of dual Kronecker word products equals phi_{primal_s} of
    the primal ones, word by word.
    """

    primal_s: float
    dual_s: float
    dual_tuple: MatrixTuple


def dualize(base: MatrixTuple, iota: SymbolPermutation, s: float) -> DualizedSystem:
    """Dual base tuple B'_i = |det B_i|^{d/(d^2-s)} * (B_i^{-1})^T.

    The exponent d/(d^2-s) makes the letter scalars multiply out to
    |det A_i|^{1/(d^2-s)} on the Kronecker pair, which is exactly the
    normalization under which phi^{d^2-s} of the dual products reproduces
    phi^s of the primal ones.

    Accepted regimes: s in [d^2-2, d^2-1), folding onto dual_s in (1, 2],
    and the inverse fold s in (1, 2].  The map is an involution: dualizing
    the dual tuple at dual_s returns the original matrices exactly.
    """
    d = base.dim
    lo, hi = d * d - 2, d * d - 1
    if not (lo <= s < hi or 1.0 < s <= 2.0):
        raise OutOfRangeSError(
            f"dualize requires {lo} <= s < {hi} or 1 < s <= 2, got s={s}"
        )
    if iota.n_symbols != base.n_maps:
        raise ValueError("permutation size does not match the base tuple")
    exponent = d / (d * d - s)
    duals = tuple(
        abs(float(np.linalg.det(m))) ** exponent * np.linalg.inv(m).T
        for m in base.matrices
    )
    return DualizedSystem(
        primal_s=float(s),
        dual_s=float(d * d - s),
        dual_tuple=MatrixTuple(duals),
    )
