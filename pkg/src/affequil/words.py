"""Words over a finite alphabet, symbol permutations, and word-indexed
matrix products.

Symbols are 1-based (the alphabet is {1..N}); a word is a tuple of
symbols.  Products are accumulated left to right in double precision
without rescaling: the tuples used here have norms in [0.05, 1.1] and
word lengths <= 32, so entries stay in range, and a guard flags anything
that leaves [1e-300, 1e300] instead of silently clamping.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import EnumerationBudgetError, NonFiniteError
from .linalg import as_matrix, check_invertible, exterior_power, kronecker

DEFAULT_BUDGET = 10 ** 8

PRODUCT_GUARD_LO = 1e-300
PRODUCT_GUARD_HI = 1e300

Word = tuple[int, ...]


def count_words(n_symbols: int, length: int) -> int:
    return n_symbols ** length


def check_budget(n_words: int, budget: int | None = None) -> int:
    limit = DEFAULT_BUDGET if budget is None else int(budget)
    if n_words > limit:
        raise EnumerationBudgetError(
            f"enumerating {n_words} words exceeds the budget of {limit}"
        )
    return n_words


def enumerate_words(
    n_symbols: int,
    length: int,
    prefix: Word = (),
    budget: int | None = None,
) -> Iterator[Word]:
    """Yield every word of the given length exactly once, lexicographically.

    A nonempty `prefix` restricts the stream to the words starting with
    those symbols; disjoint prefixes partition the full enumeration, which
    is how independent workers split a level between themselves.
    """
    if n_symbols < 2:
        raise ValueError("alphabet size must be at least 2")
    if length < 1:
        raise ValueError("word length must be at least 1")
    if any(not 1 <= a <= n_symbols for a in prefix):
        raise ValueError(f"prefix {prefix} not over alphabet 1..{n_symbols}")
    if len(prefix) > length:
        raise ValueError("prefix longer than the requested word length")
    check_budget(count_words(n_symbols, length - len(prefix)), budget)
    symbols = range(1, n_symbols + 1)
    for tail in itertools.product(symbols, repeat=length - len(prefix)):
        yield prefix + tail


def word_rank(word: Word, n_symbols: int) -> int:
    """Position of `word` in the lexicographic enumeration of its length."""
    rank = 0
    for a in word:
        if not 1 <= a <= n_symbols:
            raise ValueError(f"symbol {a} outside alphabet 1..{n_symbols}")
        rank = rank * n_symbols + (a - 1)
    return rank


@dataclass(frozen=True)
class SymbolPermutation:
    """A bijection of {1..N}, stored as the tuple of images of 1..N."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"images {self.images} are not a bijection of 1..{n}")

    @classmethod
    def identity(cls, n_symbols: int) -> "SymbolPermutation":
        return cls(tuple(range(1, n_symbols + 1)))

    @classmethod
    def from_mapping(cls, mapping: dict[int, int]) -> "SymbolPermutation":
        n = len(mapping)
        return cls(tuple(mapping[i] for i in range(1, n + 1)))

    @property
    def n_symbols(self) -> int:
        return len(self.images)

    @property
    def order(self) -> int:
        """Least m >= 1 with the m-th iterate equal to the identity."""
        m = 1
        for length in self._cycle_lengths():
            m = m * length // math.gcd(m, length)
        return m

    def _cycle_lengths(self) -> list[int]:
        seen = set()
        lengths = []
        for start in range(1, self.n_symbols + 1):
            if start in seen:
                continue
            length = 0
            a = start
            while a not in seen:
                seen.add(a)
                a = self.images[a - 1]
                length += 1
            lengths.append(length)
        return lengths

    def power(self, k: int) -> "SymbolPermutation":
        k %= self.order
        images = tuple(range(1, self.n_symbols + 1))
        for _ in range(k):
            images = tuple(self.images[i - 1] for i in images)
        return SymbolPermutation(images)

    def __call__(self, item):
        if isinstance(item, int):
            return self.images[item - 1]
        return tuple(self.images[a - 1] for a in item)


def apply_permutation(iota: SymbolPermutation, word: Word) -> Word:
    """Symbol-wise image of a word; length preserved, bijective per level."""
    return iota(word)


@dataclass(frozen=True)
class MatrixTuple:
    """A tuple of invertible square matrices sharing one dimension."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.matrices) < 1:
            raise ValueError("need at least one matrix")
        mats = tuple(check_invertible(as_matrix(m)) for m in self.matrices)
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise ValueError(f"matrices do not share a dimension: {sorted(dims)}")
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def n_maps(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    def norms(self) -> np.ndarray:
        return np.array([np.linalg.svd(m, compute_uv=False)[0] for m in self.matrices])

    def max_norm(self) -> float:
        return float(self.norms().max())

    def __getitem__(self, symbol: int) -> np.ndarray:
        """Matrix for a 1-based symbol."""
        if not 1 <= symbol <= self.n_maps:
            raise ValueError(f"symbol {symbol} outside alphabet 1..{self.n_maps}")
        return self.matrices[symbol - 1]

    def permuted(self, iota: SymbolPermutation) -> "MatrixTuple":
        """The tuple whose i-th matrix is the iota(i)-th matrix of self."""
        if iota.n_symbols != self.n_maps:
            raise ValueError("permutation size does not match the tuple")
        return MatrixTuple(tuple(self[iota(i)] for i in range(1, self.n_maps + 1)))

    def exterior(self, k: int) -> "MatrixTuple":
        return MatrixTuple(tuple(exterior_power(m, k) for m in self.matrices))

    def kron_with(self, other: "MatrixTuple") -> "MatrixTuple":
        if other.n_maps != self.n_maps:
            raise ValueError("tuples must share alphabet size")
        return MatrixTuple(
            tuple(kronecker(a, b) for a, b in zip(self.matrices, other.matrices))
        )

    def kron_pair(self, iota: SymbolPermutation) -> "MatrixTuple":
        """The tuple with i-th matrix self_i (x) self_{iota(i)}."""
        return self.kron_with(self.permuted(iota))


def _guard_product(M: np.ndarray) -> np.ndarray:
    if not np.isfinite(M).all():
        raise NonFiniteError("matrix product left the finite range")
    peak = float(np.abs(M).max())
    if not PRODUCT_GUARD_LO <= peak <= PRODUCT_GUARD_HI:
        raise NonFiniteError(
            f"matrix product magnitude {peak:.3e} outside "
            f"[{PRODUCT_GUARD_LO:.0e}, {PRODUCT_GUARD_HI:.0e}]"
        )
    return M


def word_matrix(T: MatrixTuple, word: Word) -> np.ndarray:
    """Left-to-right product of the matrices indexed by the word.

    The empty word maps to the identity (an internal sentinel only).
    """
    out = np.eye(T.dim)
    for a in word:
        out = _guard_product(out @ T[a])
    return out


def iter_product_levels(
    T: MatrixTuple, n: int, budget: int | None = None
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (m, stack) for m = 1..n with all length-m word products.

    `stack` has shape (N**m, d, d) in lexicographic word order.  Each
    level is built from the previous one with a single batched matmul, so
    every prefix product is computed exactly once.
    """
    if n < 1:
        raise ValueError("level must be at least 1")
    check_budget(count_words(T.n_maps, n), budget)
    base = np.stack(T.matrices)
    stack = base
    for m in range(1, n + 1):
        if m > 1:
            stack = np.matmul(stack[:, None, :, :], base[None, :, :, :])
            stack = stack.reshape(-1, T.dim, T.dim)
        _guard_stack(stack)
        yield m, stack


def level_products(T: MatrixTuple, n: int, budget: int | None = None) -> np.ndarray:
    """Product stack for the single level n (lexicographic order)."""
    stack = None
    for _, stack in iter_product_levels(T, n, budget):
        pass
    return stack


def _guard_stack(stack: np.ndarray) -> None:
    if not np.isfinite(stack).all():
        raise NonFiniteError("a word product left the finite range")
    peaks = np.abs(stack).reshape(stack.shape[0], -1).max(axis=1)
    if float(peaks.max()) > PRODUCT_GUARD_HI or float(peaks.min()) < PRODUCT_GUARD_LO:
        raise NonFiniteError(
            "a word product magnitude left "
            f"[{PRODUCT_GUARD_LO:.0e}, {PRODUCT_GUARD_HI:.0e}]"
        )
