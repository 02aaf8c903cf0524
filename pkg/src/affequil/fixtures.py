"""Named example systems used across tests and the CLI.

* ``thm1``: the two-generator four-dimensional Kronecker pair
  A1 = diag(a1, a2) (x) R(theta), A2 = R(theta) (x) diag(a1, a2) with the
  swap pairing; defaults a1 = 0.44, a2 = 0.2, theta = 1.0.
* ``thm2``: the four-map affine system (A1, A1, A2, A2) with the
  ball-separated translation vectors.
* ``eq1-3x3``: a pair of 3x3 scaled coordinate cycles (entries 1/2 and
  2/3) that is irreducible but preserves the union of the coordinate
  axes, so it is not strongly irreducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ifs import AffineIFS, construction_system, rotation
from .words import MatrixTuple, SymbolPermutation

DEFAULT_ALPHA1 = 0.44
DEFAULT_ALPHA2 = 0.2
DEFAULT_THETA = 1.0


@dataclass(frozen=True)
class FixtureSystem:
    """Everything a CLI command might need about one named system."""

    name: str
    linear: MatrixTuple
    base: MatrixTuple | None = None
    iota: SymbolPermutation | None = None
    ifs: AffineIFS | None = None
    params: dict | None = None


def kron_pair_base(
    alpha1: float = DEFAULT_ALPHA1,
    alpha2: float = DEFAULT_ALPHA2,
    theta: float = DEFAULT_THETA,
) -> tuple[MatrixTuple, SymbolPermutation]:
    """Base pair (diag(a1, a2), R(theta)) with the swap permutation."""
    base = MatrixTuple((np.diag([alpha1, alpha2]), rotation(theta)))
    return base, SymbolPermutation((2, 1))


def kron_pair_fixture(
    alpha1: float = DEFAULT_ALPHA1,
    alpha2: float = DEFAULT_ALPHA2,
    theta: float = DEFAULT_THETA,
) -> FixtureSystem:
    base, iota = kron_pair_base(alpha1, alpha2, theta)
    return FixtureSystem(
        name="thm1",
        linear=base.kron_pair(iota),
        base=base,
        iota=iota,
        params={"alpha1": alpha1, "alpha2": alpha2, "theta": theta},
    )


def four_map_fixture(
    alpha1: float = DEFAULT_ALPHA1,
    alpha2: float = DEFAULT_ALPHA2,
    theta: float = DEFAULT_THETA,
) -> FixtureSystem:
    ifs, base, iota = construction_system(alpha1, alpha2, theta)
    return FixtureSystem(
        name="thm2",
        linear=ifs.linear,
        base=base,
        iota=iota,
        ifs=ifs,
        params={"alpha1": alpha1, "alpha2": alpha2, "theta": theta},
    )


def cyclic_3x3_fixture() -> FixtureSystem:
    """Two scaled 3-cycles of the coordinate axes (opposite orientations)."""
    A1 = np.array(
        [
            [0.0, 0.0, 0.5],
            [2.0 / 3.0, 0.0, 0.0],
            [0.0, 0.5, 0.0],
        ]
    )
    A2 = np.array(
        [
            [0.0, 2.0 / 3.0, 0.0],
            [0.0, 0.0, 0.5],
            [0.5, 0.0, 0.0],
        ]
    )
    return FixtureSystem(name="eq1-3x3", linear=MatrixTuple((A1, A2)))


def wedge_block_basis() -> np.ndarray:
    """Orthogonal change of basis splitting the wedge square of the pair.

    Columns (in lexicographic wedge coordinates e1^e2, e1^e3, e1^e4,
    e2^e3, e2^e4, e3^e4) are

        e1^e2,  e3^e4,  (e1^e4 - e2^e3)/sqrt2,
        e1^e3,  e2^e4,  (e1^e4 + e2^e3)/sqrt2.

    Conjugating the wedge squares of the thm1 generators by this matrix
    makes both block-diagonal with two 3x3 blocks that swap between the
    generators.
    """
    r = 1.0 / math.sqrt(2.0)
    cols = np.array(
        [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, r, -r, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, r, r, 0, 0],
        ],
        dtype=float,
    ).T
    return cols


def build_fixture(name: str, **params) -> FixtureSystem:
    if name == "thm1":
        return kron_pair_fixture(**params)
    if name == "thm2":
        return four_map_fixture(**params)
    if name == "eq1-3x3":
        if params:
            raise ValueError("eq1-3x3 takes no parameters")
        return cyclic_3x3_fixture()
    raise ValueError(f"unknown fixture {name!r}; expected thm1, thm2 or eq1-3x3")


FIXTURE_NAMES = ("thm1", "thm2", "eq1-3x3")
