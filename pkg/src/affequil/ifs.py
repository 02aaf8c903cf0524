"""Affine iterated function systems: separation certificates, attractor
sampling, and the end-to-end two-equilibrium-state construction pipeline.

The separation certificate implements the ball-based sufficient
condition: if every image ball T_i(B(c, r)) stays inside B(c, r) and the
image balls are pairwise disjoint, the strong separation condition
holds.  A failed certificate does not imply its negation; the test is
conservative and the verdict says so.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolationError
from .equilibrium import (
    distinctness_diagnostic,
    gibbs_level_weights,
    spectral_ratio_witness,
    total_variation,
)
from .potentials import PhiSPotential, factor_pair
from .pressure import (
    DimensionResult,
    PressureEstimate,
    affinity_dimension,
    level_pressure,
    level_pressure_profile,
)
from .words import MatrixTuple, SymbolPermutation, Word


@dataclass(frozen=True)
class AffineIFS:
    """Contracting affine maps x -> A_i x + v_i on R^d."""

    linear: MatrixTuple
    translations: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.translations, dtype=float)
        if v.shape != (self.linear.n_maps, self.linear.dim):
            raise ValueError(
                f"translations must have shape (N, d) = "
                f"({self.linear.n_maps}, {self.linear.dim}), got {v.shape}"
            )
        if not np.isfinite(v).all():
            raise ValueError("translations must be finite")
        if self.linear.max_norm() >= 1.0:
            raise ValueError("IFS must be contracting: max ||A_i|| < 1")
        v.setflags(write=False)
        object.__setattr__(self, "translations", v)

    @property
    def n_maps(self) -> int:
        return self.linear.n_maps

    @property
    def dim(self) -> int:
        return self.linear.dim

    def apply(self, symbol: int, x: np.ndarray) -> np.ndarray:
        return self.linear[symbol] @ x + self.translations[symbol - 1]

    def attractor_radius_bound(self) -> float:
        """Radius of an origin-centred ball containing the attractor."""
        vmax = float(np.linalg.norm(self.translations, axis=1).max())
        return vmax / (1.0 - self.linear.max_norm())


@dataclass(frozen=True)
class SeparationCertificate:
    """Ball-based sufficient check for strong separation.

    On a pass, each image ball (center A_i c + v_i, radius ||A_i|| r) is
    contained in B(c, r) and the image balls are pairwise disjoint, which
    implies the strong separation condition.  On a fail, `violation`
    names the first constraint that broke; failure does not disprove
    separation.
    """

    center: np.ndarray
    radius: float
    image_centers: np.ndarray
    image_radii: np.ndarray
    passed: bool
    violation: str | None

    def to_json_dict(self) -> dict:
        return {
            "center": self.center.tolist(),
            "radius": self.radius,
            "image_centers": self.image_centers.tolist(),
            "image_radii": self.image_radii.tolist(),
            "passed": self.passed,
            "violation": self.violation,
            "note": "ball-based sufficient condition; fail does not disprove separation",
        }


def separation_certificate(
    S: AffineIFS, center, radius: float
) -> SeparationCertificate:
    """Certify strong separation on the ball B(center, radius)."""
    c = np.asarray(center, dtype=float)
    if c.shape != (S.dim,):
        raise ValueError(f"center must be a vector of dimension {S.dim}")
    if radius <= 0:
        raise ValueError("radius must be positive")
    norms = S.linear.norms()
    image_centers = np.array(
        [S.linear[i] @ c + S.translations[i - 1] for i in range(1, S.n_maps + 1)]
    )
    image_radii = norms * radius

    violation = None
    for i in range(S.n_maps):
        reach = float(np.linalg.norm(image_centers[i] - c)) + image_radii[i]
        if reach > radius:
            violation = (
                f"containment: image ball {i + 1} reaches {reach:.6g} > radius {radius:.6g}"
            )
            break
    if violation is None:
        for i in range(S.n_maps):
            for j in range(i + 1, S.n_maps):
                gap = float(np.linalg.norm(image_centers[i] - image_centers[j]))
                if not gap > image_radii[i] + image_radii[j]:
                    violation = (
                        f"disjointness: image balls {i + 1},{j + 1} at distance "
                        f"{gap:.6g} <= radii sum {image_radii[i] + image_radii[j]:.6g}"
                    )
                    break
            if violation is not None:
                break
    return SeparationCertificate(
        center=c,
        radius=float(radius),
        image_centers=image_centers,
        image_radii=image_radii,
        passed=violation is None,
        violation=violation,
    )


@dataclass(frozen=True)
class AttractorSample:
    """Random coding-map points truncated at a fixed depth.

    Each point is T_{x_1} ... T_{x_depth}(0) for an independently drawn
    uniform word; the distance to the untruncated limit point is at most
    `truncation_bound`.
    """

    points: np.ndarray
    seed: int
    depth: int
    truncation_bound: float

    def to_csv(self, path) -> None:
        np.savetxt(path, self.points, delimiter=",")

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "depth": self.depth,
            "truncation_bound": self.truncation_bound,
            "points": self.points.tolist(),
        }


def attractor_sample(
    S: AffineIFS, depth: int, count: int, seed: int
) -> AttractorSample:
    """Sample `count` attractor points at the given truncation depth.

    Per-point generators are derived from (seed, point index), so runs
    are reproducible and points are independent of each other's order.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if count < 1:
        raise ValueError("count must be at least 1")
    points = np.empty((count, S.dim))
    for idx in range(count):
        rng = np.random.default_rng([seed, idx])
        word = rng.integers(1, S.n_maps + 1, size=depth)
        x = np.zeros(S.dim)
        for a in word[::-1]:
            x = S.apply(int(a), x)
        points[idx] = x
    bound = S.linear.max_norm() ** depth * S.attractor_radius_bound()
    return AttractorSample(
        points=points, seed=seed, depth=depth, truncation_bound=bound
    )


# ---------------------------------------------------------------------------
# End-to-end construction: four contracting Kronecker maps with ball-separated
# translations and two distinct factor equilibrium states.

RADIUS_CRITICAL = 1.0 + math.sqrt(1.5)

SEPARATION_TRANSLATIONS = np.array(
    [
        [1.0, 0.0, 1.0 / math.sqrt(2.0), 0.0],
        [-1.0, 0.0, 1.0 / math.sqrt(2.0), 0.0],
        [0.0, 1.0, -1.0 / math.sqrt(2.0), 0.0],
        [0.0, -1.0, -1.0 / math.sqrt(2.0), 0.0],
    ]
)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def check_construction_hypotheses(alpha1: float, alpha2: float, theta: float) -> None:
    """Validate the parameter inequalities of the four-map construction."""
    limit = 1.0 / RADIUS_CRITICAL
    if not 0.0 < alpha2 < alpha1:
        raise HypothesisViolationError(
            f"need 0 < alpha2 < alpha1, got alpha1={alpha1}, alpha2={alpha2}"
        )
    if not alpha1 < limit:
        raise HypothesisViolationError(
            f"need alpha1 < 1/(1+sqrt(3/2)) = {limit:.6f}, got alpha1={alpha1}"
        )
    if not alpha1 * alpha2 > 1.0 / 16.0:
        raise HypothesisViolationError(
            f"need alpha1*alpha2 > 1/16, got {alpha1 * alpha2:.6f}"
        )
    if abs(math.sin(2.0 * theta)) < 1e-9:
        raise HypothesisViolationError(
            f"theta={theta} is (numerically) a multiple of pi/2"
        )


def construction_system(
    alpha1: float, alpha2: float, theta: float
) -> tuple[AffineIFS, MatrixTuple, SymbolPermutation]:
    """Four-map IFS (A1, A1, A2, A2) with the ball-separated translations.

    A1 = diag(alpha1, alpha2) (x) R(theta) and A2 = R(theta) (x)
    diag(alpha1, alpha2); the returned base tuple (B1, B1, B2, B2) with
    the pairing permutation (1 3)(2 4) reproduces the linear parts as
    base_i (x) base_{iota(i)}.
    """
    check_construction_hypotheses(alpha1, alpha2, theta)
    B1 = np.diag([alpha1, alpha2])
    B2 = rotation(theta)
    base = MatrixTuple((B1, B1, B2, B2))
    iota = SymbolPermutation((3, 4, 1, 2))
    linear = base.kron_pair(iota)
    ifs = AffineIFS(linear=linear, translations=SEPARATION_TRANSLATIONS)
    return ifs, base, iota


@dataclass(frozen=True)
class ConstructionReport:
    """All pipeline checks for the four-map construction in one record."""

    alpha1: float
    alpha2: float
    theta: float
    level: int
    tol: float
    pressure_s1: PressureEstimate
    pressure_s1_bound: float
    pressure_s1_ok: bool
    pressure_s2_profile: tuple[tuple[int, float], ...]
    pressure_s2_bound: float
    pressure_s2_ok: bool
    dimension: DimensionResult
    dimension_ok: bool
    certificate: SeparationCertificate
    witness: Word | None
    ratio_asymptote: float | None
    ratio_final: float | None
    distinctness_ok: bool
    tv_table: tuple[tuple[int, float], ...]
    tv_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.pressure_s1_ok
            and self.pressure_s2_ok
            and self.dimension_ok
            and self.certificate.passed
            and self.distinctness_ok
            and self.tv_ok
        )

    def to_json_dict(self) -> dict:
        return {
            "parameters": {
                "alpha1": self.alpha1,
                "alpha2": self.alpha2,
                "theta": self.theta,
                "level": self.level,
                "tol": self.tol,
            },
            "pressure_s1": {
                "value": self.pressure_s1.value,
                "upper": self.pressure_s1.upper,
                "lower": self.pressure_s1.lower,
                "closed_form_lower_bound": self.pressure_s1_bound,
                "ok": self.pressure_s1_ok,
            },
            "pressure_s2": {
                "profile": [[m, v] for m, v in self.pressure_s2_profile],
                "closed_form_upper_bound": self.pressure_s2_bound,
                "ok": self.pressure_s2_ok,
            },
            "dimension": {
                "lo": self.dimension.lo,
                "hi": self.dimension.hi,
                "level": self.dimension.level,
                "iterations": self.dimension.iterations,
                "in_(1,2)": self.dimension_ok,
                "note": "level-n bracket; over-estimates the limit dimension "
                "by the unreported finite-level gap",
            },
            "separation": self.certificate.to_json_dict(),
            "distinctness": {
                "witness": list(self.witness) if self.witness else None,
                "ratio_asymptote": self.ratio_asymptote,
                "ratio_final": self.ratio_final,
                "ok": self.distinctness_ok,
                "note": "finite-level evidence for two distinct ergodic "
                "equilibrium states; mutual singularity is a limit statement",
            },
            "total_variation": {
                "table": [[m, v] for m, v in self.tv_table],
                "nondecreasing": self.tv_ok,
            },
            "hausdorff_note": "equality of Hausdorff and Lyapunov dimension "
            "for the projected measures holds for almost every translation "
            "tuple; it is not certified for this specific one",
            "all_ok": self.all_ok,
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)


def construction_pipeline(
    alpha1: float,
    alpha2: float,
    theta: float,
    level: int,
    tol: float = 1e-3,
    budget: int | None = None,
) -> ConstructionReport:
    """Run every check of the four-map construction at the given level.

    Items: pressure sign bounds at s = 1 and s = 2, the affinity-dimension
    bracket inside (1, 2), the ball separation certificate, the
    eigenvalue-ratio witness with its distinctness diagnostic, and the
    total-variation growth of the two factor level distributions.
    """
    ifs, base, iota = construction_system(alpha1, alpha2, theta)
    tuple_ = ifs.linear

    p1 = level_pressure(PhiSPotential(tuple_, 1.0), level, budget)
    bound1 = 0.5 * math.log(16.0 * alpha1 * alpha2)
    p1_ok = p1.value >= bound1 > 0.0

    profile2 = level_pressure_profile(PhiSPotential(tuple_, 2.0), level, budget)
    bound2 = 2.0 * math.log(2.0 * alpha1)
    p2_ok = bound2 < 0.0 and all(v <= bound2 + 1e-9 for _, v in profile2)

    dim = affinity_dimension(tuple_, level, tol, budget)
    dim_ok = 1.0 < dim.lo and dim.hi < 2.0

    cert = separation_certificate(ifs, np.zeros(4), RADIUS_CRITICAL)

    witness = spectral_ratio_witness(base, iota, depth=3)
    s_mid = dim.midpoint
    asymptote = final = None
    distinct_ok = False
    if witness is not None and 1.0 < s_mid <= 2.0:
        diag = distinctness_diagnostic(base, iota, s_mid, witness, n_max=24)
        asymptote = diag.asymptote
        final = diag.values[-1]
        distinct_ok = (
            asymptote != 0.0
            and abs(final - asymptote) <= 0.1 * abs(asymptote)
        )

    f1, f2 = factor_pair(base, iota, s_mid if 1.0 < s_mid <= 2.0 else 1.5)
    tv_levels = [m for m in range(2, min(level, 10) + 1, 2)]
    tv_table = []
    for m in tv_levels:
        tv = total_variation(
            gibbs_level_weights(f1, m, budget), gibbs_level_weights(f2, m, budget)
        )
        tv_table.append((m, tv))
    tv_ok = all(
        tv_table[i + 1][1] >= tv_table[i][1] - 1e-12 for i in range(len(tv_table) - 1)
    )

    return ConstructionReport(
        alpha1=alpha1,
        alpha2=alpha2,
        theta=theta,
        level=level,
        tol=tol,
        pressure_s1=p1,
        pressure_s1_bound=bound1,
        pressure_s1_ok=p1_ok,
        pressure_s2_profile=tuple(profile2),
        pressure_s2_bound=bound2,
        pressure_s2_ok=p2_ok,
        dimension=dim,
        dimension_ok=dim_ok,
        certificate=cert,
        witness=witness,
        ratio_asymptote=asymptote,
        ratio_final=final,
        distinctness_ok=distinct_ok,
        tv_table=tuple(tv_table),
        tv_ok=tv_ok,
    )
