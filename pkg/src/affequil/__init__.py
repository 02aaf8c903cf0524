"""Thermodynamic formalism for affine iterated function systems.

Singular-value potentials, subadditive pressure estimation, affinity and
Lyapunov dimension bracketing, level-n Gibbs weights, and the numeric
diagnostics (irreducibility witnesses, quasi-multiplicativity profiles,
separation certificates) needed to exhibit contracting Kronecker-pair
systems carrying two distinct ergodic equilibrium states.
"""

__version__ = "0.1.0"

from .equilibrium import (
    BernoulliMeasure,
    LevelDistribution,
    RatioDiagnostic,
    distinctness_diagnostic,
    gibbs_level_weights,
    lyapunov_dimension,
    spectral_ratio_witness,
    total_variation,
    weight_extension_spread,
)
from .errors import (
    AffequilError,
    BadRankError,
    BracketError,
    ConfigError,
    ConvergenceFailureError,
    EnumerationBudgetError,
    HypothesisViolationError,
    NonFiniteError,
    NotAWitnessError,
    NotContractingError,
    OutOfRangeSError,
    SingularMatrixError,
)
from .ifs import (
    AffineIFS,
    AttractorSample,
    ConstructionReport,
    SeparationCertificate,
    attractor_sample,
    construction_pipeline,
    construction_system,
    separation_certificate,
)
from .irreducibility import (
    FiniteUnionWitness,
    ObstructionReport,
    QMProfile,
    SubspaceWitness,
    conjugacy_obstruction,
    invariant_subspace_search,
    kronecker_intersection_check,
    quasi_multiplicativity_profile,
    search_invariant_subspaces,
)
from .linalg import (
    eigen_moduli,
    exterior_power,
    kronecker,
    phi_s,
    phi_s_via_exterior,
    singular_values,
)
from .potentials import (
    DualizedSystem,
    FactorPotential,
    MaxIdentityCheck,
    NormProductPotential,
    PhiSPotential,
    Potential,
    dualize,
    factor_pair,
    max_identity_check,
)
from .pressure import (
    DimensionResult,
    PressureEstimate,
    PressureEqualityReport,
    affinity_dimension,
    level_pressure,
    level_pressure_profile,
    lower_bound_periodic,
    pressure_equality_check,
    tree_sum,
)
from .words import (
    MatrixTuple,
    SymbolPermutation,
    Word,
    apply_permutation,
    enumerate_words,
    word_matrix,
)
