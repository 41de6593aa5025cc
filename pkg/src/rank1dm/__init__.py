"""Dulmage-Mendelsohn decomposition of partitioned matrices whose blocks
have rank at most one, over GF(p) or the exact rationals."""

from .field import GF, QQ, Field, FieldElement, FieldMismatchError, PrimeField, RationalField
from .linalg import (
    Matrix,
    Rank1Factor,
    SingularMatrixError,
    Vector,
    complete_to_basis,
    invert,
    kernel_basis,
    rank,
    rank1_factor,
    rref,
    triangularizing_transform,
)
from .matching import (
    Cover,
    IndependentMatchingState,
    VectorMatroid,
    build_auxiliary_digraph,
    cover_value,
    matroid_pi,
    matroid_sigma,
    max_independent_matching,
    min_cover,
)
from .partmat import (
    HyperplaneVertex,
    PartitionedMatrix,
    RankConditionViolated,
    StabilityGraph,
    build_stability_graph,
    check_rank1_condition,
)
from .decompose import (
    ChainPoset,
    DMResult,
    StableSubspace,
    VerificationReport,
    build_bases,
    dm_decompose,
    ideal_to_stable_subspace,
    maximal_chain,
    reachability_sets,
    scc_poset,
    verify,
)
from .oracle import (
    SubspaceCatalog,
    brute_force_max_stable,
    classic_dm_check,
    enumerate_subspaces,
    gaussian_binomial,
    is_stable,
)

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "Field",
    "FieldElement",
    "FieldMismatchError",
    "PrimeField",
    "RationalField",
    "Matrix",
    "Vector",
    "Rank1Factor",
    "SingularMatrixError",
    "rref",
    "rank",
    "kernel_basis",
    "invert",
    "rank1_factor",
    "complete_to_basis",
    "triangularizing_transform",
    "PartitionedMatrix",
    "HyperplaneVertex",
    "StabilityGraph",
    "RankConditionViolated",
    "check_rank1_condition",
    "build_stability_graph",
    "VectorMatroid",
    "IndependentMatchingState",
    "Cover",
    "build_auxiliary_digraph",
    "max_independent_matching",
    "min_cover",
    "cover_value",
    "matroid_pi",
    "matroid_sigma",
    "ChainPoset",
    "StableSubspace",
    "DMResult",
    "VerificationReport",
    "reachability_sets",
    "scc_poset",
    "ideal_to_stable_subspace",
    "maximal_chain",
    "build_bases",
    "dm_decompose",
    "verify",
    "SubspaceCatalog",
    "enumerate_subspaces",
    "gaussian_binomial",
    "is_stable",
    "brute_force_max_stable",
    "classic_dm_check",
]
