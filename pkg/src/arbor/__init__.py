"""Exact isoperimetry and amenability analysis for locally finite trees.

The package is organized around one loop: explore a tree through a neighbor
oracle, iterate the leaf-removal operator locally, and either produce finite
subsets witnessing small boundary ratios or certify a positive lower bound
from declared structure bounds. A statistics layer samples random trees and
checks the survival dichotomy numerically. All ratios are exact fractions;
all randomness is seeded.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .amenability import (
    AmenabilityReport,
    CheegerResult,
    ClassifyBudgets,
    ContractionResult,
    DeclaredBounds,
    FolnerCandidate,
    SandwichResult,
    cheeger_exact,
    classify,
    contract_branchless,
    folner_exhausting,
    folner_from_branchless_path,
    folner_from_inessential,
    folner_refine_connected,
    jsonable,
    min_degree3_bound_check,
    sandwich_check,
)
from .errors import (
    ArborError,
    BudgetExhaustedError,
    DeclaredBoundsRefutedError,
    DegenerateImageError,
    IncompleteKnowledgeError,
    InsufficientDepthError,
    InsufficientWitnessesError,
    InvalidVertexError,
    NoBranchStructureError,
    NotATreeError,
    SearchTooLargeError,
    UnionRootMismatchError,
    UnknownFixtureError,
    UnsupportedStructureError,
)
from .exploration import Ball, TreeAsOracle, explore_ball, explore_ball_adaptive
from .fixtures import list_fixtures, make_fixture
from .galton_watson import (
    DichotomyReport,
    GrowthReport,
    GWSample,
    GWSpec,
    MonteCarloEventResult,
    event_path_prob,
    event_sary_prob,
    extinction_probability,
    generation_growth_check,
    monte_carlo_event,
    parse_event,
    path_target_code,
    sample,
    sary_target_code,
    verify_dichotomy,
)
from .subsets import (
    InducedView,
    SubsetSelection,
    boundary_of,
    connected_subsets,
    is_connected_in,
    random_connected_subset,
)
from .trees import (
    NULL_TREE,
    NullTree,
    Tree,
    branches,
    canonical_form,
    centers,
    degree,
    edge_complement_is_connected,
    induced_subtree,
    leaves,
    parse_child_list,
    parse_tree,
    path_tree,
    relabel_tree,
    sary_tree,
    serialize_child_list,
    serialize_tree,
    star_tree,
    subdivide_tree,
)
from .trimming import (
    INCOMPLETE,
    HangingComponent,
    InessentialSubtree,
    TrimOrbit,
    TrimmedView,
    ball_code_sequence,
    detect_period,
    find_root,
    hanging_components,
    is_inessential,
    leaf_iff_inessential_check,
    lift_inessential,
    lift_subset_through_trims,
    make_inessential,
    max_inessential_at,
    removal_steps_in_ball,
    sorted_handles,
    trim,
    trim_depth,
    trim_orbit,
    trim_with_members,
    union_inessential,
)

__all__ = [
    "__version__",
    # trees
    "Tree",
    "NullTree",
    "NULL_TREE",
    "degree",
    "leaves",
    "branches",
    "centers",
    "induced_subtree",
    "edge_complement_is_connected",
    "canonical_form",
    "parse_tree",
    "serialize_tree",
    "parse_child_list",
    "serialize_child_list",
    "path_tree",
    "star_tree",
    "sary_tree",
    "subdivide_tree",
    "relabel_tree",
    # subsets
    "SubsetSelection",
    "InducedView",
    "boundary_of",
    "is_connected_in",
    "connected_subsets",
    "random_connected_subset",
    # exploration
    "Ball",
    "TreeAsOracle",
    "explore_ball",
    "explore_ball_adaptive",
    "list_fixtures",
    "make_fixture",
    # trimming
    "trim",
    "trim_with_members",
    "trim_orbit",
    "TrimOrbit",
    "trim_depth",
    "removal_steps_in_ball",
    "TrimmedView",
    "ball_code_sequence",
    "detect_period",
    "InessentialSubtree",
    "is_inessential",
    "make_inessential",
    "find_root",
    "union_inessential",
    "HangingComponent",
    "hanging_components",
    "max_inessential_at",
    "INCOMPLETE",
    "lift_inessential",
    "lift_subset_through_trims",
    "leaf_iff_inessential_check",
    "sorted_handles",
    # amenability
    "FolnerCandidate",
    "CheegerResult",
    "cheeger_exact",
    "folner_from_inessential",
    "folner_from_branchless_path",
    "folner_refine_connected",
    "folner_exhausting",
    "ContractionResult",
    "contract_branchless",
    "SandwichResult",
    "sandwich_check",
    "min_degree3_bound_check",
    "DeclaredBounds",
    "ClassifyBudgets",
    "AmenabilityReport",
    "classify",
    "jsonable",
    # random trees
    "GWSpec",
    "GWSample",
    "sample",
    "extinction_probability",
    "event_path_prob",
    "event_sary_prob",
    "path_target_code",
    "sary_target_code",
    "parse_event",
    "MonteCarloEventResult",
    "monte_carlo_event",
    "GrowthReport",
    "generation_growth_check",
    "DichotomyReport",
    "verify_dichotomy",
    # errors
    "ArborError",
    "InvalidVertexError",
    "NotATreeError",
    "UnknownFixtureError",
    "IncompleteKnowledgeError",
    "BudgetExhaustedError",
    "SearchTooLargeError",
    "UnionRootMismatchError",
    "DegenerateImageError",
    "NoBranchStructureError",
    "UnsupportedStructureError",
    "InsufficientWitnessesError",
    "InsufficientDepthError",
    "DeclaredBoundsRefutedError",
]
