"""Unequal-cost prefix codes, self-similar fractal trees and their graphs.

A finite prefix-free set of words over ``{0, ..., m-1}`` defines a finite
tree ``T``; grafting copies of ``T`` at its terminal nodes forever gives a
self-similar fractal tree.  This package computes the quantities attached to
``T`` (channel capacity, similarity dimension, the derived Bernoulli measure,
the pointed graph, its characteristic polynomial, Perron root and Parry
measure) and cross-checks the identities that tie them together.
"""
from .coding import (
    CapacityResult,
    DerivedMeasure,
    LengthFunction,
    TSequence,
    channel_capacity,
    decode,
    derived_measure,
    encode,
    measure_of_coded_word,
    similarity_dimension,
)
from .dimension import (
    ComplexityFunction,
    DimensionTrace,
    SandwichReport,
    builtin_backends,
    dimension_trace,
    ideal_mu_backend,
    lz78_backend,
    sandwich_check,
    table_backend,
    transfer_identity,
    transfer_identity_check,
)
from .errors import FractreeError
from .graph import (
    CharPoly,
    Edge,
    PointedGraph,
    charpoly_leverrier,
    check_irreducible,
    check_right_resolving,
    count_blocks,
    entropy_estimate,
    graph_from_tree,
    perron_eigenvalue,
    tree_from_graph,
    verify_charpoly_profile,
    verify_entropy_capacity,
    verify_thm4,
    verify_thm5,
)
from .parry import (
    ParryModel,
    build_parry,
    cycle_probability,
    measure_entropy,
    parry_cylinder,
    verify_parry_pushforward,
    verify_thm6,
)
from .tree import (
    FractalTreeSpec,
    TreeNodeSet,
    as_word,
    depth_profile,
    format_word,
    is_in_expansion,
    metric_distance,
    validate_spec,
)

__version__ = "0.1.0"
