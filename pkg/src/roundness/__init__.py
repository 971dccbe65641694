"""Roundness and generalized roundness of finite metric spaces and of
balls in Cayley graphs of finitely generated groups."""

from .config import DEFAULT_CONFIG, RunConfig
from .engine import (
    INF,
    Anomaly,
    Cube,
    Quad,
    RoundnessResult,
    cube_check,
    enumerate_quads,
    quad_count,
    quad_critical_exponent,
    quad_deficit,
    roundness_estimate,
    roundness_predicate,
)
from .kernels import (
    DoubleSimplex,
    EmbeddingResult,
    GrSearchResult,
    KernelReport,
    embedding_csv,
    gr_upper_search,
    gr_via_kernel,
    is_negative_kernel,
    power_matrix,
    schoenberg_embed,
    simplex_critical_exponent,
    simplex_deficit,
)
from .metric import (
    FiniteMetricSpace,
    Violation,
    WeightedGraph,
    build_circle,
    build_euclidean,
    build_from_graph,
    build_tree_metric,
    load_space,
    restrict,
    validate,
)
from .groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    Free,
    FreeAbelian,
    FreeProductOfCyclics,
    GeneratingSet,
    GroupElement,
    element_order,
    format_element,
    format_spec,
    identity,
    inverse,
    multiply,
    parse_element,
    parse_generators,
    parse_group,
    power,
    symmetric_closure,
)
from .cayley import (
    CayleyBall,
    ConstructionResult,
    SpectrumReport,
    augment_round_one,
    cayley_ball,
    enumerate_symmetric_generating_sets,
    find_nonclosed_pair,
    is_generating,
    property_doublestar_check,
    property_star_check,
    scan_z2,
    spectrum_scan,
    torsion_construction,
)

__version__ = "0.1.0"
