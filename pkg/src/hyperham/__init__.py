"""Hamilton ell-cycles in uniform hypergraphs with large minimum supported co-degree."""
from .core import (
    BlowupSpec,
    CycleParams,
    Hypergraph,
    ToleranceConfig,
    build_blowup,
    classify_non_extremal,
    compute_t,
    find_sparse_set,
    max_strong_independent_set,
    read_hypergraph,
    supported_codegree,
    write_hypergraph,
)
from .errors import (
    DomainError,
    FormatError,
    HyperhamError,
    ParameterError,
    ResourceError,
    SearchExhausted,
    SelfCheckError,
    StageFailure,
)
from .walks import (
    assemble_cycle_from_segments,
    concat_supported_paths,
    verify_ell_cycle,
    verify_ell_path,
    verify_ell_walk,
    verify_supports_ell_path,
    verify_supports_extended_ell_path,
    verify_tight_walk,
)
from .constructions import (
    construct_kpartite_ell_cycle,
    gen_loose_3uniform,
    gen_strong_lower_bound,
    gen_weak_lower_bound,
)
from .fractional import solve_weighted_pfm, verify_certificate, verify_matching, weight_vector
from .cleaning import clean_dense, clean_relative_codeg, clean_relative_deg
from .absorption import (
    build_master_walk,
    find_sequence_absorber,
    find_vertex_absorber,
    join_tight_walk,
    join_with_congruence,
    verify_master_walk,
)
from .matchings import (
    BipartiteGraph,
    Digraph,
    directed_hamilton,
    kpartite_matching,
    random_matching_with_families,
)
from .oracle import OracleBudget, hamilton_ell_cycle, hamilton_ell_path_between
from .pipeline import decompose_extremal, run_extremal_pipeline, synthetic_near_extremal

__version__ = "0.1.0"
