"""Unique-registrability analysis for patch-based networks.

Decide whether a network observed through overlapping patches admits a
unique global reconstruction (modulo one Euclidean transform), via body
graph rigidity and correspondence-graph connectivity, and validate
verdicts empirically with a synthetic registration solver.
"""

from .connectivity import (
    VACUOUS,
    Vacuous,
    is_k_connected,
    local_connectivity,
    quasi_connectivity,
    s_disjoint_path_count,
    vertex_connectivity,
)
from .generators import (
    gen_example1,
    gen_example2,
    gen_fig1,
    gen_fig2,
    gen_hgraph,
    gen_random_cover,
    gen_ring,
    synth_reg_instance,
)
from .graphs import Graph, complete_graph, cycle_graph, path_graph
from .harness import (
    ProbeReport,
    SolveReport,
    SolverConfig,
    align,
    probe_uniqueness,
    registration_residual,
    solve_registration,
)
from .model import (
    BodyGraph,
    CorrespondenceGraph,
    EuclideanTransform,
    Framework,
    Instance,
    Problem,
    ProblemKind,
    Solution,
    ValidationReport,
    build_body_graph,
    build_correspondence_graph,
    config_diameter,
    configs_congruent,
    dedupe_patches,
    frameworks_equivalent,
    validate_instance,
)
from .registrability import Method, Verdict, analyze, find_laterated_order
from .rigidity import (
    FieldConfig,
    HendricksonCheck,
    add_vertex_on_clique,
    cone,
    float_rigidity_rank,
    hendrickson_check,
    is_generically_globally_rigid,
    is_generically_locally_rigid,
    is_redundantly_rigid,
    rigidity_rank,
    sample_equilibrium_stress,
    sample_generic_config,
)

__version__ = "0.1.0"

__all__ = [
    "VACUOUS",
    "Vacuous",
    "is_k_connected",
    "local_connectivity",
    "quasi_connectivity",
    "s_disjoint_path_count",
    "vertex_connectivity",
    "gen_example1",
    "gen_example2",
    "gen_fig1",
    "gen_fig2",
    "gen_hgraph",
    "gen_random_cover",
    "gen_ring",
    "synth_reg_instance",
    "Graph",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "ProbeReport",
    "SolveReport",
    "SolverConfig",
    "align",
    "probe_uniqueness",
    "registration_residual",
    "solve_registration",
    "BodyGraph",
    "CorrespondenceGraph",
    "EuclideanTransform",
    "Framework",
    "Instance",
    "Problem",
    "ProblemKind",
    "Solution",
    "ValidationReport",
    "build_body_graph",
    "build_correspondence_graph",
    "config_diameter",
    "configs_congruent",
    "dedupe_patches",
    "frameworks_equivalent",
    "validate_instance",
    "Method",
    "Verdict",
    "analyze",
    "find_laterated_order",
    "FieldConfig",
    "HendricksonCheck",
    "add_vertex_on_clique",
    "cone",
    "float_rigidity_rank",
    "hendrickson_check",
    "is_generically_globally_rigid",
    "is_generically_locally_rigid",
    "is_redundantly_rigid",
    "rigidity_rank",
    "sample_equilibrium_stress",
    "sample_generic_config",
]
