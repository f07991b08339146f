"""Ramanujan graph construction and certification via shift k-lifts."""

from .graphs import (
    Graph,
    GraphFormatError,
    RegularityReport,
    biclique,
    complete_bipartite,
    cycle,
    graph_from_edgelist,
    graph_from_json,
    graph_hash,
    graph_to_edgelist,
    graph_to_json,
    load_graph,
    path,
    save_graph,
    star,
    two_coloring,
    validate,
)
from .lifts import (
    QuotientMatrix,
    ShiftAssignment,
    assignment_block,
    assignment_space_size,
    enumerate_assignments,
    expand_lift,
    quotient_block,
    quotient_matrix,
    root_power_table,
)
from .polynomials import (
    Polynomial,
    RootSet,
    char_poly,
    char_poly_batch,
    check_common_interlacing,
    coefficient_residual,
    companion_roots,
    count_matchings_brute_force,
    is_real_rooted,
    matching_polynomial,
    max_real_root,
    root_set,
)
from .search import (
    BranchReport,
    GreedyResult,
    PrefixNode,
    SearchBudget,
    SearchResult,
    TwoStepResult,
    auto_strategy,
    branch_interlacing_report,
    conditional_expected_poly,
    exhaustive_search,
    expected_charpoly_oracle,
    greedy_interlacing_search,
    passing_density,
    random_search,
    two_step_4lift,
)
from .spectral import (
    Certificate,
    RamanujanVerdict,
    Spectrum,
    certify_lift,
    hermitian_eigenvalues,
    new_eigenvalues,
    quotient_powers_for_certification,
    ramanujan_bound,
    ramanujan_verdict,
    verify_spectrum_union,
)

__version__ = "0.1.0"
