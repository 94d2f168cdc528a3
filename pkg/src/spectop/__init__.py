"""Verification tools for spectral non-concentration on bounded-degree graphs.

The library measures how much adjacency spectrum can sit in a window
[(1 - theta) x, x] near the top, checks the finite-parameter upper bound on
that mass, and exercises the machinery the bound is built from: r-nets and
the eigenvalue drop their removal causes, local-to-global trace bounds,
eigenvalue-count interlacing, a label-driven local net construction, and
return-probability asymptotics on regular trees against the Kesten-McKay
reference measure.
"""

from .bounds import (
    BoundParams,
    BoundReport,
    BoundTerms,
    ExpanderSchedule,
    HypothesisViolatedError,
    InterlacingReport,
    RSSelection,
    expander_net_rem_params,
    finite_param_check,
    finite_param_rhs,
    interlacing_check,
    regular_exp_schedule,
    select_r_s,
    thm_checker,
)
from .families import (
    FAMILIES,
    FamilySpec,
    InadmissibleFamilyError,
    RetryBudgetError,
    generate,
    tree_ball_size,
)
from .graphs import (
    AsymmetricWeightError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphError,
    GraphFormatError,
    IsolatedVertexError,
    NonpositiveWeightError,
    SelfLoopError,
    SpotCheckResult,
    VertexRangeError,
    VertexSet,
    WeightedGraph,
    all_pairs_distances,
    ball,
    build_graph,
    delete_vertices,
    distances,
    expander_spot_check,
    induced_subgraph,
    is_connected,
    is_r_net,
    is_s_separated,
    normalized_weighting,
    read_graph,
    write_graph,
)
from .localsim import (
    CellAssignment,
    CellConnectivityError,
    LocalLabels,
    LocalNetRun,
    MtpReport,
    TheoryParams,
    adjacency_transport,
    cell_transport,
    elect_captains,
    local_net,
    local_separated,
    mtp_check,
    theory_params,
    voronoi_assign,
)
from .nets import (
    DropReport,
    NetResult,
    NotANetError,
    greedy_tree_net,
    high_radius_set,
    net_removal_drop_check,
    random_expander_net,
    separated_subset_greedy,
)
from .spectral import (
    LocalGlobalReport,
    SolverCapError,
    SpectralInterval,
    Spectrum,
    eigenvalues,
    interval_query_json,
    lambda1,
    lambda1_ball,
    lambda1_balls,
    local_global_check,
    m_count,
    mu,
    spectrum_moment,
    spectrum_to_csv,
    trace_power,
)
from .walks import (
    DecayFit,
    KestenRef,
    NonRegularGraphError,
    ReturnSeries,
    RoundtripReport,
    adjacency_moments,
    decay_fit,
    kesten_mass,
    moment_mass_upper,
    return_decay_roundtrip,
    return_probs_finite,
    series_to_csv,
    tree_return_probs,
    tree_return_probs_exact,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graphs
    "WeightedGraph",
    "VertexSet",
    "build_graph",
    "read_graph",
    "write_graph",
    "normalized_weighting",
    "distances",
    "all_pairs_distances",
    "induced_subgraph",
    "delete_vertices",
    "ball",
    "is_connected",
    "is_r_net",
    "is_s_separated",
    "expander_spot_check",
    "SpotCheckResult",
    "GraphError",
    "SelfLoopError",
    "DuplicateEdgeError",
    "AsymmetricWeightError",
    "NonpositiveWeightError",
    "VertexRangeError",
    "DisconnectedGraphError",
    "IsolatedVertexError",
    "GraphFormatError",
    # families
    "FAMILIES",
    "FamilySpec",
    "generate",
    "tree_ball_size",
    "InadmissibleFamilyError",
    "RetryBudgetError",
    # spectral
    "Spectrum",
    "SpectralInterval",
    "eigenvalues",
    "lambda1",
    "lambda1_ball",
    "lambda1_balls",
    "m_count",
    "mu",
    "trace_power",
    "spectrum_moment",
    "local_global_check",
    "LocalGlobalReport",
    "spectrum_to_csv",
    "interval_query_json",
    "SolverCapError",
    # nets
    "NetResult",
    "greedy_tree_net",
    "random_expander_net",
    "separated_subset_greedy",
    "high_radius_set",
    "net_removal_drop_check",
    "DropReport",
    "NotANetError",
    # localsim
    "LocalLabels",
    "local_separated",
    "elect_captains",
    "voronoi_assign",
    "CellAssignment",
    "local_net",
    "LocalNetRun",
    "theory_params",
    "TheoryParams",
    "mtp_check",
    "MtpReport",
    "cell_transport",
    "adjacency_transport",
    "CellConnectivityError",
    # bounds
    "BoundParams",
    "BoundTerms",
    "BoundReport",
    "finite_param_rhs",
    "finite_param_check",
    "select_r_s",
    "RSSelection",
    "thm_checker",
    "interlacing_check",
    "InterlacingReport",
    "expander_net_rem_params",
    "regular_exp_schedule",
    "ExpanderSchedule",
    "HypothesisViolatedError",
    # walks
    "ReturnSeries",
    "return_probs_finite",
    "adjacency_moments",
    "tree_return_probs",
    "tree_return_probs_exact",
    "KestenRef",
    "kesten_mass",
    "moment_mass_upper",
    "decay_fit",
    "DecayFit",
    "return_decay_roundtrip",
    "RoundtripReport",
    "series_to_csv",
    "NonRegularGraphError",
]
