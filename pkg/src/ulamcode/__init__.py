"""Permutation codes under the Ulam metric: distances, bounds, searches."""

from .ball import (
    BallTable,
    LisDistribution,
    ball_size,
    ball_table,
    clt_samples,
    lis_distribution_exact,
    lis_prob_mc,
    load_distribution,
    sample_lis_lengths,
    save_distribution,
    sphere_packing_bounds,
)
from .bounds import (
    BoundReport,
    CodeParams,
    asymptotic_lower_log,
    basic_report,
    entropy_lower_log,
    gv_lower,
    kim_rate_log,
    kim_tail_log,
    nat_entropy,
    rate_function,
    rate_function_acosh,
    simple_tail_bound,
    singleton_upper,
)
from .budget import SearchBudget
from .errors import CapacityError, DistanceViolation
from .ilp import (
    IlpModel,
    IlpSolution,
    build_model,
    export_lp,
    ip_upper_bound,
    solve_ilp,
    solve_lp_relaxation,
)
from .perm import (
    Perm,
    Translocation,
    all_translocations,
    apply_translocation,
    check_permutation,
    compose,
    format_permutation,
    identity,
    inverse,
    iter_symmetric_group,
    lcs_length,
    lis_length,
    parse_permutation,
    random_permutation,
    reversal,
    ulam_distance,
)
from .search import (
    Code,
    ColorClass,
    SearchResult,
    SingletonSearchResult,
    TableCell,
    class_partition,
    color_class,
    find_singleton_optimal,
    max_code_search,
    read_code_file,
    reproduce_tables,
    verify_code,
    write_code_file,
)

__version__ = "0.1.0"
