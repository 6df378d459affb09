"""Invertible low-divergence coding toolkit.

Builds fixed-length codebooks over a memoryless target distribution,
partitions them into per-message sets with exact inverse maps, drives
the member choice with finite-bit resolution codes, and accounts for
every bit of I-divergence in closed form.
"""

from .analysis import (
    DivergenceReport,
    IldEncoder,
    LlfUpperBound,
    Theorem2Result,
    assemble,
    decode,
    encode,
    fig4_rows,
    fig5_rows,
    full_divergence,
    llf_divergence_upper,
    lower_bound,
    selection_divergence,
    theorem2_experiment,
)
from .bounds import (
    BoundPair,
    EntropyDiffBounds,
    MidpointSums,
    OneSidedBound,
    RateRegionReport,
    TypicalSetBounds,
    binomial_coefficient_bounds,
    binomial_midpoint_identity,
    binomial_prefix_sum_bounds,
    entropy_diff_bounds,
    hoeffding_tail,
    multinomial_bounds,
    pinsker_bounds,
    rate_region_check,
    typical_set_bounds,
)
from .cli import cli_main
from .codebook import (
    Codebook,
    OrderGroup,
    build_explicit,
    build_full_support,
    build_prefix,
    build_type_class,
    build_weight_threshold,
    enumerate_typical,
    from_json as codebook_from_json,
    multiset_strings,
    type_sort_key,
)
from .dm import (
    DmClass,
    DmCode,
    DmDivergence,
    SweepResult,
    ThresholdEntry,
    ccdm,
    ccdm_divergence,
    dm_divergence,
    optimal_dm,
    optimal_dm_sweep,
    pdm_compose,
    quantize_type,
    threshold_stats,
    unique_prob_dm,
)
from .errors import (
    BracketOverflow,
    BudgetTooSmall,
    DimensionMismatch,
    DomainError,
    EmptySet,
    EmptyTypicalSet,
    FactorizationMismatch,
    IldError,
    NotInCodebook,
    RangeError,
    SizeLimit,
    SupportViolation,
)
from .info import (
    Pmf,
    SymbolString,
    TypeVector,
    cross_entropy,
    divergence,
    entropy,
    exp2_or_inf,
    is_typical,
    iter_types,
    l1_distance,
    mass_of,
    multinomial,
    string_self_information,
    type_is_typical,
    type_log2_prob,
    type_of,
    typical_types,
)
from .partition import (
    OneBitWorstCase,
    ParetoMove,
    Partition,
    decode as decode_rank,
    delta_bounds_check,
    llf_partition,
    llf_round_robin,
    mlf_partition,
    one_bit_worst_case,
    pareto_check,
    partition_to_json,
    set_members,
    set_prob_bounds,
)
from .resolution import (
    ResolutionCode,
    RcBound,
    RngRates,
    build_ideal,
    build_mtype,
    rates,
    rc_bound,
    rc_divergence,
    sample,
)

__version__ = "0.1.0"
