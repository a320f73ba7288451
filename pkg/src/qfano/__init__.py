"""Exact orbifold Riemann-Roch calculus and basket searches for terminal Q-Fano threefolds."""

from .arith import Rational, is_nonneg_int, mod_inverse, parse_rational, smallest_residue
from .baskets import Basket, OrbifoldPoint, format_r_multiset, parse_r_multiset
from .fano import (
    MIN_RATIO,
    ClassSummary,
    CompatResult,
    ExclusionFormatError,
    ExclusionOutcome,
    ExclusionRule,
    FanoCandidate,
    IncompatibleIndexError,
    SearchConfig,
    SmallCandidate,
    apply_exclusions,
    candidate_classes,
    chi_ta,
    compat_check,
    enumerate_paper_windows,
    enumerate_small_c2c1,
    enumerate_windowed,
    load_exclusions,
    local_index_ta,
    paper_window_config,
    possible_q,
    primitive_volume,
)
from .hn import (
    ConeData,
    HNType,
    KmBound,
    SlopeCaps,
    cone_data,
    destabilizing_pairs,
    hn_types,
    km_bound,
    langer_bound,
    slope_caps,
    table2,
)
from .riemann_roch import (
    LocalDatum,
    chi_neg_nk,
    chi_weil,
    h0_neg_k,
    hilbert_coeffs,
    l_value,
    local_term,
    local_term_raw,
    periodic_sum,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
