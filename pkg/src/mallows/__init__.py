"""Two-sided Mallows permutations: samplers, exact laws, and verification.

The package implements the q-weighted random permutation of the integers
(finite, one-sided, and two-sided variants), closed-form evaluation of its
displacement and inversion-count laws, and a statistical verification
harness comparing samplers against formulas and against each other.
"""
from __future__ import annotations

from .dist import (
    DisplacementPmf,
    FddQuery,
    block_p2,
    conditional_l_given_r,
    displacement_pmf,
    fdd_probability,
    joint_rl_pmf,
)
from .errors import (
    DomainError,
    MallowsError,
    NotCertifiedError,
    NotInjectiveError,
    NotSelfContainedError,
    RejectSupportError,
    TooLargeError,
    UnknownSuiteError,
)
from .perm import (
    InversionCounts,
    OrderDiagnostic,
    PermWindow,
    RWindowReport,
    VERDICT_CONSISTENT,
    VERDICT_INVALID,
    VERDICT_SUSPECT,
    adjacent_swap_r,
    eliminate_left,
    eliminate_right,
    inversion_counts_window,
    inversions,
    invert_window,
    rebuild_sigma,
    reconstruct_ell,
    truncate,
    validate_r_window,
    window_balance,
)
from .qseries import (
    INFINITY,
    QParam,
    QPochhammerTable,
    q_binomial,
    q_factorial,
    q_number,
    q_pochhammer,
)
from .samplers import (
    InterlacingTriple,
    YoungDiagram,
    batch_finite_r,
    batch_interlacing_windows,
    batch_inversion_position0,
    q_shuffle_prefix,
    sample_finite_mallows,
    sample_truncated_geometric,
    sample_two_sided_interlacing,
    sample_two_sided_inversion,
    sample_young_euler,
    sign_word_from_lambda,
)
from .streams import GeomStream

__version__ = "0.1.0"

__all__ = [
    "DisplacementPmf",
    "DomainError",
    "FddQuery",
    "GeomStream",
    "INFINITY",
    "InterlacingTriple",
    "InversionCounts",
    "MallowsError",
    "NotCertifiedError",
    "NotInjectiveError",
    "NotSelfContainedError",
    "OrderDiagnostic",
    "PermWindow",
    "QParam",
    "QPochhammerTable",
    "RWindowReport",
    "RejectSupportError",
    "TooLargeError",
    "UnknownSuiteError",
    "VERDICT_CONSISTENT",
    "VERDICT_INVALID",
    "VERDICT_SUSPECT",
    "YoungDiagram",
    "adjacent_swap_r",
    "batch_finite_r",
    "batch_interlacing_windows",
    "batch_inversion_position0",
    "block_p2",
    "conditional_l_given_r",
    "displacement_pmf",
    "eliminate_left",
    "eliminate_right",
    "fdd_probability",
    "inversion_counts_window",
    "inversions",
    "invert_window",
    "joint_rl_pmf",
    "q_binomial",
    "q_factorial",
    "q_number",
    "q_pochhammer",
    "q_shuffle_prefix",
    "rebuild_sigma",
    "reconstruct_ell",
    "sample_finite_mallows",
    "sample_truncated_geometric",
    "sample_two_sided_interlacing",
    "sample_two_sided_inversion",
    "sample_young_euler",
    "sign_word_from_lambda",
    "truncate",
    "validate_r_window",
    "window_balance",
    "__version__",
]
