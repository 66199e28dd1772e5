"""Constructive solvers and verifiers for zero-sum and weighted zero-sum
selection problems over finite abelian groups."""

from .errors import (
    BudgetExceeded,
    InvalidArgument,
    InvalidElement,
    InvalidGroup,
    InvalidInstance,
    InvalidSelection,
    OracleTooLarge,
    TheoremViolation,
    UnsatisfiableStatement,
    ZsumError,
)
from .groups import AbelianGroup, Element, canonicalize, groups_of_order, groups_up_to_order, rho
from .davenport import (
    DavenportCache,
    DavenportRecord,
    davenport_exact,
    davenport_formula,
    davenport_get,
    zero_sum_free_check,
)
from .zerosum import (
    ZeroSumWitness,
    find_zero_sum_bounded,
    find_zero_sum_davenport,
    find_zero_sum_exact_length,
)
from .weighted import (
    Certificate,
    Instance,
    Selection,
    Shelling,
    extend_shellable,
    fallback_search,
    instance_digest,
    narrow_shelling,
    selection_value,
    shelling_trim,
    solve_corollary,
    solve_theorem1,
    solve_word1,
    verify_certificate,
)
from .conjecture import ScanConfig, ScanReport, conjecture_check_instance, conjecture_scan

__all__ = [
    "AbelianGroup",
    "BudgetExceeded",
    "Certificate",
    "DavenportCache",
    "DavenportRecord",
    "Element",
    "Instance",
    "InvalidArgument",
    "InvalidElement",
    "InvalidGroup",
    "InvalidInstance",
    "InvalidSelection",
    "OracleTooLarge",
    "ScanConfig",
    "ScanReport",
    "Selection",
    "Shelling",
    "TheoremViolation",
    "UnsatisfiableStatement",
    "ZeroSumWitness",
    "ZsumError",
    "canonicalize",
    "conjecture_check_instance",
    "conjecture_scan",
    "davenport_exact",
    "davenport_formula",
    "davenport_get",
    "extend_shellable",
    "fallback_search",
    "find_zero_sum_bounded",
    "find_zero_sum_davenport",
    "find_zero_sum_exact_length",
    "groups_of_order",
    "groups_up_to_order",
    "instance_digest",
    "narrow_shelling",
    "rho",
    "selection_value",
    "shelling_trim",
    "solve_corollary",
    "solve_theorem1",
    "solve_word1",
    "verify_certificate",
    "zero_sum_free_check",
]

__version__ = "0.1.0"
