"""Constructive minimal asymptotic bases of order h.

Partition the exponent line into classes W_0..W_{h-1}, take A as the union
of the A(W_j), and represent every large n as an h-part sum with machine
checkable certificates: Case 1 (h > 2^t) splits n inside A(W_0); Case 2
(h = 2^t) represents every n > m_2 while avoiding the element 4.  A brute
force oracle cross-checks r_h counts and E_a windows on finite ranges.
"""

from .avoid4 import represent_avoiding_4, route
from .basis import classify_element, in_basis, is_in_A_W
from .certificate import Certificate, Part, build, dumps, is_valid, loads, verify
from .errors import DomainError
from .numeral import canonicalize, from_exponent_set, multiset_value, to_exponent_set
from .oracle import IntervalPartition, e_window, enumerate_A, r_h_table, theorem_a_spot_check
from .partition import (
    ArithmeticRule,
    ExplicitRule,
    Mode,
    PartitionConfig,
    classify,
    config_from_dict,
    config_to_dict,
    load_config,
    shift_into_w0,
    validate_config,
)
from .splitter import (
    SplitResult,
    apply_split,
    distribute,
    find_splittable,
    initial_shift,
    represent_case1,
    run_split,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticRule",
    "Certificate",
    "DomainError",
    "ExplicitRule",
    "IntervalPartition",
    "Mode",
    "Part",
    "PartitionConfig",
    "SplitResult",
    "apply_split",
    "build",
    "canonicalize",
    "classify",
    "classify_element",
    "config_from_dict",
    "config_to_dict",
    "distribute",
    "dumps",
    "e_window",
    "enumerate_A",
    "find_splittable",
    "from_exponent_set",
    "in_basis",
    "initial_shift",
    "is_in_A_W",
    "is_valid",
    "load_config",
    "loads",
    "multiset_value",
    "r_h_table",
    "represent_avoiding_4",
    "represent_case1",
    "route",
    "run_split",
    "shift_into_w0",
    "theorem_a_spot_check",
    "to_exponent_set",
    "validate_config",
    "verify",
]
