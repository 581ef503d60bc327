"""Permutations of Z_n that destroy arithmetic progressions."""

from .core import Perm, PermError, make_perm, mod_inv, perm_inverse
from .verify import (Certificate, Pattern, check_almost, check_pattern, check_patterns,
                     count_survivors, survivor_stats)

__all__ = [
    "Perm", "PermError", "make_perm", "mod_inv", "perm_inverse",
    "Certificate", "Pattern", "check_almost", "check_pattern", "check_patterns",
    "count_survivors", "survivor_stats",
]
__version__ = "0.1.0"
