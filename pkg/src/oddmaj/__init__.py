"""Odd and even descent statistics on the symmetric, hyperoctahedral and even hyperoctahedral groups."""

from .perms import (
    Perm, SignedPerm, ParseError, parse_element, descent_set_A, descent_set_B,
    descent_set_D, neg_set, length_A, length_B, length_D, star,
)
from .stats import StatName, eval_stat, all_stats
from .poly import MultiPoly, q_int, q_factorial, q_binomial, poly_div_exact
from .enumeration import GroupSpec, enumerate_group, Overpartition, overpartitions
from .genfun import Character, StatBinding, twisted_genfun, descent_set_genfun, closed_form
from .identities import REGISTRY, verify, verify_id, verify_all

__version__ = "0.1.0"
