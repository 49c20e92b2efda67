"""Finite permutation groups, word values and p-nilpotency criteria."""

from .perm import (
    CapExceeded,
    GroupError,
    Permutation,
    PermutationGroup,
    commutator,
    compose,
    conjugate,
    element_order,
    inverse,
    limits,
)
from .words import parse_word, word_values, verbal_subgroup
from .criteria import CheckReport, satisfies_P

__version__ = "0.1.0"
