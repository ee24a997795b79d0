"""Computable-group laboratory: Folner machinery, harem matchings and
paradoxical decompositions over integer-coded group oracles."""

from .budget import Budget, UNKNOWN
from .groups import (
    CE,
    COMPUTABLE,
    CEView,
    GroupOracle,
    MalformedSpecError,
    PreconditionError,
    ball,
    eq_semidecide,
    make_group,
    parse_element,
    parse_elements,
)

__all__ = [
    "Budget",
    "UNKNOWN",
    "CE",
    "COMPUTABLE",
    "CEView",
    "GroupOracle",
    "MalformedSpecError",
    "PreconditionError",
    "ball",
    "eq_semidecide",
    "make_group",
    "parse_element",
    "parse_elements",
]
