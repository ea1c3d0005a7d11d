from folres.foliation.derivation import CoordinateChange, Derivation, change_coordinates, lie_bracket
from folres.foliation.distribution import (
    Distribution,
    SNCDivisor,
    apply_ideal,
    check_tangent,
    generic_rank,
    is_invariant,
)
from folres.foliation.eigen import EigenBlock, eigen_blocks, invariant_generators
from folres.foliation.monomial import (
    MonomialForm,
    MonomialVerdict,
    check_monomial_form,
    first_integrals,
    monomial_distribution,
)

__all__ = [
    "CoordinateChange",
    "Derivation",
    "Distribution",
    "EigenBlock",
    "MonomialForm",
    "MonomialVerdict",
    "SNCDivisor",
    "apply_ideal",
    "change_coordinates",
    "check_monomial_form",
    "check_tangent",
    "eigen_blocks",
    "first_integrals",
    "generic_rank",
    "invariant_generators",
    "is_invariant",
    "lie_bracket",
    "monomial_distribution",
]
