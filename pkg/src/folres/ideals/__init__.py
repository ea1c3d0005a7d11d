from folres.ideals.ideal import (
    BasisData,
    FGIdeal,
    exceptional_factorization,
    groebner,
    ideal_product,
    ideal_sum,
    local_standard_basis,
)
from folres.ideals.membership import (
    GLOBAL,
    LOCAL,
    Certificate,
    MembershipBackend,
    contains_one,
    cross_check,
    ideal_equal,
    is_contained,
    membership,
    membership_certificate,
    monomial_generators,
    principal_monomial,
)

__all__ = [
    "GLOBAL",
    "LOCAL",
    "BasisData",
    "Certificate",
    "FGIdeal",
    "MembershipBackend",
    "contains_one",
    "cross_check",
    "exceptional_factorization",
    "groebner",
    "ideal_equal",
    "ideal_product",
    "ideal_sum",
    "is_contained",
    "local_standard_basis",
    "membership",
    "membership_certificate",
    "monomial_generators",
    "principal_monomial",
]
