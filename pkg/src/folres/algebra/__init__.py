from folres.algebra.frame import Frame, Poly
from folres.algebra.jet import Jet, jet_inverse
from folres.algebra.local import LocalElement
from folres.algebra.poly import (
    derivative,
    divide_monomial,
    format_poly,
    monomial_factor,
    monomial_times_unit,
    order_at_origin,
    substitute,
    truncate,
)

__all__ = [
    "Frame",
    "Jet",
    "LocalElement",
    "Poly",
    "derivative",
    "divide_monomial",
    "format_poly",
    "jet_inverse",
    "monomial_factor",
    "monomial_times_unit",
    "order_at_origin",
    "substitute",
    "truncate",
]
