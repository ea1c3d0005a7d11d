from folres._version import __version__
from folres.algebra import Frame, LocalElement, format_poly
from folres.blowup import Center, ChartTree, blowup_charts, principalize_monomial, transform_distribution, transform_ideal
from folres.config import DriverOptions
from folres.foliation import Derivation, Distribution, check_monomial_form, monomial_distribution
from folres.ideals import FGIdeal, MembershipBackend, ideal_equal, membership
from folres.invariants import check_theta_admissible, h_sequence, origin_invariant, tg_invariant
from folres.io import load_problem, parse_problem
from folres.resolve import resolve_local, step1_drop_type, step2_prepare, step3_drop_nu, verify_resolution

__all__ = [
    "Center",
    "ChartTree",
    "Derivation",
    "Distribution",
    "DriverOptions",
    "FGIdeal",
    "Frame",
    "LocalElement",
    "MembershipBackend",
    "__version__",
    "blowup_charts",
    "check_monomial_form",
    "check_theta_admissible",
    "format_poly",
    "h_sequence",
    "ideal_equal",
    "load_problem",
    "membership",
    "monomial_distribution",
    "origin_invariant",
    "parse_problem",
    "principalize_monomial",
    "resolve_local",
    "step1_drop_type",
    "step2_prepare",
    "step3_drop_nu",
    "tg_invariant",
    "transform_distribution",
    "transform_ideal",
    "verify_resolution",
]
