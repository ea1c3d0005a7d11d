from folres.invariants.fitting import AdmissibilityVerdict, FittingData, check_theta_admissible, fitting_ideal
from folres.invariants.tangency import (
    DEFAULT_MAX_STAGES,
    HSequence,
    OriginInvariant,
    TgInvariant,
    h_sequence,
    origin_invariant,
    tg_invariant,
)

__all__ = [
    "DEFAULT_MAX_STAGES",
    "AdmissibilityVerdict",
    "FittingData",
    "HSequence",
    "OriginInvariant",
    "TgInvariant",
    "check_theta_admissible",
    "fitting_ideal",
    "h_sequence",
    "origin_invariant",
    "tg_invariant",
]
