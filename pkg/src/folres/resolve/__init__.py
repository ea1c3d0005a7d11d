from folres.resolve.driver import (
    DriverCounters,
    Expectation,
    FiberCheck,
    MeasureTransition,
    Resolver,
    ResolveResult,
    resolve_local,
    step1_drop_type,
    step2_prepare,
    step3_drop_nu,
)
from folres.resolve.forms import (
    DropIdeal,
    PreparedForm,
    WTForm,
    choose_direction,
    drop_ideal,
    prepared_form,
    regular_shear,
    tschirnhaus_shift,
    weierstrass_form,
)
from folres.resolve.verify import verify_resolution

__all__ = [
    "DriverCounters",
    "DropIdeal",
    "Expectation",
    "FiberCheck",
    "MeasureTransition",
    "PreparedForm",
    "ResolveResult",
    "Resolver",
    "WTForm",
    "choose_direction",
    "drop_ideal",
    "prepared_form",
    "regular_shear",
    "resolve_local",
    "step1_drop_type",
    "step2_prepare",
    "step3_drop_nu",
    "tschirnhaus_shift",
    "verify_resolution",
    "weierstrass_form",
]
