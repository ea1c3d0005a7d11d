from folres.blowup.chart import (
    Center,
    Chart,
    ChartMap,
    ChartNode,
    ChartTree,
    Edge,
    blowup_chart,
    blowup_charts,
    coordinate_chart,
    recenter,
)
from folres.blowup.combinatorial import choose_center, is_principal, principalize_monomial
from folres.blowup.fiber import FiberFrame, FiberPrediction, exponent_matrix, fiber_analysis, fiber_classes
from folres.blowup.transforms import transform_derivation, transform_distribution, transform_ideal

__all__ = [
    "Center",
    "Chart",
    "ChartMap",
    "ChartNode",
    "ChartTree",
    "Edge",
    "FiberFrame",
    "FiberPrediction",
    "blowup_chart",
    "blowup_charts",
    "choose_center",
    "coordinate_chart",
    "exponent_matrix",
    "fiber_analysis",
    "fiber_classes",
    "is_principal",
    "principalize_monomial",
    "recenter",
    "transform_derivation",
    "transform_distribution",
    "transform_ideal",
]
