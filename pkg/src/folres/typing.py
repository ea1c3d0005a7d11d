from typing import NewType

VariableName = NewType("VariableName", str)
"""Name of a chart coordinate, e.g. 'x'. Renaming between frames is always explicit by name."""

ChartId = NewType("ChartId", str)
"""Path-shaped identifier of a chart node, e.g. 'root/bl(x,z)@x'."""

ErrorCode = NewType("ErrorCode", str)
"""Stable machine-readable error code. Messages remain human-readable prose."""
