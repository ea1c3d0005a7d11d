"""
Machine-readable report of one command run.

Polynomials and derivations are stored in the problem-file grammar, so a stored report is parsed back
with the same code that reads problems. No timestamps: a fixed problem and option set gives a fixed
document apart from the timing statistics.
"""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from folres._version import __version__
from folres.models.verification import VerificationReport

SCHEMA_VERSION = "1"

Command = Literal["invariants", "admissible", "blowup", "resolve", "verify"]


class ProblemSummary(BaseModel):
    """The input quadruple (coordinates, divisor, distribution, ideal) as text."""

    variables: str = Field(..., description="Coordinates in order, exceptional ones marked with '!'.")
    theta: list[str] = Field(default_factory=list)
    ideal: list[str] = Field(default_factory=list)
    center: list[str] | None = None
    source: str | None = None


class AdmissibilityRecord(BaseModel):
    center: list[str]
    admissible: bool
    k0: int | None = None
    components: list[str] = Field(default_factory=list, description="unit, contained or neither for k = 1, 2, ...")
    witness_k: int | None = None
    witness: list[str] = Field(default_factory=list, description="Reduced basis of Gamma_k + I_C at the failing k.")


class PreparedRecord(BaseModel):
    v: str
    nu: int
    generators: list[str] = Field(default_factory=list, description="Generators in Weierstrass-Tschirnhaus shape.")
    exponents: dict[str, list[int]] = Field(default_factory=dict, description="'i,j' -> exponent vector of a_ij.")
    units: dict[str, str] = Field(default_factory=dict)


class FiberCheckRecord(BaseModel):
    vanishing: list[str]
    gamma: dict[str, str]
    subcase: str
    bound: int
    observed: int
    ok: bool


class NodeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    parent: str | None = None
    variables: str
    theta: list[str] = Field(default_factory=list)
    ideal: list[str] = Field(default_factory=list)
    root_map: dict[str, str] = Field(default_factory=dict)
    local_only: bool = False
    invariant: tuple[int, int] | None = Field(default=None, description="(nu, type) at the chart origin.")
    monomial_verdict: str | None = None
    step: str = ""
    leaf: bool = False
    principal_monomial: list[int] | None = None
    supported_in_divisor: bool | None = None
    prepared: PreparedRecord | None = None
    fiber_checks: list[FiberCheckRecord] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)


class EdgeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["blowup", "coordinates", "restrict"]
    parent: str
    child: str
    images: dict[str, str] = Field(..., description="Parent coordinates in terms of the child's.")
    inverse: dict[str, str] | None = None
    center: list[str] | None = None
    chart_variable: str | None = None
    point: dict[str, str] = Field(default_factory=dict)
    label: str = ""
    admissibility: AdmissibilityRecord | None = None


class StageRecord(BaseModel):
    index: int
    generators: list[str]


class InvariantsRecord(BaseModel):
    """`nu`, `type` and the stages belong to the residual ideal; `ideal_nu`, `ideal_type` to the input ideal itself."""

    nu: int = Field(description="nu of the residual after the tangent monomial is factored out.")
    type: int = Field(description="Type of the residual.")
    ideal_nu: int = Field(description="nu of the input ideal, before factoring.")
    ideal_type: int = Field(description="Type of the input ideal, before factoring.")
    monomial: list[int] = Field(default_factory=list, description="Exponents of the tangent monomial factored out.")
    residual: list[str] = Field(default_factory=list)
    stages: list[StageRecord] = Field(default_factory=list)
    stabilized_at: int
    unit_at: int | None = None
    closure: list[str] = Field(default_factory=list)
    monomial_verdict: str | None = None


class Report(BaseModel):
    schema_version: str = SCHEMA_VERSION
    folres_version: str = Field(default_factory=lambda: __version__)
    command: Command
    problem: ProblemSummary
    options: dict[str, Any] = Field(default_factory=dict)

    root: str | None = None
    nodes: list[NodeRecord] = Field(default_factory=list)
    edges: list[EdgeRecord] = Field(default_factory=list)

    invariants: InvariantsRecord | None = None
    admissibility: AdmissibilityRecord | None = None
    counters: dict[str, Any] = Field(default_factory=dict)
    statistics: dict[str, Any] = Field(default_factory=dict)
    verification: VerificationReport | None = None

    def node(self, chart_id: str) -> NodeRecord:
        for n in self.nodes:
            if n.id == chart_id:
                return n
        raise KeyError(chart_id)

    def leaves(self) -> list[NodeRecord]:
        parents = {e.parent for e in self.edges}
        return [n for n in self.nodes if n.id not in parents]
