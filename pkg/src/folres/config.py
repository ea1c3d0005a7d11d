"""Driver options: defaults, an optional YAML file, then command-line overrides."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from sympy import Rational

from folres.exceptions import ConfigurationError
from folres.ideals import MembershipBackend
from folres.ideals.ideal import DEFAULT_MORA_BUDGET

DEFAULT_CONFIG_PATH = Path("folres.yaml")


class DriverOptions(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    membership: str = Field(default="local", description="global, local or jet:N")
    jet_order: int = Field(default=8, ge=1, description="Truncation order N for jet shifts and the jet oracle.")
    max_stages: int = Field(default=32, ge=1)
    max_branches: int = Field(default=256, ge=1, description="Maximum number of charts in one driver tree.")
    max_depth: int = Field(default=24, ge=1)
    mora_step_budget: int = Field(default=DEFAULT_MORA_BUDGET, ge=1)
    seed: int = 0
    fiber_samples: list[str] = Field(default_factory=lambda: ["1", "-1", "1/2"])
    verify_fibers: bool = True

    @field_validator("membership")
    @classmethod
    def _check_membership(cls, value: str) -> str:
        MembershipBackend.parse(value)
        return value.strip().lower()

    @field_validator("fiber_samples", mode="before")
    @classmethod
    def _check_samples(cls, value: Any) -> list[str]:
        if not isinstance(value, list | tuple) or not value:
            raise ValueError("fiber_samples must be a non-empty list of nonzero rationals")
        out = []
        for item in value:
            text = str(item).strip()
            try:
                r = Rational(text)
            except (TypeError, ValueError, SyntaxError) as exc:
                raise ValueError(f"fiber sample {text!r} is not a rational number") from exc
            if not r.is_rational or r == 0:
                raise ValueError(f"fiber sample {text!r} must be a nonzero rational")
            out.append(text)
        return out

    @property
    def backend(self) -> MembershipBackend:
        return MembershipBackend.parse(self.membership, step_budget=self.mora_step_budget)

    @property
    def gammas(self) -> tuple[Rational, ...]:
        return tuple(Rational(s) for s in self.fiber_samples)


def load_config_file(path: Path | None) -> dict[str, Any]:
    """YAML mapping from `path`; a missing file is an empty mapping."""
    path = path or DEFAULT_CONFIG_PATH
    if not path.exists():
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            payload = yaml.safe_load(handle) or {}
    except yaml.YAMLError as exc:
        raise ConfigurationError(
            f"Failed to parse config file {path}", code="config.parse_error", context={"config_path": str(path)}
        ) from exc
    if not isinstance(payload, dict):
        raise ConfigurationError(
            "config file must hold a mapping of option names to values", context={"config_path": str(path)}
        )
    return payload


def resolve_options(config_path: Path | None = None, overrides: dict[str, Any] | None = None) -> DriverOptions:
    """Defaults < config file < overrides; None-valued overrides are ignored."""
    merged = load_config_file(config_path)
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return DriverOptions.model_validate(merged)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigurationError(
            f"invalid option {field or '?'}: {first.get('msg', 'invalid value')}",
            context={"option": field},
        ) from exc
