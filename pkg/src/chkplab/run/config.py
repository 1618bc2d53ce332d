"""Run configuration: one JSON document validated against a versioned schema.

Every section is a frozen pydantic model that forbids unknown keys. Validation failures surface
as a `ConfigError` naming the JSON path of the first offending value (e.g. `$.stepper.cfl`).
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Sequence, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    Strict,
    StrictInt,
    StrictStr,
    ValidationError,
    ValidationInfo,
    field_validator,
)

from chkplab.errors import ConfigError
from chkplab.integrate.stepper import StepperConfig
from chkplab.model.chkp import ModelParams
from chkplab.model.nonlinearity import Nonlinearity, NonlinearityPreset
from chkplab.run.initial_data import INITIAL_DATA_DEFAULTS, InitialDataPreset
from chkplab.serialize.io_utils import id_from_properties, load_json
from chkplab.spectral.grid import GridSpec

pylogger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# JSON integers are numbers; booleans and strings are not
Number = Annotated[float, Strict(), Field(allow_inf_nan=False)]
PositiveNumber = Annotated[float, Strict(), Field(gt=0, allow_inf_nan=False)]


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", validate_default=True)


class GridConfig(_Section):
    nx: StrictInt = Field(default=64, ge=8, description="Grid points along x")
    ny: StrictInt = Field(default=64, ge=8, description="Grid points along y")
    lx: PositiveNumber = Field(default=2 * math.pi, description="Period along x")
    ly: PositiveNumber = Field(default=2 * math.pi, description="Period along y")

    @field_validator("nx", "ny")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2 != 0:
            raise ValueError(f"must be even, got {v}")
        return v

    def build(self) -> GridSpec:
        return GridSpec(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly)


class ModelConfig(_Section):
    # ignored when `coefficients` is given
    preset: NonlinearityPreset = NonlinearityPreset.CLASSICAL
    coefficients: Optional[List[Number]] = Field(default=None, description="c_1, c_2, ... of g(u) = sum c_k u^k")
    gamma: PositiveNumber = 1.0
    kappa: Number = 1.0

    @field_validator("coefficients")
    @classmethod
    def validate_coefficients(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and not any(c != 0 for c in v):
            raise ValueError("needs a nonzero coefficient")
        return v

    def build(self) -> ModelParams:
        if self.coefficients is not None:
            nonlinearity = Nonlinearity.polynomial(self.coefficients)
        else:
            nonlinearity = Nonlinearity.from_preset(self.preset, kappa=self.kappa)
        return ModelParams(gamma=self.gamma, nonlinearity=nonlinearity)


class StepperSection(_Section):
    dt0: PositiveNumber = 0.01
    t_end: Number = Field(default=1.0, ge=0)
    cfl: Number = Field(default=0.5, gt=0, le=1)
    grad_stop: PositiveNumber = 1e4
    dt_floor: PositiveNumber = 1e-9
    snapshot_every: StrictInt = Field(default=10, ge=1)
    c_grad: PositiveNumber = 0.5

    @field_validator("dt_floor")
    @classmethod
    def validate_floor(cls, v: float, info: ValidationInfo) -> float:
        dt0 = info.data.get("dt0")
        if dt0 is not None and v >= dt0:
            raise ValueError(f"must be below dt0={dt0}, got {v}")
        return v

    def build(self, record_every: int = 1, xs_s: float = 1.0) -> StepperConfig:
        return StepperConfig(
            dt0=self.dt0,
            t_end=self.t_end,
            cfl=self.cfl,
            grad_stop=self.grad_stop,
            dt_floor=self.dt_floor,
            snapshot_every=self.snapshot_every,
            record_every=record_every,
            c_grad=self.c_grad,
            xs_s=xs_s,
        )


class InitialDataConfig(_Section):
    preset: InitialDataPreset = InitialDataPreset.SMOOTH_SMALL
    params: Dict[str, Number] = Field(default_factory=dict)

    @field_validator("params")
    @classmethod
    def validate_params(cls, v: Dict[str, float], info: ValidationInfo) -> Dict[str, float]:
        preset = info.data.get("preset")
        if preset is None:
            return v
        allowed = set(INITIAL_DATA_DEFAULTS[preset]) | {"x_center", "y_center"}
        unknown = sorted(set(v) - allowed)
        if unknown:
            raise ValueError(f"unknown parameter {unknown[0]!r} for {preset.value}, expected one of {sorted(allowed)}")
        return v


class AnalysisConfig(_Section):
    # characteristic seeds as [x0, y0] pairs
    seeds: List[List[Number]] = Field(default_factory=list)
    weight_sigma: Optional[PositiveNumber] = None
    weight_x0: Optional[Number] = None
    c_user: Number = Field(default=0.0, ge=0)
    liouville_tol: PositiveNumber = 1e-10
    xs_s: Number = Field(default=1.0, ge=0)
    p_interval: Optional[List[Number]] = None

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: List[List[float]]) -> List[List[float]]:
        for i, seed in enumerate(v):
            if len(seed) != 2:
                raise ValueError(f"seed {i} is not an [x0, y0] pair")
        return v

    @field_validator("p_interval")
    @classmethod
    def validate_interval(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and not (len(v) == 2 and v[0] < v[1]):
            raise ValueError("expected [c, d] with c < d")
        return v


class RunConfig(_Section):
    model_config = ConfigDict(title="chkplab run configuration")

    schema_version: StrictInt = SCHEMA_VERSION
    grid: GridConfig = Field(default_factory=GridConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    stepper: StepperSection = Field(default_factory=StepperSection)
    initial_data: InitialDataConfig = Field(default_factory=InitialDataConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    output_dir: Optional[StrictStr] = None
    diagnostics_every: StrictInt = Field(default=1, ge=1)

    @field_validator("schema_version")
    @classmethod
    def validate_version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported version {v}, expected {SCHEMA_VERSION}")
        return v

    @classmethod
    def from_dict(cls, data: Any) -> RunConfig:
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            error = exc.errors()[0]
            raise ConfigError(json_path(error["loc"]), error["msg"]) from exc

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> RunConfig:
        path = Path(path)
        if not path.is_file():
            raise ConfigError("$", f"configuration file {path} not found")
        try:
            data = load_json(path)
        except ValueError as exc:
            raise ConfigError("$", f"{path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    @property
    def config_hash(self) -> str:
        # output_dir only says where the run lives
        return id_from_properties(self.model_dump(mode="json", exclude={"output_dir"}))


def json_path(loc: Sequence[Union[str, int]]) -> str:
    """Render a pydantic error location as a JSON path, e.g. `("analysis", "seeds", 0)` -> `$.analysis.seeds[0]`."""
    path = "$"
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def schema() -> Dict[str, Any]:
    """JSON schema (draft 2020-12) of `RunConfig`."""
    document = RunConfig.model_json_schema()
    document["$schema"] = "https://json-schema.org/draft/2020-12/schema"
    document["version"] = SCHEMA_VERSION
    return document
