"""Pydantic request/response models for the HTTP service.

Function, measure, circuit, and approximation payloads reuse the library's
JSON dictionary schemas; the models here add the transport-level structure
(complex numbers as {re, im} pairs, explicit schedules, result envelopes).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

SCHEMA = "herglotz-kit/1"


class ComplexValue(BaseModel):
    re: float
    im: float = 0.0

    @classmethod
    def of(cls, z) -> "ComplexValue":
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class ScheduleModel(BaseModel):
    y_values: Optional[list[float]] = None
    eps_values: Optional[list[float]] = None
    extrapolation: Literal["none", "richardson"] = "richardson"

    def to_schedule(self):
        from ..boundary import LimitSchedule
        kwargs = {"extrapolation": self.extrapolation}
        if self.y_values:
            kwargs["y_values"] = tuple(self.y_values)
        if self.eps_values:
            kwargs["eps_values"] = tuple(self.eps_values)
        return LimitSchedule(**kwargs)


class EvalRequest(BaseModel):
    fn: dict
    z: list[ComplexValue]


class EvalResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    values: list[ComplexValue]

    model_config = {"populate_by_name": True}


class InvertRequest(BaseModel):
    fn: dict
    x1: float
    x2: float
    schedule: Optional[ScheduleModel] = None


class InvertResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    mass: float
    residual: float

    model_config = {"populate_by_name": True}


class PointMassRequest(BaseModel):
    fn: dict
    alpha: float
    schedule: Optional[ScheduleModel] = None


class PointMassResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    mass: float

    model_config = {"populate_by_name": True}


class ExpandRequest(BaseModel):
    fn: dict
    location: Literal["infinity", "zero"] = "infinity"
    order: int = 0


class ExpandResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    location: str
    order: int
    coefficients: list[float]
    residual_estimates: list[float]
    complete: bool

    model_config = {"populate_by_name": True}


class SumRuleRequest(BaseModel):
    fn: dict
    location: Literal["infinity", "zero", "symmetric"] = "zero"
    exponent: int
    schedule: Optional[ScheduleModel] = None


class SumRuleResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    exponent: int
    value: float
    lhs_estimate: float
    rhs_closed_form: Optional[float]
    converged: bool
    location: str
    schedule: dict

    model_config = {"populate_by_name": True}


class ResistanceBoundRequest(BaseModel):
    C: float
    circuit: Optional[dict] = None
    window: float = 200.0


class MetamaterialBoundRequest(BaseModel):
    eps_t: float
    eps_inf: float
    B: float


class AmplitudeBoundRequest(BaseModel):
    b1: float
    b1_0: float
    omega_length: float


class AmplitudeVerifyRequest(BaseModel):
    fn: dict
    h0_b1: float
    band: tuple[float, float]
    grid_density: int = 200


class BoundResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    bound_value: float
    formula_id: str
    inputs: dict = Field(default_factory=dict)
    achieved_value: Optional[float] = None
    slack: Optional[float] = None

    model_config = {"populate_by_name": True}


class ApproxRequest(BaseModel):
    problem: dict
    kgon: int = 64
    tol: float = 1e-8
    bound_report: bool = False


class ApproxResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    solution: dict
    bound_report: Optional[dict] = None

    model_config = {"populate_by_name": True}


class CircuitImpedanceRequest(BaseModel):
    circuit: dict
    s: list[ComplexValue]


class CircuitEnergyRequest(BaseModel):
    circuit: Optional[dict] = None
    impulse: Optional[dict] = None
    samples: list[float]
    dt: float
    times: list[float]


class CircuitEnergyResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    energies: list[float]

    model_config = {"populate_by_name": True}


class ErrorResponse(BaseModel):
    schema_: str = Field(default=SCHEMA, alias="schema")
    error: str
    detail: str

    model_config = {"populate_by_name": True}
