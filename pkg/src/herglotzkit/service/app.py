"""FastAPI service exposing the toolkit: evaluation, measure recovery,
asymptotic expansions, sum rules, physical bounds, passive approximation,
and circuit checks.

Library preconditions map to HTTP 400, convergence failures to HTTP 409.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import asymptotics, boundary, bounds, circuits, passive_approx
from ..errors import ConvergenceError, HerglotzKitError
from ..herglotz import fn_from_dict
from ..measures import MeasureSpec
from .models import (SCHEMA, AmplitudeBoundRequest, AmplitudeVerifyRequest,
                     ApproxRequest,
                     ApproxResponse, BoundResponse, CircuitEnergyRequest,
                     CircuitEnergyResponse, CircuitImpedanceRequest,
                     ComplexValue, EvalRequest, EvalResponse, ExpandRequest,
                     ExpandResponse, InvertRequest, InvertResponse,
                     MetamaterialBoundRequest, PointMassRequest,
                     PointMassResponse, ResistanceBoundRequest,
                     SumRuleRequest, SumRuleResponse)


def create_app() -> FastAPI:
    app = FastAPI(title="herglotz-kit", version="1.0")

    @app.exception_handler(HerglotzKitError)
    async def _domain_error(request: Request, exc: HerglotzKitError):
        status = 409 if isinstance(exc, ConvergenceError) else 400
        return JSONResponse(status_code=status,
                            content={"schema": SCHEMA,
                                     "error": type(exc).__name__,
                                     "detail": str(exc)})

    @app.get("/health")
    def health():
        return {"schema": SCHEMA, "status": "ok"}

    @app.post("/eval", response_model=EvalResponse, response_model_by_alias=True)
    def eval_fn(req: EvalRequest):
        f = fn_from_dict(req.fn)
        zs = np.array([z.to_complex() for z in req.z])
        vals = np.atleast_1d(f(zs))
        return EvalResponse(values=[ComplexValue.of(v) for v in vals])

    @app.post("/invert", response_model=InvertResponse, response_model_by_alias=True)
    def invert(req: InvertRequest):
        f = fn_from_dict(req.fn)
        sched = req.schedule.to_schedule() if req.schedule else None
        mass, residual, _ = boundary.stieltjes_invert(f, req.x1, req.x2, sched,
                                                      full_output=True)
        return InvertResponse(mass=mass, residual=residual)

    @app.post("/pointmass", response_model=PointMassResponse,
              response_model_by_alias=True)
    def pointmass(req: PointMassRequest):
        f = fn_from_dict(req.fn)
        sched = req.schedule.to_schedule() if req.schedule else None
        return PointMassResponse(mass=boundary.point_mass_at(f, req.alpha, sched))

    @app.post("/expand", response_model=ExpandResponse, response_model_by_alias=True)
    def expand(req: ExpandRequest):
        f = fn_from_dict(req.fn)
        if req.location == "infinity":
            e = asymptotics.expand_at_infinity(f, req.order)
        else:
            e = asymptotics.expand_at_zero(f, req.order)
        return ExpandResponse(location=e.location, order=e.order,
                              coefficients=[float(c) for c in e.coefficients],
                              residual_estimates=[float(r) for r in e.residual_estimates],
                              complete=e.complete)

    @app.post("/sumrule", response_model=SumRuleResponse, response_model_by_alias=True)
    def sumrule(req: SumRuleRequest):
        f = fn_from_dict(req.fn)
        sched = req.schedule.to_schedule() if req.schedule else None
        if req.location == "infinity":
            result = asymptotics.sum_rule_at_infinity(f, req.exponent, sched)
        elif req.location == "zero":
            result = asymptotics.sum_rule_at_zero(f, req.exponent, sched)
        else:
            result = asymptotics.symmetric_sum_rule(f, req.exponent, sched)
        return SumRuleResponse(**result.to_dict())

    @app.post("/bound/resistance", response_model=BoundResponse,
              response_model_by_alias=True)
    def bound_resistance(req: ResistanceBoundRequest):
        value = bounds.resistance_integral_bound(req.C)
        achieved = None
        if req.circuit is not None:
            c = circuits.Circuit.from_dict(req.circuit)
            # resistance_integral_numeric returns (2/pi) * integral; rescale
            # to the integral itself for comparison with pi/(2C)
            achieved = bounds.resistance_integral_numeric(
                circuits.frequency_resistance(c), window=req.window) * np.pi / 2.0
        slack = None if achieved is None else achieved - value
        return BoundResponse(bound_value=value, formula_id="resistance-integral",
                             inputs={"C": req.C}, achieved_value=achieved,
                             slack=slack)

    @app.post("/bound/metamaterial", response_model=BoundResponse,
              response_model_by_alias=True)
    def bound_metamaterial(req: MetamaterialBoundRequest):
        value = bounds.metamaterial_bound(req.eps_t, req.eps_inf, req.B)
        return BoundResponse(bound_value=value, formula_id="metamaterial-dispersion",
                             inputs={"eps_t": req.eps_t, "eps_inf": req.eps_inf,
                                     "B": req.B})

    @app.post("/bound/amplitude", response_model=BoundResponse,
              response_model_by_alias=True)
    def bound_amplitude(req: AmplitudeBoundRequest):
        value = bounds.amplitude_lower_bound(req.b1, req.b1_0, req.omega_length)
        return BoundResponse(bound_value=value, formula_id="amplitude-sup",
                             inputs={"b1": req.b1, "b1_0": req.b1_0,
                                     "omega_length": req.omega_length})

    @app.post("/bound/amplitude/verify", response_model=BoundResponse,
              response_model_by_alias=True)
    def bound_amplitude_verify(req: AmplitudeVerifyRequest):
        f = fn_from_dict(req.fn)
        report = bounds.verify_amplitude_bound(f, req.h0_b1, tuple(req.band),
                                               grid_density=req.grid_density)
        return BoundResponse(**report.to_dict())

    @app.post("/approx", response_model=ApproxResponse, response_model_by_alias=True)
    def approx(req: ApproxRequest):
        problem = passive_approx.ApproxProblem.from_dict(req.problem)
        solution = passive_approx.solve(problem, kgon=req.kgon, tol=req.tol)
        report = None
        if req.bound_report:
            report = passive_approx.bound_gap_report(solution, problem).to_dict()
        return ApproxResponse(solution=solution.to_dict(), bound_report=report)

    @app.post("/circuit/impedance", response_model=EvalResponse,
              response_model_by_alias=True)
    def circuit_impedance(req: CircuitImpedanceRequest):
        c = circuits.Circuit.from_dict(req.circuit)
        s = np.array([z.to_complex() for z in req.s])
        vals = np.atleast_1d(circuits.impedance(c, s))
        return EvalResponse(values=[ComplexValue.of(v) for v in vals])

    @app.post("/circuit/energy", response_model=CircuitEnergyResponse,
              response_model_by_alias=True)
    def circuit_energy(req: CircuitEnergyRequest):
        if (req.circuit is None) == (req.impulse is None):
            raise HerglotzKitError("provide exactly one of circuit or impulse")
        if req.circuit is not None:
            response = circuits.Circuit.from_dict(req.circuit)
        else:
            response = circuits.ImpulseResponse(
                req.impulse.get("b", 0.0),
                MeasureSpec.from_dict(req.impulse.get("measure", {})))
        u = np.asarray(req.samples, dtype=float)
        energies = [circuits.admittance_energy(u, response, T, req.dt)
                    for T in req.times]
        return CircuitEnergyResponse(energies=energies)

    return app


app = create_app()
