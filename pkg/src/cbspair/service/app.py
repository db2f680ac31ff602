"""Service endpoints: spectra, enhancement curves, cone panels, verification.

Domain errors map to HTTP 400 with kind "config"; quadrature non-convergence
maps to HTTP 500 with kind "numeric".  All endpoints are pure functions of
the request body, so identical requests produce identical responses.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..core import AtomResonance, Drive, InputDomainError, ValidityDomainError
from ..numerics import QuadratureError
from ..single_atom import inelastic_spectrum
from ..two_atom import alpha_large_detuning, alpha_linear, alpha_slope_at_zero, enhancement_factor
from ..coherence import cone_panels
from ..verify import run_verification
from .schemas import (
    ConeRequest,
    ConeResponse,
    EnhancementRequest,
    EnhancementResponse,
    EnhancementRow,
    HealthResponse,
    SpectrumCurve,
    SpectrumRequest,
    SpectrumResponse,
    VerifyReport,
    VerifyRequest,
)

app = FastAPI(
    title="cbspair",
    description="Double scattering of a weak laser by two distant two-level atoms: "
                "inelastic spectra, backscattering enhancement, and coherence analysis.",
    version=__version__,
)


@app.exception_handler(InputDomainError)
@app.exception_handler(ValidityDomainError)
async def _domain_error(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=400, content={"kind": "config", "detail": str(exc)})


@app.exception_handler(QuadratureError)
async def _numeric_error(request: Request, exc: QuadratureError) -> JSONResponse:
    return JSONResponse(status_code=500, content={"kind": "numeric", "detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    res = AtomResonance()
    curves = []
    for delta in req.deltas:
        drive = Drive(delta=delta, s=req.s)
        grid = None
        if req.half_width is not None:
            grid = np.linspace(-req.half_width, req.half_width, req.n_points)
        spec = inelastic_spectrum(drive, res, grid=grid, n_points=req.n_points)
        curves.append(SpectrumCurve(
            delta=delta,
            omega=spec.grid.tolist(),
            density=spec.values.tolist(),
            norm=spec.norm,
            captured=spec.captured,
            fwhm=spec.fwhm(),
            peaks=spec.peak_positions().tolist(),
            peak_widths=spec.peak_widths().tolist(),
        ))
    return SpectrumResponse(s=req.s, curves=curves)


@app.post("/enhancement", response_model=EnhancementResponse)
def enhancement(req: EnhancementRequest) -> EnhancementResponse:
    res = AtomResonance()
    scale = 1.0 + 4.0 * req.delta**2
    rows = []
    for s0 in req.s0_values:
        if s0 < 0.0:
            raise InputDomainError(f"s0_values must be >= 0, got {s0}")
        s = s0 / scale
        if s > 0.2:
            raise ValidityDomainError(
                f"s0 = {s0} at delta = {req.delta} implies s = {s:.4g} > 0.2, "
                "outside the perturbative domain"
            )
        rows.append(EnhancementRow(
            s0=s0,
            alpha_exact=enhancement_factor(Drive(delta=req.delta, s=s), res)[0],
            alpha_large_detuning=alpha_large_detuning(s0),
            alpha_linear=alpha_linear(s0),
        ))
    return EnhancementResponse(
        delta=req.delta,
        slope_at_zero=alpha_slope_at_zero(req.delta),
        rows=rows,
    )


@app.post("/cone", response_model=ConeResponse)
def cone(req: ConeRequest) -> ConeResponse:
    res = AtomResonance()
    drive = Drive(delta=req.delta, s=req.s)
    k_r12 = 2.0 * np.pi * req.r12_wavelengths
    kr_perp = k_r12 * req.r_perp_frac
    if req.mode == "exact-phase":
        if req.gamma_over_omega <= 0.0:
            raise InputDomainError("exact-phase mode requires gamma_over_omega > 0")
        gamma_r12 = k_r12 * req.gamma_over_omega
    else:
        gamma_r12 = 0.0
    offset = -req.delta if req.omega_d_offset is None else req.omega_d_offset
    omega_d = res.omega_at + drive.delta + offset
    theta_max = req.theta_span_periods * 2.0 * np.pi / kr_perp
    theta = np.linspace(-theta_max, theta_max, req.n_theta)
    panels = cone_panels(drive, res, k_r12, req.r_perp_frac, omega_d, theta,
                         gamma_r12=gamma_r12, tol=req.tol)
    return ConeResponse(
        theta=panels.theta.tolist(),
        i_fixed=panels.fixed.tolist(),
        i_avg_omega=panels.averaged.tolist(),
        i_avg_omega_and_positions=panels.position_averaged.tolist(),
        i_one=panels.i_one,
        i_two=panels.i_two,
        gamma=panels.gamma,
        phase=panels.phase,
        l_in=panels.l_in,
        c_in=panels.c_in,
        fringe_amplitude=panels.fringe_amplitude,
        k_r12=panels.k_r12,
        kr_perp=panels.kr_perp,
        first_zero=np.pi / k_r12,
        cone_angle=1.0 / k_r12,
        fixed_scale=panels.fixed_scale,
    )


@app.post("/verify", response_model=VerifyReport)
def verify(req: VerifyRequest) -> VerifyReport:
    return VerifyReport(**run_verification(seed=req.seed, zero_tolerance=req.zero_tolerance))
