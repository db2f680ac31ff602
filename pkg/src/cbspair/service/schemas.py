"""Request and response models of the service endpoints."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

Mode = Literal["phase-neglect", "exact-phase"]


class SpectrumRequest(BaseModel):
    deltas: list[float] = Field(min_length=1, description="detunings in units of gamma")
    s: float = Field(default=0.1, ge=0.0, le=0.2, description="saturation parameter")
    n_points: int = Field(default=4001, ge=101, le=200_001)
    half_width: float | None = Field(
        default=None, gt=0.0,
        description="grid half width in gamma units; default resolves both regimes",
    )


class SpectrumCurve(BaseModel):
    delta: float
    omega: list[float] = Field(description="offsets from the drive, units of gamma")
    density: list[float] = Field(description="inelastic density per unit gamma, units of eta")
    norm: float = Field(description="analytic integral s^2/2, units of eta")
    captured: float = Field(description="fraction of the analytic mass inside the grid")
    fwhm: float
    peaks: list[float]
    peak_widths: list[float]


class SpectrumResponse(BaseModel):
    s: float
    curves: list[SpectrumCurve]


class EnhancementRequest(BaseModel):
    s0_values: list[float] = Field(min_length=1, description="on-resonance saturations")
    delta: float = Field(default=10.0, description="detuning in units of gamma for the exact column")


class EnhancementRow(BaseModel):
    s0: float
    alpha_exact: float
    alpha_large_detuning: float
    alpha_linear: float


class EnhancementResponse(BaseModel):
    delta: float
    slope_at_zero: float = Field(description="d(alpha)/d(s0) at s0 = 0 by finite differences")
    rows: list[EnhancementRow]


class ConeRequest(BaseModel):
    delta: float = Field(default=1.0)
    s: float = Field(default=0.1, ge=0.0, le=0.2)
    r12_wavelengths: float = Field(default=8.0, gt=0.0)
    r_perp_frac: float = Field(default=2.0 / 3.0, gt=0.0, le=1.0)
    omega_d_offset: float | None = Field(
        default=None,
        description="detected-frequency offset from the drive in gamma units for the "
                    "fixed panel; default -delta places it on the bare resonance",
    )
    n_theta: int = Field(default=401, ge=11, le=20_001)
    theta_span_periods: float = Field(default=1.5, gt=0.0, le=20.0)
    mode: Mode = "phase-neglect"
    gamma_over_omega: float = Field(
        default=0.0, ge=0.0, lt=1.0,
        description="linewidth over optical frequency; required > 0 in exact-phase mode",
    )
    tol: float = Field(default=1e-10, ge=1e-14, le=1e-2,
                       description="quadrature tolerance of the spectrum average")


class ConeResponse(BaseModel):
    theta: list[float]
    i_fixed: list[float] = Field(description="fixed-frequency fringe, maximum normalized to 1")
    i_avg_omega: list[float] = Field(description="spectrum-averaged pattern, prefactor units")
    i_avg_omega_and_positions: list[float] = Field(description="plus pair-orientation average")
    i_one: float
    i_two: float
    gamma: float
    phase: float
    l_in: float
    c_in: float
    fringe_amplitude: float
    k_r12: float
    kr_perp: float
    first_zero: float = Field(description="first sinc zero, pi/(k r12)")
    cone_angle: float = Field(description="angular width 1/(k r12)")
    fixed_scale: float


class VerifyRequest(BaseModel):
    seed: int = Field(default=20260811, ge=0)
    zero_tolerance: bool = Field(
        default=False,
        description="reporter self-test: force all tolerances to zero",
    )


class VerifyItem(BaseModel):
    label: str
    measured: float
    expected: float
    tolerance: float
    delta: float
    passed: bool


class VerifyCheck(BaseModel):
    id: str
    name: str
    passed: bool
    notes: str
    items: list[VerifyItem]


class VerifyReport(BaseModel):
    version: str
    seed: int
    zero_tolerance: bool
    passed: bool
    checks: list[VerifyCheck]


class HealthResponse(BaseModel):
    status: str
    version: str
