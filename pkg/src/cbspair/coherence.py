"""Path-resolved amplitudes, angular interference patterns, and coherence loss.

The detected photon can reach the backscattering detector by two reversed
double-scattering paths.  When one atom scatters inelastically the elastic
event of path I happens at the shifted frequency omega_D while path II keeps
the drive frequency, so the two amplitudes differ:

    E_I(omega_D)  = K(omega_D) e^{-i k r_perp theta / 2} / (omega_D - omega0)
    E_II(omega_D) = K(omega_D) e^{+i k r_perp theta / 2} / (omega_L - omega0)

with K the two-sided emission kernel of :func:`cbspair.single_atom.emission_kernel`.
Prefactors independent of omega_D and theta are dropped throughout, so only
ratios and contrasts of these patterns are meaningful; the pattern builders
that integrate over omega_D are rescaled to prefactor units via the closed
path intensities.

Averaging |E_I + E_II|^2 over omega_D reduces the fringe contrast by the
degree of coherence gamma_I_II, obtained equivalently as the normalized
overlap of the undetected photon's two conditional states.  Adding the
mirror assignment of the inelastic atom symmetrizes the pattern and reduces
the contrast further, to gamma_pair = 6/(7 + 4 delta^2/gamma^2).

Phase branch convention: both phase shifts are principal values in (-pi, pi].
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import AtomResonance, Drive, ValidityWarning
from .numerics import tail_extended_integral
from .single_atom import emission_kernel
from .two_atom import inelastic_crossed, inelastic_ladder

__all__ = [
    "OverlapResult",
    "AveragedPattern",
    "TotalPattern",
    "ConePanels",
    "closed_gamma",
    "closed_phase",
    "closed_gamma_pair",
    "path_amplitudes",
    "fixed_phase_shift",
    "fixed_frequency_pattern",
    "detector_state_overlap",
    "averaged_pattern",
    "asymmetry_factor",
    "total_pattern",
    "cone_shape",
    "cone_panels",
    "distinct_linewidth_check",
]


def closed_gamma(detuning_ratio: float) -> float:
    """Degree of coherence between the reversed paths, closed form."""
    d2 = detuning_ratio**2
    return float(np.sqrt((9.0 + 4.0 * d2) / (12.0 + 16.0 * d2)))


def closed_phase(detuning_ratio: float) -> float:
    """Residual phase shift of the averaged pattern: tan(phi) = 2 delta / (3 gamma)."""
    return float(np.arctan2(2.0 * detuning_ratio, 3.0))


def closed_gamma_pair(detuning_ratio: float) -> float:
    """Coherence between the light emitted by the two atoms: 6/(7 + 4 d^2)."""
    return 6.0 / (7.0 + 4.0 * detuning_ratio**2)


def _omega_l(drive: Drive, res: AtomResonance) -> float:
    return res.omega_at + drive.delta


def path_amplitudes(
    omega_d: float,
    theta: float,
    drive: Drive,
    res: AtomResonance,
    kr_perp: float,
):
    """Amplitudes (E_I, E_II) of the two reversed paths at detected frequency omega_d.

    ``kr_perp`` is the dimensionless product of the optical wavevector and the
    transverse atom separation; ``theta`` is the detection angle from exact
    backscattering.
    """
    x = omega_d - _omega_l(drive, res)
    a = drive.delta + 0.5j * res.gamma
    kernel = emission_kernel(x, drive, res)
    half_phase = np.exp(-0.5j * kr_perp * theta)
    e_one = kernel * half_phase / (x + a)
    e_two = kernel / half_phase / a
    return e_one, e_two


def fixed_phase_shift(omega_d: float, drive: Drive, res: AtomResonance) -> float:
    """Phase shift phi0 of the fixed-frequency fringe, in (-pi, pi].

    arg[(omega_D - omega0)/(omega_L - omega0)]; equivalently
    tan(phi0) = 2 (delta - eps) gamma / (4 delta eps + gamma^2) with
    eps = omega_D - omega_at.
    """
    x = omega_d - _omega_l(drive, res)
    a = drive.delta + 0.5j * res.gamma
    return float(np.angle((x + a) / a))


def fixed_frequency_pattern(
    omega_d: float,
    drive: Drive,
    res: AtomResonance,
    kr_perp: float,
    theta_grid: np.ndarray,
) -> np.ndarray:
    """|E_I + E_II|^2 over theta: a full-contrast fringe cos(phi0 + k r_perp theta).

    Oscillates between (|E_I| - |E_II|)^2 and (|E_I| + |E_II|)^2; the two
    amplitudes stay mutually coherent at fixed omega_d, the contrast is only
    limited by their magnitude asymmetry.
    """
    theta = np.asarray(theta_grid, dtype=float)
    e_one, e_two = path_amplitudes(omega_d, 0.0, drive, res, kr_perp)
    phase = np.exp(-1j * kr_perp * theta)  # relative phase of path I vs II
    return np.abs(e_one * phase + e_two) ** 2


@dataclass(frozen=True)
class OverlapResult:
    """Normalized detector-state overlap and its quadrature diagnostics."""

    value: complex
    intensity_ratio: float
    error_estimate: float
    evaluations: int

    @property
    def gamma(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return float(np.angle(self.value))


def detector_state_overlap(
    drive: Drive,
    res: AtomResonance,
    elastic_response=None,
    tol: float = 1e-10,
) -> OverlapResult:
    """Normalized overlap <D_I | D_II> of the undetected photon's conditional states.

    Computed as the frequency integral of E_I* E_II over the inelastic line,
    divided by the geometric mean of the path norms (angular and polarization
    factors cancel in the ratio).  The modulus is the degree of coherence
    gamma_I_II and the phase is the pattern shift phi.

    ``elastic_response`` replaces the second atom's kernel 1/(omega - omega0):
    it receives the offset x = omega - omega_L and must return the (relative)
    elastic amplitude.  Path II always uses its value at x = 0.
    """
    a = drive.delta + 0.5j * res.gamma
    if elastic_response is None:
        def elastic_response(x):
            return 1.0 / (x + a)

    r0 = elastic_response(0.0)

    def e_one(x):
        return emission_kernel(x, drive, res) * elastic_response(x)

    def e_two(x):
        return emission_kernel(x, drive, res) * r0

    half = max(40.0 * res.gamma, 10.0 * abs(drive.delta))
    pts = (-abs(drive.delta), 0.0, abs(drive.delta))
    num = tail_extended_integral(lambda x: np.conj(e_one(x)) * e_two(x), half, tol, pts)
    n_one = tail_extended_integral(lambda x: abs(e_one(x)) ** 2, half, tol, pts)
    n_two = tail_extended_integral(lambda x: abs(e_two(x)) ** 2, half, tol, pts)
    norm = np.sqrt(float(np.real(n_one.value)) * float(np.real(n_two.value)))
    return OverlapResult(
        value=complex(num.value) / norm,
        intensity_ratio=float(np.real(n_one.value)) / float(np.real(n_two.value)),
        error_estimate=num.error_estimate + n_one.error_estimate + n_two.error_estimate,
        evaluations=num.evaluations + n_one.evaluations + n_two.evaluations,
    )


@dataclass(frozen=True)
class AveragedPattern:
    """omega_D-averaged fringe of one inelastic-atom assignment (prefactor units)."""

    i_one: float
    i_two: float
    gamma: float
    phase: float
    theta: np.ndarray
    intensity: np.ndarray


def averaged_pattern(
    drive: Drive,
    res: AtomResonance,
    kr_perp: float,
    theta_grid: np.ndarray,
    tol: float = 1e-10,
    closed_form_rtol: float = 1e-6,
) -> AveragedPattern:
    """Average |E_I + E_II|^2 over the emitted spectrum at fixed atom positions.

    The quadrature overlap is computed and checked against the closed forms
    for gamma_I_II and tan(phi) at relative tolerance ``closed_form_rtol``;
    disagreement raises, since it would mean the oracle and the closed form
    have diverged.  The returned curve uses the quadrature values:
    I_I + I_II + 2 sqrt(I_I I_II) gamma cos(phi + k r_perp theta).
    """
    d = drive.delta / res.gamma
    overlap = detector_state_overlap(drive, res, tol=tol)
    g_closed, phi_closed = closed_gamma(d), closed_phase(d)
    if abs(overlap.gamma - g_closed) > closed_form_rtol * g_closed:
        raise RuntimeError(
            f"overlap quadrature gamma {overlap.gamma!r} deviates from "
            f"closed form {g_closed!r}"
        )
    if abs(np.tan(overlap.phase) - np.tan(phi_closed)) > closed_form_rtol * max(1.0, abs(np.tan(phi_closed))):
        raise RuntimeError(
            f"overlap quadrature phase {overlap.phase!r} deviates from "
            f"closed form {phi_closed!r}"
        )
    i_one, i_two, _ = inelastic_ladder(drive, res)
    theta = np.asarray(theta_grid, dtype=float)
    fringe = np.cos(overlap.phase + kr_perp * theta)
    intensity = i_one + i_two + 2.0 * np.sqrt(i_one * i_two) * overlap.gamma * fringe
    return AveragedPattern(
        i_one=i_one, i_two=i_two, gamma=overlap.gamma, phase=overlap.phase,
        theta=theta, intensity=intensity,
    )


def asymmetry_factor(drive: Drive, res: AtomResonance) -> float:
    """Amplitude-asymmetry contrast factor 2 sqrt(I_I I_II) / (I_I + I_II).

    Stays above 0.96 for detunings below one linewidth.
    """
    i_one, i_two, _ = inelastic_ladder(drive, res)
    return 2.0 * np.sqrt(i_one * i_two) / (i_one + i_two)


@dataclass(frozen=True)
class TotalPattern:
    """Symmetrized inelastic pattern with both inelastic-atom assignments."""

    l_in: float
    c_in: float
    gamma_pair: float
    theta: np.ndarray
    intensity: np.ndarray


def total_pattern(
    drive: Drive,
    res: AtomResonance,
    kr_perp: float,
    theta_grid: np.ndarray,
    check_tol: float = 1e-9,
) -> TotalPattern:
    """Add the two (incoherent) inelastic-atom assignments.

    I_tot = 2 I_I + 2 I_II + 4 sqrt(I_I I_II) gamma cos(phi) cos(k r_perp theta):
    even in theta with its maximum at exact backscattering.  The assembled
    pair coherence must reproduce 6/(7 + 4 d^2) within ``check_tol``, and the
    fringe amplitude must equal the crossed term C_in exactly.
    """
    d = drive.delta / res.gamma
    i_one, i_two, l_in = inelastic_ladder(drive, res)
    g, phi = closed_gamma(d), closed_phase(d)
    fringe_amp = 4.0 * np.sqrt(i_one * i_two) * g * np.cos(phi)
    gamma_pair = fringe_amp / l_in
    if abs(gamma_pair - closed_gamma_pair(d)) > check_tol:
        raise RuntimeError(
            f"assembled pair coherence {gamma_pair!r} deviates from "
            f"closed form {closed_gamma_pair(d)!r}"
        )
    theta = np.asarray(theta_grid, dtype=float)
    intensity = l_in + fringe_amp * np.cos(kr_perp * theta)
    return TotalPattern(
        l_in=l_in, c_in=inelastic_crossed(drive, res), gamma_pair=gamma_pair,
        theta=theta, intensity=intensity,
    )


def cone_shape(
    drive: Drive,
    res: AtomResonance,
    k_r12: float,
    theta_grid: np.ndarray,
) -> np.ndarray:
    """Crossed-term angular profile after averaging the pair orientation.

    C(theta) = C(0) sin(k r12 theta)/(k r12 theta), with C(0) the crossed
    term at exact backscattering (removable singularity at theta = 0).  The
    cone angular width is 1/(k r12).
    """
    if k_r12 < 10.0:
        warnings.warn(
            f"k*r12 = {k_r12:g} is not large; the far-field pair picture "
            "behind the sinc profile is marginal",
            ValidityWarning,
            stacklevel=2,
        )
    theta = np.asarray(theta_grid, dtype=float)
    return inelastic_crossed(drive, res) * np.sinc(k_r12 * theta / np.pi)


@dataclass(frozen=True)
class ConePanels:
    """The three stages of averaging of the inelastic angular pattern.

    ``fixed`` is the single-frequency fringe, normalized so its maximum is
    1.0 (its absolute prefactor is dropped by construction).  ``averaged``
    (over the emitted spectrum, atoms fixed) and ``position_averaged`` (over
    the pair orientation as well) are in prefactor units, so the latter
    equals L_in + C_in at exact backscattering.
    """

    theta: np.ndarray
    fixed: np.ndarray
    averaged: np.ndarray
    position_averaged: np.ndarray
    i_one: float
    i_two: float
    gamma: float
    phase: float
    l_in: float
    c_in: float
    fringe_amplitude: float
    k_r12: float
    kr_perp: float
    fixed_scale: float


def cone_panels(
    drive: Drive,
    res: AtomResonance,
    k_r12: float,
    r_perp_frac: float,
    omega_d: float,
    theta_grid: np.ndarray,
    gamma_r12: float = 0.0,
    tol: float = 1e-10,
) -> ConePanels:
    """Fixed-frequency, spectrum-averaged, and fully averaged angular patterns.

    ``r_perp_frac`` fixes the transverse separation as a fraction of r12.  In
    the default phase-neglect mode the spectrum average is validated against
    the closed forms; with ``gamma_r12 > 0`` the propagation phase
    exp(i (omega - omega_L) r12) is retained in the elastic response, which
    degrades the coherence (no closed form then applies).
    """
    if not 0.0 < r_perp_frac <= 1.0:
        raise ValueError(f"r_perp_frac must be in (0, 1], got {r_perp_frac}")
    theta = np.asarray(theta_grid, dtype=float)
    kr_perp = k_r12 * r_perp_frac
    raw_fixed = fixed_frequency_pattern(omega_d, drive, res, kr_perp, theta)
    fixed_scale = 1.0 / float(np.max(raw_fixed))
    i_one, i_two, l_in = inelastic_ladder(drive, res)
    if gamma_r12 == 0.0:
        avg = averaged_pattern(drive, res, kr_perp, theta, tol=tol)
        gamma, phase = avg.gamma, avg.phase
        averaged = avg.intensity
    else:
        a = drive.delta + 0.5j * res.gamma
        overlap = detector_state_overlap(
            drive, res,
            elastic_response=lambda x: np.exp(1j * (x / res.gamma) * gamma_r12) / (x + a),
            tol=tol,
        )
        gamma, phase = overlap.gamma, overlap.phase
        averaged = (i_one + i_two
                    + 2.0 * np.sqrt(i_one * i_two) * gamma * np.cos(phase + kr_perp * theta))
    fringe_amplitude = 4.0 * np.sqrt(i_one * i_two) * gamma * np.cos(phase)
    position_averaged = l_in + fringe_amplitude * np.sinc(k_r12 * theta / np.pi)
    return ConePanels(
        theta=theta,
        fixed=raw_fixed * fixed_scale,
        averaged=averaged,
        position_averaged=position_averaged,
        i_one=i_one,
        i_two=i_two,
        gamma=gamma,
        phase=phase,
        l_in=l_in,
        c_in=inelastic_crossed(drive, res),
        fringe_amplitude=fringe_amplitude,
        k_r12=k_r12,
        kr_perp=kr_perp,
        fixed_scale=fixed_scale,
    )


def distinct_linewidth_check(
    res_inelastic: AtomResonance,
    res_elastic: AtomResonance,
    drive: Drive,
    flat: bool = False,
    tol: float = 1e-10,
) -> OverlapResult:
    """Overlap when the elastic scatterer has its own (wider) resonance.

    With a flat elastic response the reversed paths are identical and the
    coherence is exactly one for any drive: the undetected photon then
    carries no path information.  A finite linewidth ratio
    gamma_elastic / gamma_inelastic >> 1 approaches that limit, since the
    wide atom cannot resolve the narrow emitted spectrum.
    """
    if flat:
        return detector_state_overlap(drive, res_inelastic,
                                      elastic_response=lambda x: 1.0, tol=tol)
    omega_l = res_inelastic.omega_at + drive.delta
    a2 = (omega_l - res_elastic.omega_at) + 0.5j * res_elastic.gamma

    return detector_state_overlap(drive, res_inelastic,
                                  elastic_response=lambda x: 1.0 / (x + a2), tol=tol)
