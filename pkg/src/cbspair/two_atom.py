"""Photon exchange, ladder and crossed terms, and the backscattering enhancement.

All double-scattering intensities are reported in units of the pair prefactor
``eta_tilde``, which contains the orientation average of
|B(omega_L)|^2 |eps_L . Delta12 . eps_D*|^2 over the pair axis.  The
polarization part of that average evaluates to <sin^4 theta>/4 = 2/15 on the
uniform sphere; a commonly quoted closed form of the prefactor instead
carries the constant 3/8.  :func:`etatilde_prefactor` reports the Monte Carlo
and analytic sphere values and surfaces the 3/8 discrepancy explicitly rather
than adopting either silently.  Every ratio produced by this module
(enhancement factor, degrees of coherence, channel ratios) is independent of
the prefactor normalization.

Closed forms assume the helicity preserving channel (no single scattering)
and the phase-neglect regime delta, gamma << c/r12, in which the propagation
factor exp(i (omega - omega_L) r12) inside the exchange ratio is 1.  The
``gamma_r12`` argument of the quadrature oracles retains that factor for
studying its breakdown.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import AtomResonance, Drive, InputDomainError, ValidityDomainError
from .numerics import (
    McEstimate,
    QuadratureResult,
    StatisticalPrecisionWarning,
    integrate_spectrum_weighted,
    sphere_average,
)

__all__ = [
    "ExchangeFactor",
    "CbsSignal",
    "EtaTildeEstimate",
    "exchange_factor",
    "exchange_ratio",
    "ladder_crossed_elastic",
    "inelastic_ladder",
    "inelastic_crossed",
    "inelastic_ladder_quadrature",
    "crossed_interference_quadrature",
    "enhancement_factor",
    "cbs_signal",
    "alpha_large_detuning",
    "alpha_linear",
    "gamma_total_large_detuning",
    "alpha_slope_at_zero",
    "helicity_angular_factor",
    "etatilde_prefactor",
]

#: Uniform-sphere average of the helicity channel factor sin^4(theta)/4.
ANGULAR_FACTOR_EXACT = 2.0 / 15.0

#: Constant appearing in a commonly quoted closed form of the pair prefactor.
ANGULAR_FACTOR_QUOTED = 3.0 / 8.0


@dataclass(frozen=True)
class ExchangeFactor:
    """Photon exchange amplitude B evaluated at one frequency."""

    omega: float
    value: complex

    @classmethod
    def evaluate(cls, omega: float, res: AtomResonance, r12: float) -> "ExchangeFactor":
        return cls(omega=omega, value=exchange_factor(omega, res, r12))


def exchange_factor(omega: float, res: AtomResonance, r12: float) -> complex:
    """Exchange amplitude -3 gamma e^{i omega r12} / (4 omega r12 (omega - omega0)).

    ``omega`` and ``1/r12`` must be in the same frequency units (c = 1): the
    product omega * r12 is the optical phase accumulated between the atoms.
    Combines spherical propagation (1/r12) with the one-atom resonance kernel.
    """
    if not r12 > 0.0:
        raise InputDomainError(f"r12 must be positive, got {r12}")
    return (
        -3.0 * res.gamma * np.exp(1j * omega * r12)
        / (4.0 * omega * r12 * (omega - res.omega0))
    )


def exchange_ratio(x, drive: Drive, res: AtomResonance, gamma_r12: float = 0.0):
    """B(omega_L + x) / B(omega_L) with the near-resonant 1/omega factor dropped.

    In the default phase-neglect mode (gamma_r12 = 0) this is the pure
    resonance ratio (omega_L - omega0) / (omega - omega0).  A nonzero
    gamma_r12 = gamma * r12 / c restores the propagation phase
    exp(i (omega - omega_L) r12).
    """
    a = drive.delta + 0.5j * res.gamma
    ratio = a / (x + a)
    if gamma_r12 != 0.0:
        ratio = ratio * np.exp(1j * (np.asarray(x) / res.gamma) * gamma_r12)
    return ratio


def ladder_crossed_elastic(drive: Drive) -> tuple[float, float, float, float]:
    """Elastic contributions (L1, C1, L2, C2) in units of eta_tilde.

    First order: L = C = s (reciprocity).  Second order (interference of one-
    and two-photon scattering): L = C = -4 s^2.  The elastic channel therefore
    interferes with maximal contrast for every s.
    """
    s = drive.s
    return s, s, -4.0 * s**2, -4.0 * s**2


def inelastic_ladder(drive: Drive, res: AtomResonance) -> tuple[float, float, float]:
    """Inelastic background: (I_I, I_II, L_in) in units of eta_tilde.

    I_II = s^2/2 comes from the paths where the exchanged photon is scattered
    by the partner atom before the inelastic event (exchange amplitude frozen
    at the drive frequency).  I_I carries the exchange amplitude at the
    shifted emission frequency, which weights the spectrum by
    |(omega_L - omega0)/(omega - omega0)|^2 and gives (3/4 + delta^2/gamma^2)
    times s^2/2.  The total background is twice each.
    """
    d = drive.delta / res.gamma
    s2 = drive.s**2
    i_one = (0.75 + d**2) * 0.5 * s2
    i_two = 0.5 * s2
    return i_one, i_two, 2.0 * i_one + 2.0 * i_two


def inelastic_crossed(drive: Drive, res: AtomResonance) -> float:
    """Crossed inelastic term C_in = (3/2) s^2 in units of eta_tilde.

    Twice the interference integral of the two reversed-path pairs; the
    closed value is independent of the detuning, a nontrivial property of the
    emission spectrum (checked by :func:`crossed_interference_quadrature`).
    Assumes the phase-neglect condition delta, gamma << c/r12.
    """
    return 1.5 * drive.s**2


def inelastic_ladder_quadrature(
    drive: Drive,
    res: AtomResonance,
    tol: float = 1e-8,
) -> tuple[QuadratureResult, QuadratureResult]:
    """Quadrature oracles for (I_I, I_II): spectrum integrals with and without
    the squared exchange ratio.  Values are in prefactor units and must match
    the closed forms of :func:`inelastic_ladder`."""
    i_one = integrate_spectrum_weighted(
        lambda x: np.abs(exchange_ratio(x, drive, res)) ** 2, drive, res, tol
    )
    i_two = integrate_spectrum_weighted(lambda x: 1.0, drive, res, tol)
    return i_one, i_two


def crossed_interference_quadrature(
    drive: Drive,
    res: AtomResonance,
    tol: float = 1e-8,
    gamma_r12: float = 0.0,
) -> QuadratureResult:
    """Quadrature oracle for the crossed interference integral
    2 * Integral Re{exchange_ratio} P_in, equal to (3/4) s^2 for any detuning
    in phase-neglect mode.  C_in is twice this value."""
    return integrate_spectrum_weighted(
        lambda x: 2.0 * np.real(exchange_ratio(x, drive, res, gamma_r12)),
        drive, res, tol,
    )


def enhancement_factor(drive: Drive, res: AtomResonance) -> tuple[float, float]:
    """Double-scattering enhancement alpha = (L + C)/L and the ratio x.

    alpha = (8 - (19 - 4 delta^2/gamma^2) s) / (4 - (9 - 4 delta^2/gamma^2) s),
    equivalently (2 + x)/(1 + x) with x = s0 / (4 - 10 s).  The rewrite shows
    alpha depends on the drive only through the incident intensity s0 once s
    is small.
    """
    if drive.gamma != res.gamma:
        raise InputDomainError(
            "drive.gamma and res.gamma must agree: s0 and the resonance share the unit"
        )
    d = drive.delta / res.gamma
    s = drive.s
    denom = 4.0 - (9.0 - 4.0 * d**2) * s
    if denom <= 0.0 or 4.0 - 10.0 * s <= 0.0:
        raise ValidityDomainError(
            f"s = {s} at delta/gamma = {d} leaves the perturbative domain "
            "(nonpositive ladder denominator)"
        )
    alpha = (8.0 - (19.0 - 4.0 * d**2) * s) / denom
    x = drive.s0 / (4.0 - 10.0 * s)
    rewritten = (2.0 + x) / (1.0 + x)
    if abs(alpha - rewritten) > 1e-12:
        raise RuntimeError(
            f"enhancement identity violated: {alpha!r} vs {rewritten!r}"
        )
    return alpha, x


@dataclass(frozen=True)
class CbsSignal:
    """Channel-resolved backscattering signal in units of eta_tilde."""

    l_el1: float
    c_el1: float
    l_el2: float
    c_el2: float
    l_in: float
    c_in: float
    alpha: float
    x: float

    @property
    def ladder(self) -> float:
        return self.l_el1 + self.l_el2 + self.l_in

    @property
    def crossed(self) -> float:
        return self.c_el1 + self.c_el2 + self.c_in

    @property
    def gamma(self) -> float:
        """Total-channel degree of coherence C/L = alpha - 1."""
        return self.crossed / self.ladder


def cbs_signal(drive: Drive, res: AtomResonance) -> CbsSignal:
    """Assemble the full signal and check it against the closed-form alpha."""
    l1, c1, l2, c2 = ladder_crossed_elastic(drive)
    _, _, l_in = inelastic_ladder(drive, res)
    c_in = inelastic_crossed(drive, res)
    alpha, x = enhancement_factor(drive, res)
    sig = CbsSignal(l_el1=l1, c_el1=c1, l_el2=l2, c_el2=c2,
                    l_in=l_in, c_in=c_in, alpha=alpha, x=x)
    if sig.ladder > 0.0:
        assembled = (sig.ladder + sig.crossed) / sig.ladder
        if abs(assembled - alpha) > 1e-12:
            raise RuntimeError(
                f"assembled enhancement {assembled!r} deviates from closed form {alpha!r}"
            )
        if not 1.0 <= alpha <= 2.0:
            raise RuntimeError(f"enhancement factor {alpha!r} outside [1, 2]")
    return sig


def alpha_large_detuning(s0: float) -> float:
    """Enhancement (8 + s0)/(4 + s0): the s -> 0 limit at fixed incident intensity."""
    if s0 < 0.0:
        raise InputDomainError("s0 must be >= 0")
    return (8.0 + s0) / (4.0 + s0)


def alpha_linear(s0: float) -> float:
    """Small-intensity law 2 - s0/4."""
    return 2.0 - 0.25 * s0


def gamma_total_large_detuning(s0: float) -> float:
    """Total-channel coherence C/L = alpha - 1 = 4/(4 + s0) in the same limit."""
    return alpha_large_detuning(s0) - 1.0


def alpha_slope_at_zero(delta: float, gamma: float = 1.0, h: float = 1e-4) -> float:
    """d alpha / d s0 at s0 = 0, one-sided second-order finite difference.

    Equals -1/4 for every detuning.
    """
    scale = 1.0 + 4.0 * (delta / gamma) ** 2
    res = AtomResonance(gamma=gamma)

    def alpha_of_s0(s0: float) -> float:
        return enhancement_factor(Drive(delta=delta, s=s0 / scale, gamma=gamma), res)[0]

    return (-3.0 * alpha_of_s0(0.0) + 4.0 * alpha_of_s0(h) - alpha_of_s0(2.0 * h)) / (2.0 * h)


def helicity_angular_factor(directions: np.ndarray) -> np.ndarray:
    """sin^4(theta)/4 for directions relative to the z (laser) axis, vectorized."""
    nz = np.asarray(directions)[..., 2]
    return 0.25 * (1.0 - nz**2) ** 2


@dataclass(frozen=True)
class EtaTildeEstimate:
    """Angular part of the pair prefactor, relative to |B(omega_L)|^2."""

    relative: McEstimate
    exact: float
    quoted_constant: float
    cone_angle: float

    @property
    def consistent_with_exact(self) -> bool:
        return abs(self.relative.mean - self.exact) <= 3.0 * self.relative.std_error

    @property
    def quoted_ratio(self) -> float:
        """Quoted constant over the sphere-average value (45/16 if both are right)."""
        return self.quoted_constant / self.exact


def etatilde_prefactor(
    res: AtomResonance,
    r12: float,
    samples: int,
    seed: int = 0,
    shards: int = 1,
) -> EtaTildeEstimate:
    """Monte Carlo orientation average of the pair-prefactor polarization factor.

    |B(omega_L)|^2 is orientation independent at fixed r12 and is factored
    out, so the reported value is the pure angular average <sin^4 theta>/4,
    whose analytic value is 2/15.  The result also carries the 3/8 constant
    quoted for the closed-form prefactor; the two disagree by 45/16 and the
    discrepancy is reported, never silently resolved.  All observables of
    this library are ratios in which the prefactor cancels.
    """
    if not r12 > 0.0:
        raise InputDomainError(f"r12 must be positive, got {r12}")
    if samples < 10_000:
        warnings.warn(
            f"{samples} samples give a loose angular-factor estimate; "
            "expect std_error above 1e-3",
            StatisticalPrecisionWarning,
            stacklevel=2,
        )
    est = sphere_average(helicity_angular_factor, samples, seed, shards)
    return EtaTildeEstimate(
        relative=est,
        exact=ANGULAR_FACTOR_EXACT,
        quoted_constant=ANGULAR_FACTOR_QUOTED,
        cone_angle=1.0 / (2.0 * np.pi * r12),
    )
