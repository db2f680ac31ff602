"""Scalar-photon variant of the pair signal.

Without polarization there is no channel that removes single scattering, so
the signal keeps zeroth-order (single-atom) terms alongside the exchange
terms, and extra exchange diagrams survive that the helicity-preserving
channel filters out in the vectorial case.  The spontaneous decay rate and
the reporting prefactor change to their scalar forms

    gamma_s = d^2 omega_at^3 / (2 pi eps0)   (3/2 times the vectorial rate)
    eta_s   = (gamma_s / (2 d omega_L R))^2

and the exchange amplitude loses its polarization projector:

    B_s(omega) = gamma / (2 omega r12 (omega - omega0)).

All contributions below are the post-cancellation results: the diagrams in
which the undetected photon is exchanged *after* the inelastic event cancel
exactly against interference terms with single scattering (what the
undetected photon does after the inelastic event cannot change its norm), so
they never appear at second order.  That bookkeeping is not re-derived at
runtime.  Terms oscillating on the wavelength scale of r12 are likewise
dropped, as they average away over one wavelength of pair separation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AtomResonance, Drive, InputDomainError

__all__ = [
    "ScalarConstants",
    "ScalarSignal",
    "scalar_constants",
    "scalar_exchange_factor",
    "scalar_exchange_squared",
    "scalar_signal",
]

GAMMA_S_FORMULA = "d^2 omega_at^3 / (2 pi eps0)"
ETA_S_FORMULA = "(gamma_s / (2 d omega_L R))^2"


@dataclass(frozen=True)
class ScalarConstants:
    """Scalar decay rate and the symbolic reporting unit."""

    gamma_s: float
    gamma_s_formula: str = GAMMA_S_FORMULA
    eta_s_formula: str = ETA_S_FORMULA


def scalar_constants(res: AtomResonance) -> ScalarConstants:
    """Scalar-photon constants; eta_s is the unit all scalar intensities carry."""
    return ScalarConstants(gamma_s=1.5 * res.gamma)


def scalar_exchange_factor(omega: float, res: AtomResonance, r12: float) -> complex:
    """Scalar exchange amplitude gamma / (2 omega r12 (omega - omega0)).

    ``omega`` and ``1/r12`` in the same frequency units (c = 1).  On
    resonance the modulus is 1/(omega r12).
    """
    if not r12 > 0.0:
        raise InputDomainError(f"r12 must be positive, got {r12}")
    return res.gamma / (2.0 * omega * r12 * (omega - res.omega0))


def scalar_exchange_squared(drive: Drive, res: AtomResonance, k_r12: float) -> float:
    """|B_s(omega_L)|^2 from the dimensionless product k_r12 = omega_L * r12."""
    if not k_r12 > 0.0:
        raise InputDomainError(f"k_r12 must be positive, got {k_r12}")
    mod_a2 = drive.delta**2 + 0.25 * res.gamma**2
    return res.gamma**2 / (4.0 * k_r12**2 * mod_a2)


@dataclass(frozen=True)
class ScalarSignal:
    """All scalar contributions through second order, in units of eta_s.

    ``l_el0``/``l_in0`` are the single-atom (no exchange) backgrounds; the
    remaining terms carry one photon exchange and scale with
    b_squared = |B_s(omega_L)|^2.
    """

    l_el0: float
    l_in0: float
    l_el1: float
    c_el1: float
    l_el2: float
    c_el2: float
    l_in2: float
    c_in2: float
    b_squared: float

    @property
    def ladder_exchange(self) -> float:
        return self.l_el1 + self.l_el2 + self.l_in2

    @property
    def crossed_exchange(self) -> float:
        return self.c_el1 + self.c_el2 + self.c_in2

    @property
    def exchange_enhancement(self) -> float:
        """(L + C)/L restricted to the double-scattering (exchange) part."""
        return (self.ladder_exchange + self.crossed_exchange) / self.ladder_exchange

    @property
    def inelastic_exchange_ratio(self) -> float:
        """C_in2 / L_in2 = 12 / (19 + 4 d^2); compare 6/(7 + 4 d^2) vectorially."""
        return self.c_in2 / self.l_in2


def scalar_signal(
    drive: Drive,
    res: AtomResonance,
    k_r12: float | None = None,
    b_squared: float | None = None,
) -> ScalarSignal:
    """Full scalar contribution table.

    Provide either ``k_r12`` (to evaluate |B_s(omega_L)|^2) or ``b_squared``
    directly.  Coefficients, in units of eta_s and eta_s * b_squared:

        L_el0 = s - 2 s^2          L_in0 = s^2
        L_el1 = C_el1 = s          L_el2 = -10 s^2      C_el2 = -8 s^2
        L_in2 = (19/4 + d^2) s^2   C_in2 = 3 s^2

    The inelastic exchange background decomposes into the vectorial path
    intensities as 4 * (2 I_II) + 2 I_I: the constant-exchange pairs add
    coherently with their single-scattering twins (doubling the amplitude,
    quadrupling the intensity) while the shifted-exchange pair is unchanged.
    """
    if (k_r12 is None) == (b_squared is None):
        raise InputDomainError("provide exactly one of k_r12 or b_squared")
    if b_squared is None:
        b_squared = scalar_exchange_squared(drive, res, k_r12)
    if b_squared < 0.0:
        raise InputDomainError("b_squared must be >= 0")
    s = drive.s
    d2 = (drive.delta / res.gamma) ** 2
    return ScalarSignal(
        l_el0=s - 2.0 * s**2,
        l_in0=s**2,
        l_el1=b_squared * s,
        c_el1=b_squared * s,
        l_el2=-10.0 * b_squared * s**2,
        c_el2=-8.0 * b_squared * s**2,
        l_in2=(4.75 + d2) * b_squared * s**2,
        c_in2=3.0 * b_squared * s**2,
        b_squared=b_squared,
    )
