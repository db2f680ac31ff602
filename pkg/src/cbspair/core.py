"""Shared conventions, resonance arithmetic, and polarization algebra.

Units
-----
The natural linewidth ``gamma`` is the frequency unit (default 1.0) and every
detuning is measured in it.  Absolute radiometric prefactors are never
evaluated: all intensities are reported relative to the single- or
double-scattering prefactor of the configuration at hand (called ``eta``,
``eta_tilde`` or ``eta_s`` in the docstrings of :mod:`cbspair.single_atom`,
:mod:`cbspair.two_atom` and :mod:`cbspair.scalar`).  The quantities entering
those prefactors only -- the dipole moment ``d``, the quantization volume,
the coupling constant ``g`` and the detector distance ``R`` -- cancel from
every observable this library computes and are therefore documented
constants, never runtime inputs.

Geometry lengths are given in units of the optical wavelength, so the
dimensionless products ``k * r12`` and ``k * r_perp`` are ``2*pi`` times the
separation in wavelengths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "InputDomainError",
    "ValidityDomainError",
    "ValidityWarning",
    "AtomResonance",
    "Drive",
    "Polarization",
    "PairGeometry",
    "transverse_projector",
    "helicity_matrix_element",
]

_UNIT_TOL = 1e-12


class InputDomainError(ValueError):
    """An argument lies outside its physically meaningful domain."""


class ValidityDomainError(ValueError):
    """Parameters leave the perturbative (two-photon) validity domain."""


class ValidityWarning(UserWarning):
    """Parameters approach the edge of an approximation's validity domain."""


@dataclass(frozen=True)
class AtomResonance:
    """Two-level resonance with the complex pole ``omega_at - i*gamma/2``.

    ``omega_at`` enters observables only through detunings; it is kept as a
    field so that amplitudes quoted at absolute frequencies (for example the
    photon exchange factor) can be evaluated as written.
    """

    gamma: float = 1.0
    omega_at: float = 0.0

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise InputDomainError(f"gamma must be positive, got {self.gamma}")

    @property
    def omega0(self) -> complex:
        return self.omega_at - 0.5j * self.gamma


@dataclass(frozen=True)
class Drive:
    """Monochromatic drive: detuning ``delta = omega_L - omega_at`` and saturation ``s``.

    ``s`` is the saturation parameter of the driven transition; ``s0`` is its
    on-resonance value, which depends only on the incident intensity and not
    on the detuning.
    """

    delta: float
    s: float
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if self.s < 0.0:
            raise InputDomainError(f"saturation s must be >= 0, got {self.s}")
        if not self.gamma > 0.0:
            raise InputDomainError(f"gamma must be positive, got {self.gamma}")

    @property
    def detuning_ratio(self) -> float:
        """delta / gamma, the only combination entering the closed forms."""
        return self.delta / self.gamma

    @property
    def s0(self) -> float:
        return (1.0 + 4.0 * self.detuning_ratio**2) * self.s


@dataclass(frozen=True)
class Polarization:
    """Complex unit polarization vector (Hermitian norm 1)."""

    vector: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.vector, dtype=complex)
        if v.shape != (3,):
            raise InputDomainError(f"polarization must be a 3-vector, got shape {v.shape}")
        if abs(np.vdot(v, v).real - 1.0) > _UNIT_TOL:
            raise InputDomainError("polarization vector must have unit Hermitian norm")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    @classmethod
    def circular(cls) -> "Polarization":
        """Circular polarization (1, i, 0)/sqrt(2) about the z (laser) axis."""
        return cls(np.array([1.0, 1.0j, 0.0]) / np.sqrt(2.0))

    def helicity_preserving_detector(self) -> "Polarization":
        """Detection polarization of the helicity preserving channel: eps_D = eps_L*.

        For circular input this gives eps_L . eps_D* = 0, so singly scattered
        light cannot reach the detector.
        """
        return Polarization(np.conj(self.vector))


def _as_unit_vector(n12: np.ndarray) -> np.ndarray:
    n = np.asarray(n12, dtype=float)
    if n.shape != (3,):
        raise InputDomainError(f"direction must be a real 3-vector, got shape {n.shape}")
    if abs(np.dot(n, n) - 1.0) > 10.0 * _UNIT_TOL:
        raise InputDomainError(f"direction must be a unit vector, |n|^2 = {np.dot(n, n)!r}")
    return n


@dataclass(frozen=True)
class PairGeometry:
    """Relative geometry of the two atoms and the detector.

    ``r12`` and ``r_perp`` are in units of the optical wavelength, with
    ``2*pi*r12 >> 1`` assumed (far-field pair).  ``r_perp`` is the transverse
    separation seen by the detector; by default it is the component of the
    separation perpendicular to the backscattering (z) axis.
    """

    r12: float
    n12: np.ndarray
    theta_det: float = 0.0
    r_perp: float | None = None

    def __post_init__(self) -> None:
        if not self.r12 > 0.0:
            raise InputDomainError(f"r12 must be positive, got {self.r12}")
        n = _as_unit_vector(self.n12)
        n.setflags(write=False)
        object.__setattr__(self, "n12", n)
        if self.r_perp is None:
            object.__setattr__(self, "r_perp", self.r12 * float(np.hypot(n[0], n[1])))
        if self.r_perp > self.r12 * (1.0 + _UNIT_TOL):
            raise InputDomainError(f"r_perp = {self.r_perp} exceeds r12 = {self.r12}")

    @property
    def k_r12(self) -> float:
        """omega_L * r12 in natural units (2*pi times r12 in wavelengths)."""
        return 2.0 * np.pi * self.r12

    @property
    def k_r_perp(self) -> float:
        return 2.0 * np.pi * self.r_perp


def transverse_projector(n12: np.ndarray) -> np.ndarray:
    """Projector onto the plane perpendicular to the unit vector ``n12``.

    Returns the symmetric idempotent matrix I - n12 n12^T, which annihilates
    n12 and has trace 2.
    """
    n = _as_unit_vector(n12)
    return np.eye(3) - np.outer(n, n)


def helicity_matrix_element(eps_l: Polarization | np.ndarray, n12: np.ndarray) -> complex:
    """Polarization factor eps_L . Delta12 . eps_D* of the helicity preserving channel.

    With eps_D = eps_L* the contraction is bilinear in eps_L (no conjugation),
    and its squared modulus equals sin(theta)^4 / 4 where theta is the angle
    between the laser axis and n12.
    """
    v = eps_l.vector if isinstance(eps_l, Polarization) else np.asarray(eps_l, dtype=complex)
    delta12 = transverse_projector(n12)
    return complex(v @ delta12 @ v)
