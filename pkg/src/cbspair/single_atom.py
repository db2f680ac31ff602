"""One-atom scattering amplitudes and the weak-drive photodetection signal.

Conventions
-----------
``t1_amplitude`` and ``t2_kernel`` return the bare resonance kernels; the
polarization contractions and geometric phase factors they are multiplied by
in a full matrix element are applied by callers (see :mod:`cbspair.two_atom`).
Intensities are reported in units of the single-atom prefactor ``eta``, which
absorbs dipole moment, detector distance and polarization overlap.

The photodetection signal is carried to second order in the saturation ``s``:
the elastic channel is s/2 - s^2 and the inelastic channel s^2/2 (per photon
number factor (N-1)/N, taken to 1 in the large-N limit).  Channel by channel
these are the O(s^2) Taylor terms of the optical Bloch steady state
I_el = s / (2 (1+s)^2), I_in = s^2 / (2 (1+s)^2).

The inelastic spectrum is a smooth density; the elastic line is a sharp peak
at the drive frequency and is always represented by a separate scalar weight,
never as a sampled spike.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import AtomResonance, Drive, InputDomainError, ValidityDomainError
from .numerics import adaptive_integral

__all__ = [
    "GridCoverageWarning",
    "SpectralDensity",
    "t1_amplitude",
    "t2_kernel",
    "emission_kernel",
    "inelastic_density",
    "default_grid",
    "inelastic_spectrum",
    "single_atom_intensities",
    "bloch_intensities",
]


class GridCoverageWarning(UserWarning):
    """The requested spectral grid misses a non-negligible part of the line."""


def t1_amplitude(omega: float, res: AtomResonance) -> complex:
    """One-photon resonance kernel 1/(omega - omega0).

    omega0 has a negative imaginary part, so there is no pole on the real
    axis; at resonance the value is -2i/gamma, purely imaginary.
    """
    return 1.0 / (omega - res.omega0)


def t2_kernel(omega3: float, drive: Drive, res: AtomResonance) -> complex:
    """Frequency kernel of inelastic two-photon scattering.

    Both incident photons sit at the drive frequency omega_L and the pair
    frequencies are constrained to omega3 + omega4 = 2 omega_L, so the kernel
    reduces to [1/(omega3 - omega0) + 1/(2 omega_L - omega3 - omega0)]
    divided by (omega_L - omega0)^2.  It is exactly symmetric under
    omega3 -> 2 omega_L - omega3.
    """
    omega_l = res.omega_at + drive.delta
    bracket = 1.0 / (omega3 - res.omega0) + 1.0 / (2.0 * omega_l - omega3 - res.omega0)
    return bracket / (omega_l - res.omega0) ** 2


def emission_kernel(x, drive: Drive, res: AtomResonance):
    """Two-sided emission kernel 1/(x + a) + 1/(a - x) with a = delta + i*gamma/2.

    ``x`` is the offset of the detected photon from the drive frequency.  The
    two terms swap under x -> -x, so sampled values are mirror symmetric to
    the last bit.
    """
    a = drive.delta + 0.5j * res.gamma
    return 1.0 / (x + a) + 1.0 / (a - x)


def inelastic_density(x, drive: Drive, res: AtomResonance):
    """Inelastic spectral density at offset x from the drive, in units of eta.

    Normalized so that its integral over the real line equals the inelastic
    intensity s^2/2 for every detuning.
    """
    norm = 0.5 * drive.s**2
    return res.gamma * norm / (4.0 * np.pi) * np.abs(emission_kernel(x, drive, res)) ** 2


def default_grid(drive: Drive, res: AtomResonance, n_points: int = 4001) -> np.ndarray:
    """Uniform grid resolving both the single-peak and split-peak regimes.

    For an odd point count the grid is built from its positive half, so every
    point has an exact mirror partner and the sampled spectrum is mirror
    symmetric to the last bit.
    """
    if n_points < 3:
        raise InputDomainError("n_points must be at least 3")
    half = max(10.0 * res.gamma, 4.0 * abs(drive.delta) + 5.0 * res.gamma)
    if n_points % 2 == 1:
        positive = np.linspace(0.0, half, (n_points + 1) // 2)
        return np.concatenate((-positive[:0:-1], positive))
    return np.linspace(-half, half, n_points)


@dataclass(frozen=True)
class SpectralDensity:
    """Sampled inelastic spectrum with its analytic normalization.

    ``grid`` holds offsets from the drive frequency (units of gamma when
    gamma = 1); ``norm`` is the analytic integral s^2/2 in units of eta;
    ``captured`` is the fraction of that mass inside the grid window.
    """

    grid: np.ndarray
    values: np.ndarray
    norm: float
    captured: float

    def __post_init__(self) -> None:
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape:
            raise InputDomainError("grid and values must be matching 1-d arrays")
        if np.any(np.diff(g) <= 0.0):
            raise InputDomainError("grid must be strictly increasing")
        if np.any(v < 0.0):
            raise InputDomainError("spectral density values must be nonnegative")
        for name, arr in (("grid", g), ("values", v)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def integral(self) -> float:
        """Trapezoid integral over the grid (approximates norm * captured)."""
        return float(np.trapezoid(self.values, self.grid))

    def peak_positions(self) -> np.ndarray:
        """Locations of local maxima, refined by parabolic interpolation."""
        v = self.values
        idx = np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:])) + 1
        if idx.size == 0:
            idx = np.array([int(np.argmax(v))])
        out = []
        for i in idx:
            if 0 < i < v.size - 1:
                denom = v[i - 1] - 2.0 * v[i] + v[i + 1]
                shift = 0.0 if denom == 0.0 else 0.5 * (v[i - 1] - v[i + 1]) / denom
                h = self.grid[i + 1] - self.grid[i]
                out.append(self.grid[i] + shift * h)
            else:
                out.append(self.grid[i])
        return np.asarray(out)

    def peak_widths(self) -> np.ndarray:
        """FWHM of each local maximum via linear interpolation of the half crossings."""
        v, g = self.values, self.grid
        widths = []
        for i in (np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:])) + 1):
            half = 0.5 * v[i]
            j = i
            while j > 0 and v[j] > half:
                j -= 1
            left = g[j] + (half - v[j]) * (g[j + 1] - g[j]) / (v[j + 1] - v[j]) if v[j] <= half else g[0]
            k = i
            while k < v.size - 1 and v[k] > half:
                k += 1
            right = g[k - 1] + (half - v[k - 1]) * (g[k] - g[k - 1]) / (v[k] - v[k - 1]) if v[k] <= half else g[-1]
            widths.append(right - left)
        if not widths:
            widths = [float("nan")]
        return np.asarray(widths)

    def fwhm(self) -> float:
        """Width of the tallest peak."""
        w = self.peak_widths()
        peaks = np.flatnonzero(
            (self.values[1:-1] > self.values[:-2]) & (self.values[1:-1] >= self.values[2:])
        ) + 1
        if peaks.size == 0:
            return float(w[0])
        return float(w[int(np.argmax(self.values[peaks]))])


def inelastic_spectrum(
    drive: Drive,
    res: AtomResonance,
    grid: np.ndarray | None = None,
    n_points: int = 4001,
) -> SpectralDensity:
    """Sample the inelastic spectrum on ``grid`` (default: :func:`default_grid`).

    Warns with the captured-mass estimate when the grid is narrower than the
    recommended window of max(10 gamma, 4 |delta|) on either side.
    """
    if grid is None:
        grid = default_grid(drive, res, n_points)
    grid = np.asarray(grid, dtype=float)
    norm = 0.5 * drive.s**2
    values = inelastic_density(grid, drive, res)
    if norm > 0.0:
        window = adaptive_integral(
            lambda x: inelastic_density(x, drive, res),
            float(grid[0]), float(grid[-1]), tol=1e-10,
            points=(-abs(drive.delta), 0.0, abs(drive.delta)),
        )
        captured = float(np.real(window.value)) / norm
    else:
        captured = 1.0
    required = max(10.0 * res.gamma, 4.0 * abs(drive.delta))
    if grid[-1] < required or grid[0] > -required:
        warnings.warn(
            f"grid [{grid[0]:g}, {grid[-1]:g}] is narrower than the recommended "
            f"+/-{required:g}; it captures only {captured:.6f} of the inelastic mass",
            GridCoverageWarning,
            stacklevel=2,
        )
    return SpectralDensity(grid=grid, values=values, norm=norm, captured=min(captured, 1.0))


def single_atom_intensities(
    drive: Drive,
    res: AtomResonance,
    n_photons: int | None = None,
    max_s: float = 0.2,
) -> tuple[float, float, float]:
    """Photodetection channels (I_el first order, I_el second order, I_in), units of eta.

    Returns (s/2, -f s^2, f s^2 / 2) with f = (N-1)/N for a finite photon
    number and f = 1 in the default large-N limit.
    """
    if drive.s > max_s:
        raise ValidityDomainError(
            f"s = {drive.s} exceeds the perturbative bound {max_s}; "
            "the two-photon truncation is not valid"
        )
    if n_photons is None:
        f = 1.0
    else:
        if n_photons < 2:
            raise InputDomainError("n_photons must be >= 2 for a second-order signal")
        f = (n_photons - 1) / n_photons
    s = drive.s
    return 0.5 * s, -f * s**2, 0.5 * f * s**2


def bloch_intensities(s: float) -> tuple[float, float]:
    """Steady-state elastic and inelastic intensities (units of eta), all orders in s."""
    if s < 0.0:
        raise InputDomainError("s must be >= 0")
    return s / (2.0 * (1.0 + s) ** 2), s**2 / (2.0 * (1.0 + s) ** 2)
