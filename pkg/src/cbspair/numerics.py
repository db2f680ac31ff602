"""Quadrature and Monte Carlo back ends: the independent-verification layer.

Every closed form in the physics modules is paired with a numerical oracle
built from the two primitives here.  The adaptive rule is the Gauss-Kronrod
scheme of QUADPACK (via :func:`scipy.integrate.quad`) wrapped in a symmetric,
geometrically growing tail extension, since all integrands in this problem
decay algebraically (1/x^2 or faster) away from the emission line.  Monte
Carlo sphere averages use the counter-based Philox generator so that results
are bit-reproducible for a given seed and independent of how the samples are
sharded across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .core import InputDomainError

__all__ = [
    "QuadratureError",
    "StatisticalPrecisionWarning",
    "QuadratureResult",
    "McEstimate",
    "adaptive_integral",
    "tail_extended_integral",
    "integrate_spectrum_weighted",
    "sphere_directions",
    "sphere_average",
]

# Fixed Monte Carlo chunk size; chunk boundaries (not shard count) define the
# random stream layout, which is what makes results shard-independent.
_MC_CHUNK = 1 << 15


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge; carries the partial result."""

    def __init__(self, message: str, partial: "QuadratureResult | None" = None):
        super().__init__(message)
        self.partial = partial


class StatisticalPrecisionWarning(UserWarning):
    """A Monte Carlo estimate was requested with too few samples."""


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float
    error_estimate: float
    evaluations: int
    converged: bool = True

    def __post_init__(self) -> None:
        if self.error_estimate < 0.0:
            raise InputDomainError("error_estimate must be >= 0")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def _quad_real(f, lo: float, hi: float, tol: float, points) -> tuple[float, float, int]:
    pts = [p for p in points if lo < p < hi] or None
    val, err, info = quad(f, lo, hi, epsabs=tol, epsrel=tol, limit=400,
                          points=pts, full_output=True)[:3]
    return val, err, int(info["neval"])


def adaptive_integral(
    f: Callable[[float], complex],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    points: Sequence[float] = (),
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of a real or complex integrand on [lo, hi]."""
    if not tol > 0.0:
        raise InputDomainError("tol must be positive")
    probe = f(0.5 * (lo + hi))
    if np.iscomplexobj(probe) or isinstance(probe, complex):
        re, err_re, n_re = _quad_real(lambda x: np.real(f(x)), lo, hi, tol, points)
        im, err_im, n_im = _quad_real(lambda x: np.imag(f(x)), lo, hi, tol, points)
        return QuadratureResult(complex(re, im), err_re + err_im, n_re + n_im)
    val, err, n = _quad_real(f, lo, hi, tol, points)
    return QuadratureResult(val, err, n)


def tail_extended_integral(
    f: Callable[[float], complex],
    core_half_width: float,
    tol: float = 1e-10,
    points: Sequence[float] = (),
    center: float = 0.0,
    growth: float = 2.0,
    max_windows: int = 80,
) -> QuadratureResult:
    """Integral over the whole real line by geometric window growth.

    Integrates [center - W, center + W] first, then keeps appending the
    window pairs [W, g*W] and [-g*W, -W] until the latest pair contributes
    less than tol/10 in absolute value.
    """
    if not core_half_width > 0.0:
        raise InputDomainError("core_half_width must be positive")
    core = adaptive_integral(f, center - core_half_width, center + core_half_width, tol, points)
    total, err, neval = core.value, core.error_estimate, core.evaluations
    w = core_half_width
    for _ in range(max_windows):
        right = adaptive_integral(f, center + w, center + growth * w, tol)
        left = adaptive_integral(f, center - growth * w, center - w, tol)
        total = total + right.value + left.value
        err += right.error_estimate + left.error_estimate
        neval += right.evaluations + left.evaluations
        if abs(right.value) + abs(left.value) < 0.1 * tol:
            return QuadratureResult(total, err, neval)
        w *= growth
    raise QuadratureError(
        f"tail did not fall below {0.1 * tol:g} within {max_windows} windows "
        f"(last half-width {w:g})",
        partial=QuadratureResult(total, err, neval, converged=False),
    )


def integrate_spectrum_weighted(
    weight: Callable[[float], complex],
    drive,
    res,
    tol: float = 1e-8,
) -> QuadratureResult:
    """Integral of weight(x) times the inelastic spectral density, in units of eta.

    ``x`` is the frequency offset from the drive, in the same units as
    ``res.gamma``.  With weight == 1 this returns the total inelastic
    intensity s^2/2; resonant weights reproduce the exchange-weighted ladder
    and crossed integrals of the two-atom signal.
    """
    from .single_atom import inelastic_density  # deferred: physics sits one layer up

    if not tol > 0.0:
        raise InputDomainError("tol must be positive")
    half = max(40.0 * res.gamma, 10.0 * abs(drive.delta))
    pts = (-abs(drive.delta), 0.0, abs(drive.delta))
    return tail_extended_integral(
        lambda x: weight(x) * inelastic_density(x, drive, res),
        core_half_width=half,
        tol=tol,
        points=pts,
    )


def _chunk_directions(seed: int, chunk_index: int, count: int) -> np.ndarray:
    # Each full chunk consumes exactly 2*_MC_CHUNK draws (cos(theta), then
    # azimuth), so advancing by the chunk offset pins every chunk's substream
    # regardless of which shard executes it.  Philox.advance counts 256-bit
    # counter steps, i.e. four 64-bit outputs (one float64 draw each).
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(2 * _MC_CHUNK * chunk_index // 4)
    rng = np.random.Generator(bitgen)
    cos_t = 2.0 * rng.random(count) - 1.0
    phi = 2.0 * np.pi * rng.random(count)
    sin_t = np.sqrt(1.0 - cos_t**2)
    return np.column_stack((sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t))


def sphere_directions(samples: int, seed: int) -> np.ndarray:
    """Uniform unit vectors on the sphere, (samples, 3), deterministic per seed."""
    if seed < 0:
        raise InputDomainError("seed must be a nonnegative integer")
    chunks = [
        _chunk_directions(seed, c, min(_MC_CHUNK, samples - c * _MC_CHUNK))
        for c in range((samples + _MC_CHUNK - 1) // _MC_CHUNK)
    ]
    return np.concatenate(chunks, axis=0)


def sphere_average(
    f: Callable[[np.ndarray], np.ndarray],
    samples: int,
    seed: int,
    shards: int = 1,
) -> McEstimate:
    """Monte Carlo mean of f over uniform directions, with standard error.

    ``f`` receives an (n, 3) array of unit vectors and must return n values.
    ``shards`` only assigns chunks to workers; per-chunk sums are always
    reduced in chunk order, so the estimate is bit-identical for any shard
    count at a fixed seed.
    """
    if samples < 100:
        raise InputDomainError(f"samples must be >= 100, got {samples}")
    if shards < 1:
        raise InputDomainError("shards must be >= 1")
    if seed < 0:
        raise InputDomainError("seed must be a nonnegative integer")
    n_chunks = (samples + _MC_CHUNK - 1) // _MC_CHUNK
    partials: list[tuple[float, float] | None] = [None] * n_chunks
    for shard in range(shards):
        for c in range(shard, n_chunks, shards):
            count = min(_MC_CHUNK, samples - c * _MC_CHUNK)
            values = np.asarray(f(_chunk_directions(seed, c, count)), dtype=float)
            if values.shape != (count,):
                raise InputDomainError(
                    f"f must map (n, 3) directions to n values, got shape {values.shape}"
                )
            partials[c] = (float(np.sum(values)), float(np.sum(values**2)))
    s1 = sum(p[0] for p in partials)  # type: ignore[index]
    s2 = sum(p[1] for p in partials)  # type: ignore[index]
    mean = s1 / samples
    if samples > 1:
        var = max(0.0, (s2 - samples * mean**2) / (samples - 1))
        std_error = float(np.sqrt(var / samples))
    else:
        std_error = float("inf")
    return McEstimate(mean=mean, std_error=std_error, samples=samples, seed=seed)
