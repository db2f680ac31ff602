"""Coherent backscattering of light by a pair of weakly saturated two-level atoms.

The library computes the two-photon photodetection signal of two distant
atoms driven by a quasi-monochromatic laser, to second order in the
saturation parameter: the inelastic emission spectrum, the ladder and crossed
double-scattering terms in the helicity preserving channel, the
backscattering enhancement factor, and the degree of coherence between the
reversed scattering paths, together with the scalar-photon variant.  Every
closed form is paired with an independent quadrature or Monte Carlo oracle
(:mod:`cbspair.numerics`, :mod:`cbspair.verify`).

A FastAPI service (:mod:`cbspair.service`) exposes the curve and
verification endpoints; the ``cbspair`` command line is a thin client that
runs against the in-process service by default or a remote one via
``--server``.
"""

__version__ = "0.1.0"

from .core import (
    AtomResonance,
    Drive,
    InputDomainError,
    PairGeometry,
    Polarization,
    ValidityDomainError,
    ValidityWarning,
    helicity_matrix_element,
    transverse_projector,
)
from .numerics import (
    McEstimate,
    QuadratureError,
    QuadratureResult,
    StatisticalPrecisionWarning,
    integrate_spectrum_weighted,
    sphere_average,
)
from .single_atom import (
    GridCoverageWarning,
    SpectralDensity,
    bloch_intensities,
    inelastic_spectrum,
    single_atom_intensities,
    t1_amplitude,
    t2_kernel,
)
from .two_atom import (
    CbsSignal,
    EtaTildeEstimate,
    ExchangeFactor,
    alpha_large_detuning,
    alpha_linear,
    cbs_signal,
    enhancement_factor,
    etatilde_prefactor,
    exchange_factor,
    gamma_total_large_detuning,
    inelastic_crossed,
    inelastic_ladder,
    ladder_crossed_elastic,
)
from .coherence import (
    averaged_pattern,
    cone_panels,
    cone_shape,
    detector_state_overlap,
    distinct_linewidth_check,
    fixed_frequency_pattern,
    path_amplitudes,
    total_pattern,
)
from .scalar import scalar_constants, scalar_exchange_factor, scalar_signal

__all__ = [
    "__version__",
    "AtomResonance",
    "Drive",
    "Polarization",
    "PairGeometry",
    "InputDomainError",
    "ValidityDomainError",
    "ValidityWarning",
    "transverse_projector",
    "helicity_matrix_element",
    "QuadratureResult",
    "QuadratureError",
    "McEstimate",
    "StatisticalPrecisionWarning",
    "integrate_spectrum_weighted",
    "sphere_average",
    "GridCoverageWarning",
    "SpectralDensity",
    "t1_amplitude",
    "t2_kernel",
    "inelastic_spectrum",
    "single_atom_intensities",
    "bloch_intensities",
    "ExchangeFactor",
    "CbsSignal",
    "EtaTildeEstimate",
    "exchange_factor",
    "ladder_crossed_elastic",
    "inelastic_ladder",
    "inelastic_crossed",
    "enhancement_factor",
    "cbs_signal",
    "alpha_large_detuning",
    "alpha_linear",
    "gamma_total_large_detuning",
    "etatilde_prefactor",
    "path_amplitudes",
    "fixed_frequency_pattern",
    "detector_state_overlap",
    "averaged_pattern",
    "total_pattern",
    "cone_shape",
    "cone_panels",
    "distinct_linewidth_check",
    "scalar_constants",
    "scalar_exchange_factor",
    "scalar_signal",
]
