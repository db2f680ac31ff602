import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbspair.core import AtomResonance, Drive, ValidityWarning
from cbspair.coherence import (
    asymmetry_factor,
    averaged_pattern,
    closed_gamma,
    closed_gamma_pair,
    cone_panels,
    cone_shape,
    detector_state_overlap,
    distinct_linewidth_check,
    fixed_frequency_pattern,
    fixed_phase_shift,
    path_amplitudes,
    total_pattern,
)
from cbspair.numerics import sphere_average
from cbspair.two_atom import inelastic_crossed, inelastic_ladder

RES = AtomResonance()
THETA = np.linspace(-0.03, 0.03, 241)


def omega_l(drive):
    return RES.omega_at + drive.delta


def test_path_amplitudes_coincide_on_elastic_line():
    drive = Drive(delta=0.0, s=0.1)
    e_one, e_two = path_amplitudes(omega_l(drive), 0.0, drive, RES, kr_perp=100.0)
    assert e_one == pytest.approx(e_two)


def test_path_amplitude_ratio_is_theta_independent():
    drive = Drive(delta=1.0, s=0.1)
    omega_d = omega_l(drive) + 0.8
    a = drive.delta + 0.5j
    expected = abs(a) / abs(0.8 + a)
    for theta in (0.0, 0.01, -0.02):
        e_one, e_two = path_amplitudes(omega_d, theta, drive, RES, kr_perp=100.0)
        assert abs(e_one / e_two) == pytest.approx(expected, rel=1e-12)


def test_fixed_phase_shift_closed_form():
    # detected photon on the bare resonance, drive one linewidth above it
    drive = Drive(delta=1.0, s=0.1)
    phi0 = fixed_phase_shift(RES.omega_at, drive, RES)
    assert np.tan(phi0) == pytest.approx(2.0, rel=1e-12)
    assert -np.pi < phi0 <= np.pi


def test_fixed_pattern_contrast_and_extremes():
    kr_perp = 300.0
    drive = Drive(delta=0.0, s=0.1)
    # elastic line, zero detuning: equal amplitudes, full contrast between
    # the exact extremal angles 0 and pi/(k r_perp)
    extremes = fixed_frequency_pattern(
        omega_l(drive), drive, RES, kr_perp, np.array([0.0, np.pi / kr_perp])
    )
    contrast = (extremes[0] - extremes[1]) / (extremes[0] + extremes[1])
    assert contrast == pytest.approx(1.0, abs=1e-12)

    drive = Drive(delta=1.0, s=0.1)
    omega_d = RES.omega_at  # unequal path amplitudes
    e_one, e_two = path_amplitudes(omega_d, 0.0, drive, RES, kr_perp)
    floor = (abs(e_one) - abs(e_two)) ** 2
    ceil = (abs(e_one) + abs(e_two)) ** 2
    phi0 = fixed_phase_shift(omega_d, drive, RES)
    theta_min = (np.pi - phi0) / kr_perp
    theta_max = -phi0 / kr_perp
    values = fixed_frequency_pattern(
        omega_d, drive, RES, kr_perp, np.array([theta_min, theta_max])
    )
    assert values[0] == pytest.approx(floor, abs=1e-9 * ceil)
    assert values[1] == pytest.approx(ceil, abs=1e-9 * ceil)
    curve = fixed_frequency_pattern(omega_d, drive, RES, kr_perp, THETA)
    assert np.all(curve >= floor - 1e-12 * ceil)
    assert np.all(curve <= ceil * (1.0 + 1e-12))


def test_fixed_pattern_maximum_displaced_off_axis():
    # nonzero detuning shifts the single-assignment fringe away from theta = 0
    drive = Drive(delta=1.0, s=0.1)
    curve = fixed_frequency_pattern(RES.omega_at, drive, RES, 300.0, THETA)
    assert abs(THETA[int(np.argmax(curve))]) > 1e-4


def test_overlap_closed_forms():
    for delta in (0.0, 0.3, 1.0, 2.0, 5.0):
        overlap = detector_state_overlap(Drive(delta=delta, s=0.1), RES, tol=1e-11)
        assert overlap.gamma == pytest.approx(closed_gamma(delta), rel=1e-6)
        assert np.tan(overlap.phase) == pytest.approx(2.0 * delta / 3.0, abs=1e-6)
        assert overlap.intensity_ratio == pytest.approx(0.75 + delta**2, rel=1e-6)


def test_overlap_examples_at_zero_detuning():
    overlap = detector_state_overlap(Drive(delta=0.0, s=0.1), RES, tol=1e-11)
    assert overlap.gamma == pytest.approx(np.sqrt(3.0) / 2.0, rel=1e-6)
    assert abs(overlap.phase) < 1e-9
    assert overlap.intensity_ratio == pytest.approx(0.75, rel=1e-6)


def test_closed_gamma_values_and_limit():
    assert closed_gamma(0.0) == pytest.approx(np.sqrt(3.0) / 2.0)
    assert closed_gamma(1.0) == pytest.approx(np.sqrt(13.0 / 28.0))
    assert closed_gamma(1e6) == pytest.approx(0.5, abs=1e-9)


def test_averaged_pattern_matches_quadrature_and_fringe():
    drive = Drive(delta=1.0, s=0.1)
    pattern = averaged_pattern(drive, RES, 300.0, THETA)
    i_one, i_two, _ = inelastic_ladder(drive, RES)
    assert pattern.i_one == i_one and pattern.i_two == i_two
    # contrast equals 2 sqrt(I_I I_II) gamma
    half_swing = 0.5 * (pattern.intensity.max() - pattern.intensity.min())
    assert half_swing == pytest.approx(2.0 * np.sqrt(i_one * i_two) * pattern.gamma, rel=1e-3)
    # generally not symmetric about theta = 0
    assert not np.allclose(pattern.intensity, pattern.intensity[::-1], rtol=1e-6)


@given(delta=st.floats(0.0, 6.0, allow_nan=False))
@settings(max_examples=200)
def test_coherence_bounds_and_ordering(delta):
    g = closed_gamma(delta)
    gp = closed_gamma_pair(delta)
    assert 0.0 <= g <= 1.0
    assert 0.0 <= gp <= 1.0
    assert gp <= g + 1e-12


def test_asymmetry_factor_above_96_percent_below_one_linewidth():
    for delta in np.linspace(0.0, 0.999, 40):
        assert asymmetry_factor(Drive(delta=float(delta), s=0.1), RES) >= 0.96


def test_total_pattern_values_and_identities():
    for delta, expected in ((0.0, 6.0 / 7.0), (1.0, 6.0 / 11.0)):
        drive = Drive(delta=delta, s=0.1)
        pattern = total_pattern(drive, RES, 300.0, THETA)
        assert pattern.gamma_pair == pytest.approx(expected, abs=1e-9)
        _, _, l_in = inelastic_ladder(drive, RES)
        c_in = inelastic_crossed(drive, RES)
        assert pattern.gamma_pair == pytest.approx(c_in / l_in, abs=1e-12)
        assert pattern.gamma_pair == pytest.approx((l_in + c_in) / l_in - 1.0, abs=1e-12)
        # symmetric with its maximum at exact backscattering
        assert np.allclose(pattern.intensity, pattern.intensity[::-1], rtol=0.0, atol=1e-15)
        assert int(np.argmax(pattern.intensity)) == THETA.size // 2


def test_cone_shape_center_and_first_zero():
    drive = Drive(delta=0.0, s=0.1)
    k_r12 = 50.0
    assert cone_shape(drive, RES, k_r12, np.array([0.0]))[0] == inelastic_crossed(drive, RES)
    first_zero = np.pi / k_r12
    assert abs(cone_shape(drive, RES, k_r12, np.array([first_zero]))[0]) < 1e-15


def test_cone_shape_warns_when_pair_is_close():
    with pytest.warns(ValidityWarning):
        cone_shape(Drive(delta=0.0, s=0.1), RES, 5.0, np.array([0.0]))


def test_cone_shape_monte_carlo_oracle():
    drive = Drive(delta=0.0, s=0.1)
    k_r12 = 50.0
    thetas = np.linspace(0.02, 0.25, 8)
    profile = cone_shape(drive, RES, k_r12, thetas)
    c0 = inelastic_crossed(drive, RES)
    for j, theta in enumerate(thetas):
        q = k_r12 * theta
        est = sphere_average(lambda d: np.cos(q * d[:, 2]), 50_000, seed=40 + j)
        assert abs(c0 * est.mean - profile[j]) <= 3.0 * c0 * est.std_error


def test_flat_response_restores_full_coherence():
    for delta in (0.0, 2.0):
        overlap = distinct_linewidth_check(RES, RES, Drive(delta=delta, s=0.1), flat=True)
        assert overlap.gamma == pytest.approx(1.0, abs=1e-6)


def test_wide_elastic_atom_approaches_flat_response():
    wide = AtomResonance(gamma=1000.0)
    overlap = distinct_linewidth_check(RES, wide, Drive(delta=0.0, s=0.1))
    assert overlap.gamma >= 0.999


def test_equal_linewidths_reduce_to_standard_overlap():
    overlap = distinct_linewidth_check(RES, RES, Drive(delta=1.0, s=0.1))
    assert overlap.gamma == pytest.approx(closed_gamma(1.0), rel=1e-6)


def test_retained_propagation_phase_degrades_coherence():
    drive = Drive(delta=0.0, s=0.1)
    theta = np.linspace(-0.01, 0.01, 101)
    reference = cone_panels(drive, RES, 300.0, 2.0 / 3.0, RES.omega_at, theta)
    dephased = cone_panels(drive, RES, 300.0, 2.0 / 3.0, RES.omega_at, theta, gamma_r12=2.0)
    assert dephased.gamma < reference.gamma
    assert reference.gamma == pytest.approx(closed_gamma(0.0), rel=1e-6)


def test_cone_panels_assembles_all_three_stages():
    drive = Drive(delta=1.0, s=0.1)
    k_r12 = 2.0 * np.pi * 8.0
    kr_perp = k_r12 * 2.0 / 3.0
    theta = np.linspace(-3.0 * np.pi / kr_perp, 3.0 * np.pi / kr_perp, 241)
    panels = cone_panels(drive, RES, k_r12, 2.0 / 3.0, RES.omega_at, theta)
    assert panels.fixed.max() == pytest.approx(1.0)
    center = theta.size // 2
    _, _, l_in = inelastic_ladder(drive, RES)
    assert panels.position_averaged[center] == pytest.approx(
        l_in + inelastic_crossed(drive, RES), rel=1e-6
    )
    # spectrum-averaged contrast equals 2 sqrt(I_I I_II) gamma
    swing = 0.5 * (panels.averaged.max() - panels.averaged.min())
    assert swing == pytest.approx(
        2.0 * np.sqrt(panels.i_one * panels.i_two) * panels.gamma, rel=1e-3
    )
