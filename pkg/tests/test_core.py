import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbspair.core import (
    AtomResonance,
    Drive,
    InputDomainError,
    PairGeometry,
    Polarization,
    helicity_matrix_element,
    transverse_projector,
)


def test_projector_along_z():
    np.testing.assert_allclose(transverse_projector([0.0, 0.0, 1.0]), np.diag([1.0, 1.0, 0.0]))


def test_projector_along_x():
    np.testing.assert_allclose(transverse_projector([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 1.0]))


def test_projector_properties_random_orientations():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        proj = transverse_projector(n)
        np.testing.assert_allclose(proj @ proj, proj, atol=1e-12)
        np.testing.assert_allclose(proj, proj.T, atol=1e-12)
        assert abs(np.trace(proj) - 2.0) < 1e-12
        assert np.max(np.abs(proj @ n)) < 1e-12


def test_projector_rejects_non_unit():
    with pytest.raises(InputDomainError):
        transverse_projector([1.0, 1.0, 0.0])


def test_resonance_pole():
    res = AtomResonance(gamma=2.0, omega_at=5.0)
    assert res.omega0 == 5.0 - 1.0j
    assert res.omega0.imag == -res.gamma / 2.0


def test_resonance_requires_positive_gamma():
    with pytest.raises(InputDomainError):
        AtomResonance(gamma=0.0)


@given(
    delta=st.floats(-20.0, 20.0, allow_nan=False),
    s=st.floats(0.0, 0.2, allow_nan=False),
    gamma=st.floats(0.1, 10.0, allow_nan=False),
)
@settings(max_examples=300)
def test_drive_s0_identity(delta, s, gamma):
    drive = Drive(delta=delta, s=s, gamma=gamma)
    assert drive.s0 == (1.0 + 4.0 * (delta / gamma) ** 2) * s


def test_drive_rejects_negative_s():
    with pytest.raises(InputDomainError):
        Drive(delta=0.0, s=-0.1)


def test_circular_polarization_channel():
    eps_l = Polarization.circular()
    eps_d = eps_l.helicity_preserving_detector()
    # eps_L . eps_D* vanishes: no single scattering reaches the detector
    assert abs(np.dot(eps_l.vector, np.conj(eps_d.vector))) < 1e-14
    assert abs(np.vdot(eps_d.vector, eps_d.vector).real - 1.0) < 1e-12


def test_polarization_requires_unit_norm():
    with pytest.raises(InputDomainError):
        Polarization(np.array([1.0, 1.0, 0.0]))


def test_helicity_element_axis_cases():
    eps_l = Polarization.circular()
    assert abs(helicity_matrix_element(eps_l, [0.0, 0.0, 1.0])) < 1e-14
    assert abs(abs(helicity_matrix_element(eps_l, [1.0, 0.0, 0.0])) ** 2 - 0.25) < 1e-12
    n45 = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
    assert abs(abs(helicity_matrix_element(eps_l, n45)) ** 2 - 1.0 / 16.0) < 1e-12


def test_helicity_element_equals_sin4_over_4():
    eps_l = Polarization.circular()
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        sin2 = 1.0 - n[2] ** 2
        value = abs(helicity_matrix_element(eps_l, n)) ** 2
        assert abs(value - 0.25 * sin2**2) < 1e-12


def test_pair_geometry_defaults_and_bounds():
    n = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
    geom = PairGeometry(r12=8.0, n12=n)
    assert geom.r_perp == pytest.approx(8.0 / np.sqrt(2.0))
    assert geom.k_r12 == pytest.approx(16.0 * np.pi)
    assert geom.k_r_perp <= geom.k_r12
    with pytest.raises(InputDomainError):
        PairGeometry(r12=1.0, n12=[0.0, 0.0, 1.0], r_perp=2.0)
    with pytest.raises(InputDomainError):
        PairGeometry(r12=1.0, n12=[0.0, 0.0, 2.0])
