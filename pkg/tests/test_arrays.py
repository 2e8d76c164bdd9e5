"""Array model: steering vectors, band gains, direction densities,
covariances, directivity ratio.

The isotropic-coherence check relies on the closed form for a uniform
spherical field: the cross-term between two omni elements spaced by
distance s at wavenumber k is sin(k s) / (k s) times the gain product.
"""

import numpy as np
import pytest

from cdbeam.arrays import (
    ArraySpec,
    DirectionDensity,
    Transducer,
    covariance_from_density,
    density_from_window,
    gdi,
    steering_matrix,
    steering_vector,
    three_way_array,
    three_way_penalty_breakpoints,
)


def omni(position, sensitivity=1.0):
    # Band edges pushed out of the audio range so gain(f) ~ sensitivity.
    return Transducer(
        position=np.asarray(position, dtype=float),
        band_low_hz=1e-3,
        band_high_hz=1e9,
        sensitivity=sensitivity,
    )


def test_gain_half_power_at_band_edges():
    t = Transducer(position=np.zeros(3), band_low_hz=100.0, band_high_hz=1e9, sensitivity=2.0)
    np.testing.assert_allclose(t.gain(100.0), 2.0 / np.sqrt(2.0), rtol=1e-12)
    t2 = Transducer(position=np.zeros(3), band_low_hz=1e-3, band_high_hz=5000.0, sensitivity=1.0)
    np.testing.assert_allclose(t2.gain(5000.0), 1.0 / np.sqrt(2.0), rtol=1e-12)


def test_gain_monotone_through_band():
    t = Transducer(position=np.zeros(3), band_low_hz=200.0, band_high_hz=4000.0)
    rising = [t.gain(f) for f in (50.0, 100.0, 200.0, 400.0)]
    assert np.all(np.diff(rising) > 0.0)
    falling = [t.gain(f) for f in (2000.0, 4000.0, 8000.0, 16000.0)]
    assert np.all(np.diff(falling) < 0.0)


def test_gain_rolloff_order_steepens_slope():
    shallow = Transducer(position=np.zeros(3), band_low_hz=1000.0, band_high_hz=1e9, rolloff_order=1)
    steep = Transducer(position=np.zeros(3), band_low_hz=1000.0, band_high_hz=1e9, rolloff_order=4)
    assert steep.gain(100.0) < shallow.gain(100.0)


def test_steering_vector_phase_and_magnitude():
    array = ArraySpec(transducers=[omni([1.0, 0.0, 0.0])], speed_of_sound=343.0)
    # One wavelength of path advance: phase wraps to zero.
    d = steering_vector(array, 343.0, np.array([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(d, [1.0 + 0.0j], atol=1e-9)
    # Quarter wavelength: +90 degrees.
    d = steering_vector(array, 85.75, np.array([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(d, [1.0j], atol=1e-12)
    # Broadside: no path difference regardless of frequency.
    d = steering_vector(array, 12345.0, np.array([0.0, 0.0, 1.0]))
    np.testing.assert_allclose(d, [1.0 + 0.0j], atol=1e-12)


def test_steering_magnitude_is_band_gain():
    array = three_way_array()
    d = steering_vector(array, 1000.0, np.array([0.0, 1.0, 0.0]))
    np.testing.assert_allclose(np.abs(d), array.gains(1000.0), rtol=1e-12)


def test_steering_matrix_stacks_rows():
    array = three_way_array()
    dirs = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    m = steering_matrix(array, 500.0, dirs)
    assert m.shape == (2, 3)
    np.testing.assert_allclose(m[0], steering_vector(array, 500.0, dirs[0]))
    np.testing.assert_allclose(m[1], steering_vector(array, 500.0, dirs[1]))


def test_steering_rejects_non_unit_direction():
    array = three_way_array()
    with pytest.raises(ValueError):
        steering_vector(array, 500.0, np.array([2.0, 0.0, 0.0]))


class TestDensities:
    def test_weights_normalized_and_directions_unit(self):
        for kind in ("vonmises-like", "uniform-cap", "full-sphere"):
            density = density_from_window(kind, concentration=3.0)
            np.testing.assert_allclose(density.weights.sum(), 1.0, rtol=1e-12)
            np.testing.assert_allclose(np.linalg.norm(density.directions, axis=1), 1.0, atol=1e-12)

    def test_zero_concentration_matches_full_sphere(self):
        flat = density_from_window("vonmises-like", concentration=0.0)
        sphere = density_from_window("full-sphere")
        np.testing.assert_allclose(flat.weights, sphere.weights, rtol=1e-12)

    def test_concentration_pulls_mass_toward_center(self):
        # For density exp(k cos(theta)) on the sphere, the mass with
        # cos(theta) > t is (e^k - e^(k t)) / (e^k - e^(-k)); at k = 8,
        # t = 0.8 that is 0.79833...
        kappa, cut = 8.0, 0.8
        center = np.array([1.0, 0.0, 0.0])
        density = density_from_window("vonmises-like", center=center, concentration=kappa)
        front = density.directions @ center > cut
        expected = (np.exp(kappa) - np.exp(kappa * cut)) / (np.exp(kappa) - np.exp(-kappa))
        np.testing.assert_allclose(density.weights[front].sum(), expected, rtol=0.02)

    def test_uniform_cap_half_angle(self):
        center = np.array([0.0, 0.0, 1.0])
        concentration = 3.0
        density = density_from_window("uniform-cap", center=center, concentration=concentration)
        half_angle = np.pi / (1.0 + concentration)
        angles = np.arccos(np.clip(density.directions @ center, -1.0, 1.0))
        inside = angles <= half_angle
        assert np.all(density.weights[~inside] == 0.0)
        positive = density.weights[inside]
        # Uniform over the cap: every interior direction carries the same
        # density, so weight variation only reflects quadrature cell area.
        assert positive.min() > 0.0

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            density_from_window("boxcar")

    def test_direction_density_validates_unit_rows(self):
        with pytest.raises(ValueError):
            DirectionDensity(directions=np.array([[2.0, 0.0, 0.0]]), weights=np.array([1.0]))


class TestCovariance:
    def test_hermitian_psd(self):
        array = three_way_array()
        density = density_from_window("vonmises-like", concentration=4.0)
        cov = covariance_from_density(array, 800.0, density)
        np.testing.assert_allclose(cov, cov.conj().T)
        assert np.min(np.linalg.eigvalsh(cov)) >= -1e-14

    def test_isotropic_coherence_closed_form(self):
        spacing = 0.12
        array = ArraySpec(
            transducers=[omni([0.0, 0.0, 0.0]), omni([spacing, 0.0, 0.0], sensitivity=0.5)],
            speed_of_sound=343.0,
        )
        density = density_from_window("full-sphere", n_azimuth=144, n_elevation=64)
        for f in (500.0, 1500.0, 4000.0):
            cov = covariance_from_density(array, f, density)
            ks = 2.0 * np.pi * f * spacing / 343.0
            gains = array.gains(f)
            np.testing.assert_allclose(cov[0, 0], gains[0] ** 2, rtol=1e-10)
            np.testing.assert_allclose(cov[1, 1], gains[1] ** 2, rtol=1e-10)
            expected = gains[0] * gains[1] * np.sin(ks) / ks
            np.testing.assert_allclose(cov[0, 1].real, expected, atol=2e-4)
            np.testing.assert_allclose(cov[0, 1].imag, 0.0, atol=1e-6)


def test_gdi_is_power_ratio():
    a = np.array([[2.0]])
    r = np.array([[1.0]])
    assert gdi(a, r, np.array([1.0 + 0.0j])) == pytest.approx(2.0)
    rng = np.random.default_rng(3)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = m @ m.conj().T
    r = np.eye(4)
    w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    expected = float((w.conj() @ a @ w).real / (w.conj() @ w).real)
    assert gdi(a, r, w) == pytest.approx(expected, rel=1e-12)


def test_gdi_rejects_nonpositive_denominator():
    with pytest.raises(ValueError):
        gdi(np.eye(2), np.zeros((2, 2)), np.array([1.0, 0.0]))


def test_three_way_fixture_shape():
    array = three_way_array()
    assert array.n == 3
    np.testing.assert_allclose(array.positions[0], [-0.09, 0.0, 0.0])
    bands = [(t.band_low_hz, t.band_high_hz) for t in array.transducers]
    assert bands == [(150.0, 1600.0), (70.0, 17000.0), (2200.0, 21000.0)]
    breakpoints = three_way_penalty_breakpoints()
    assert len(breakpoints) == 3
    # The high-frequency unit is released only above its crossover.
    assert breakpoints[2][0] == (60.0, 1e-3)
    assert breakpoints[2][-1] == (20000.0, 1.0)
