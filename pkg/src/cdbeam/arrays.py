"""Synthetic heterogeneous loudspeaker arrays and directivity statistics.

The acoustic model is deliberately lightweight: each transducer is a point
source with a band-pass magnitude response (Butterworth-style skirts of a
configurable order) and a far-field phase term from its position, evaluated
per unit drive at unit distance. Spatial acceptance/rejection windows are
discrete densities on an azimuth x elevation product grid; integrating the
steering outer products against a density yields the Hermitian covariance
matrices whose ratio defines the generalized directivity index (GDI).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import symmetrize

__all__ = [
    "ArraySpec",
    "DirectionDensity",
    "Transducer",
    "covariance_from_density",
    "density_from_window",
    "gdi",
    "steering_matrix",
    "steering_vector",
    "three_way_array",
    "three_way_penalty_breakpoints",
]

SPEED_OF_SOUND = 343.0

_WINDOW_KINDS = ("vonmises-like", "uniform-cap", "full-sphere")


@dataclass
class Transducer:
    """One drive channel: position in meters plus its band-pass response."""

    position: np.ndarray
    band_low_hz: float
    band_high_hz: float
    sensitivity: float = 1.0
    rolloff_order: int = 2

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64).reshape(3)
        if not np.all(np.isfinite(self.position)):
            raise ValueError("transducer position must be finite")
        if not (0.0 < self.band_low_hz < self.band_high_hz):
            raise ValueError(
                f"band edges must satisfy 0 < low < high, got "
                f"({self.band_low_hz}, {self.band_high_hz})"
            )
        if self.sensitivity <= 0.0:
            raise ValueError(f"sensitivity must be positive, got {self.sensitivity}")
        if int(self.rolloff_order) != self.rolloff_order or self.rolloff_order < 1:
            raise ValueError(f"rolloff_order must be a positive integer, got {self.rolloff_order}")
        self.rolloff_order = int(self.rolloff_order)

    def gain(self, frequency_hz: float) -> float:
        """Band-pass magnitude response at one frequency."""
        if frequency_hz <= 0.0:
            raise ValueError(f"frequency must be positive, got {frequency_hz}")
        k2 = 2 * self.rolloff_order
        high_pass = 1.0 / np.sqrt(1.0 + (self.band_low_hz / frequency_hz) ** k2)
        low_pass = 1.0 / np.sqrt(1.0 + (frequency_hz / self.band_high_hz) ** k2)
        return self.sensitivity * high_pass * low_pass


@dataclass
class ArraySpec:
    """An ordered collection of transducers sharing one propagation medium."""

    transducers: list[Transducer]
    speed_of_sound: float = SPEED_OF_SOUND

    def __post_init__(self):
        if len(self.transducers) == 0:
            raise ValueError("array needs at least one transducer")
        if self.speed_of_sound <= 0.0:
            raise ValueError(f"speed of sound must be positive, got {self.speed_of_sound}")

    @property
    def n(self) -> int:
        return len(self.transducers)

    @property
    def positions(self) -> np.ndarray:
        return np.stack([t.position for t in self.transducers])

    def gains(self, frequency_hz: float) -> np.ndarray:
        return np.array([t.gain(frequency_hz) for t in self.transducers])


@dataclass
class DirectionDensity:
    """Discrete density over unit directions; weights normalize to one."""

    directions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.directions = np.asarray(self.directions, dtype=np.float64)
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.directions.ndim != 2 or self.directions.shape[1] != 3:
            raise ValueError(f"directions must be (K, 3), got {self.directions.shape}")
        if self.weights.shape != (self.directions.shape[0],):
            raise ValueError("weights must match the number of directions")
        norms = np.linalg.norm(self.directions, axis=1)
        if np.abs(norms - 1.0).max() > 1e-12:
            raise ValueError("directions must be unit vectors")
        if np.any(self.weights < 0.0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite and nonnegative")
        total = self.weights.sum()
        if total <= 0.0:
            raise ValueError("density has zero total weight")
        self.weights = self.weights / total


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64).reshape(3)
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or abs(norm - 1.0) > 1e-9:
        raise ValueError(f"{name} must be a unit 3-vector (norm {norm})")
    return v / norm


def steering_vector(array: ArraySpec, frequency_hz: float, direction) -> np.ndarray:
    """Complex per-transducer response toward a far-field unit direction.

    Entry n is ``gain_n(f) * exp(+2j*pi*f*(p_n . r)/c)``: the band-pass
    magnitude times the plane-wave phase advance of transducer n's position
    along the look direction.
    """
    r = _unit(direction, "direction")
    return steering_matrix(array, frequency_hz, r[None, :])[0]


def steering_matrix(array: ArraySpec, frequency_hz: float, directions: np.ndarray) -> np.ndarray:
    """Stack of steering vectors, one row per direction."""
    gains = array.gains(frequency_hz)
    delays = array.positions @ np.asarray(directions, dtype=np.float64).T / array.speed_of_sound
    return gains[None, :] * np.exp(2j * np.pi * frequency_hz * delays.T)


def density_from_window(
    kind: str,
    center=(1.0, 0.0, 0.0),
    concentration: float = 0.0,
    n_azimuth: int = 72,
    n_elevation: int = 19,
) -> DirectionDensity:
    """Discretize a spatial window into a normalized direction density.

    The grid is the product of ``n_azimuth`` equispaced azimuths and
    ``n_elevation`` midpoint polar angles, with sin(polar) quadrature
    weights folded into the density.

    Window kinds
    ------------
    ``"vonmises-like"``
        Weight ``exp(concentration * (cos(angle to center) - 1))``; a
        concentration of 0 degrades to the uniform full sphere.
    ``"uniform-cap"``
        Indicator of the spherical cap around the center with half-angle
        ``pi / (1 + concentration)``: concentration 0 covers the whole
        sphere, concentration 1 is a 90-degree cap.
    ``"full-sphere"``
        Uniform over the sphere; center and concentration are ignored.
    """
    if kind not in _WINDOW_KINDS:
        raise ValueError(f"unknown window kind {kind!r}, expected one of {_WINDOW_KINDS}")
    if concentration < 0.0:
        raise ValueError(f"concentration must be nonnegative, got {concentration}")
    if n_azimuth < 1 or n_elevation < 1:
        raise ValueError("grid sizes must be at least 1")

    polar = np.pi * (np.arange(n_elevation) + 0.5) / n_elevation
    azimuth = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    polar_grid, azimuth_grid = np.meshgrid(polar, azimuth, indexing="ij")
    sin_polar = np.sin(polar_grid)
    directions = np.stack(
        [
            sin_polar * np.cos(azimuth_grid),
            sin_polar * np.sin(azimuth_grid),
            np.cos(polar_grid),
        ],
        axis=-1,
    ).reshape(-1, 3)
    # Rounding can leave norms a hair off 1; renormalize exactly.
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    quadrature = sin_polar.reshape(-1)

    if kind == "full-sphere":
        window = np.ones_like(quadrature)
    else:
        c = _unit(center, "center")
        cos_angle = directions @ c
        if kind == "vonmises-like":
            window = np.exp(concentration * (cos_angle - 1.0))
        else:
            half_angle = np.pi / (1.0 + concentration)
            window = (cos_angle >= np.cos(half_angle)).astype(np.float64)

    weights = quadrature * window
    if weights.sum() <= 0.0:
        raise ValueError(f"{kind} window has no support on this grid")
    return DirectionDensity(directions=directions, weights=weights)


def covariance_from_density(
    array: ArraySpec, frequency_hz: float, density: DirectionDensity
) -> np.ndarray:
    """Hermitian PSD covariance ``sum_k w_k d(r_k) d(r_k)^H``."""
    d = steering_matrix(array, frequency_hz, density.directions)
    cov = d.T @ (density.weights[:, None] * d.conj())
    return symmetrize(cov)


def gdi(a: np.ndarray, r: np.ndarray, w: np.ndarray) -> float:
    """Generalized directivity index ``w^H a w / w^H r w`` (linear ratio).

    Callers report this in dB as ``10*log10(gdi(...))``.
    """
    w = np.asarray(w, dtype=np.complex128).ravel()
    num = (w.conj() @ np.asarray(a) @ w).real
    den = (w.conj() @ np.asarray(r) @ w).real
    if den <= 0.0:
        raise ValueError(f"denominator form is not positive (got {den:.3e})")
    return float(num / den)


def three_way_array() -> ArraySpec:
    """Reference synthetic three-way array: mid-range, full-range, tweeter.

    Geometry spans about 18 cm horizontally so the audio band covers both
    the sub-wavelength regime (low frequencies, GDI necessarily small) and
    the multi-wavelength regime; band edges overlap enough that at least
    one transducer is live everywhere in 60 Hz - 20 kHz.
    """
    return ArraySpec(
        transducers=[
            Transducer(position=(-0.09, 0.0, 0.0), band_low_hz=150.0, band_high_hz=1600.0, sensitivity=1.1),
            Transducer(position=(0.0, 0.05, 0.0), band_low_hz=70.0, band_high_hz=17000.0, sensitivity=1.0),
            Transducer(position=(0.09, 0.0, 0.02), band_low_hz=2200.0, band_high_hz=21000.0, sensitivity=0.9),
        ]
    )


def three_way_penalty_breakpoints() -> list[list[tuple[float, float]]]:
    """Per-transducer (frequency, lambda) breakpoints matching the three-way
    array: each transducer is released (lambda 1) in its pass band and
    clamped down to 1e-3 outside it, with log-frequency ramps between."""
    return [
        [(60.0, 1.0), (1600.0, 1.0), (3200.0, 1e-3), (20000.0, 1e-3)],
        [(60.0, 1.0), (20000.0, 1.0)],
        [(60.0, 1e-3), (1100.0, 1e-3), (2200.0, 1.0), (20000.0, 1.0)],
    ]
