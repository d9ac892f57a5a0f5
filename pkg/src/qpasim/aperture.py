"""Antenna geometry, beam profiles, overlap integrals, and geometric loss.

The transverse model is one-dimensional along the array axis; the orthogonal
axis is assumed perfectly matched by the antenna design.  Each antenna's
mode function is, by default, the comb of its parallel guiding cores
(n_waveguides strips of waveguide_width inside the antenna footprint), which
reproduces the simulated free-space coupling budget of the reference
hardware; a plain top-hat over the full antenna width is available as an
alternative profile.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from qpasim.receiver import ChannelSettings

MODE_PROFILES = ("comb", "tophat")


@dataclass(frozen=True)
class ApertureGeometry:
    """Linear antenna array geometry and per-antenna parameters."""

    n_antennas: int = 32
    pitch_um: float = 17.5
    antenna_width_um: float = 16.7
    antenna_length_um: float = 597.0
    wavelength_nm: float = 1550.0
    insertion_loss_db: float = 3.78
    element_pattern_fwhm_deg: float = 2.7
    mode_profile: str = "comb"
    n_waveguides: int = 16
    waveguide_width_um: float = 0.82

    def __post_init__(self):
        if self.n_antennas < 1:
            raise ValueError("n_antennas must be >= 1")
        for name in ("pitch_um", "antenna_width_um", "antenna_length_um", "wavelength_nm",
                     "element_pattern_fwhm_deg", "waveguide_width_um"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)
        if self.pitch_um < self.antenna_width_um:
            raise ValueError("pitch must be at least the antenna width")
        if self.mode_profile not in MODE_PROFILES:
            raise ValueError("mode_profile must be one of %s" % (MODE_PROFILES,))
        if self.mode_profile == "comb":
            if self.n_waveguides < 1:
                raise ValueError("n_waveguides must be >= 1")
            if self.n_waveguides * self.waveguide_width_um > self.antenna_width_um + 1e-12:
                raise ValueError("waveguides do not fit inside the antenna width")

    @property
    def wavelength_um(self) -> float:
        return self.wavelength_nm * 1e-3

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.wavelength_um

    @property
    def antenna_centers_um(self) -> np.ndarray:
        return (np.arange(self.n_antennas) - (self.n_antennas - 1) / 2) * self.pitch_um

    @property
    def aperture_halfwidth_um(self) -> float:
        return (self.n_antennas - 1) / 2 * self.pitch_um + self.antenna_width_um / 2

    def mode_segments(self, center_um: float) -> np.ndarray:
        """(start, stop) pairs of the guiding strips of one antenna."""
        if self.mode_profile == "tophat":
            half = self.antenna_width_um / 2
            return np.array([[center_um - half, center_um + half]])
        sub = self.antenna_width_um / self.n_waveguides
        lefts = center_um - self.antenna_width_um / 2 + sub * (np.arange(self.n_waveguides) + 0.5)
        half = self.waveguide_width_um / 2
        return np.stack([lefts - half, lefts + half], axis=1)


@dataclass(frozen=True)
class BeamSpec:
    """Collimated Gaussian beam: 1/e^2 intensity diameter, offset, incidence."""

    diameter_um: float = 200.0
    center_offset_um: float = 0.0
    incidence_angle_deg: float = 0.0

    def __post_init__(self):
        if self.diameter_um <= 0:
            raise ValueError("beam diameter must be positive")

    @property
    def waist_um(self) -> float:
        """1/e^2 intensity radius; the amplitude profile is exp(-x^2/w^2)."""
        return self.diameter_um / 2


@dataclass(frozen=True)
class CouplingVector:
    """Complex per-antenna coupling amplitudes of the incident beam."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if np.sum(np.abs(c) ** 2) > 1.0 + 1e-9:
            raise ValueError("coupled power exceeds unity")
        object.__setattr__(self, "c", c)

    @property
    def n_antennas(self) -> int:
        return self.c.size

    def total_power(self) -> float:
        return float(np.sum(np.abs(self.c) ** 2))


def element_pattern(geometry: ApertureGeometry, theta_deg: float) -> float:
    """Single-antenna power envelope vs incidence angle.

    Smooth even Gaussian parametrized by its full width at half maximum:
    1 at normal incidence, 0.5 at +-fwhm/2.
    """
    ratio = np.asarray(theta_deg, dtype=float) / geometry.element_pattern_fwhm_deg
    return np.exp(-4 * np.log(2) * ratio**2)


def _beam_amplitude(x: np.ndarray, beam: BeamSpec) -> np.ndarray:
    # normalized 1-D amplitude: integral of |u0|^2 over the axis equals 1
    w = beam.waist_um
    norm = (2 / np.pi) ** 0.25 / np.sqrt(w)
    return norm * np.exp(-((x - beam.center_offset_um) ** 2) / w**2)


def _segment_overlaps(segments: np.ndarray, beam: BeamSpec, nodes_per_segment: int) -> float:
    """Composite-trapezoid overlap of the unit-norm strip mode with the beam."""
    total_width = float(np.sum(segments[:, 1] - segments[:, 0]))
    acc = 0.0
    frac = np.linspace(0.0, 1.0, nodes_per_segment)
    for a, b in segments:
        x = a + (b - a) * frac
        acc += np.trapezoid(_beam_amplitude(x, beam), x)
    return acc / np.sqrt(total_width)


def coupling_vector(
    geometry: ApertureGeometry,
    beam: BeamSpec,
    nodes_per_segment: int = 64,
) -> CouplingVector:
    """Complex coupling amplitude of the beam onto each antenna.

    c_j = sqrt(element_pattern(theta)) * 10^(-IL/20) * overlap_j
          * exp(i k x_j sin theta)

    where overlap_j is the quadrature of the beam amplitude against the
    antenna mode function and x_j the antenna center.  The incidence-angle
    phase tilt is applied at the antenna centers; the per-element power
    rolloff is carried by the configured element pattern.
    """
    centers = geometry.antenna_centers_um
    if (
        beam.center_offset_um - 4 * beam.waist_um > geometry.aperture_halfwidth_um
        or beam.center_offset_um + 4 * beam.waist_um < -geometry.aperture_halfwidth_um
    ):
        warnings.warn("beam footprint misses the aperture; couplings are zero", stacklevel=2)
        return CouplingVector(c=np.zeros(geometry.n_antennas, dtype=complex))

    overlaps = np.array(
        [_segment_overlaps(geometry.mode_segments(xc), beam, nodes_per_segment) for xc in centers]
    )
    theta = np.deg2rad(beam.incidence_angle_deg)
    tilt = np.exp(1j * geometry.wavenumber * centers * np.sin(theta))
    amp = np.sqrt(element_pattern(geometry, beam.incidence_angle_deg))
    amp = amp * 10 ** (-geometry.insertion_loss_db / 20)
    return CouplingVector(c=amp * overlaps * tilt)


def deembed_insertion_loss(c: CouplingVector, geometry: ApertureGeometry) -> np.ndarray:
    """Coupling amplitudes with the antenna insertion loss removed."""
    return c.c * 10 ** (geometry.insertion_loss_db / 20)


def geometric_efficiency(c: CouplingVector, weights: ChannelSettings, geometry: ApertureGeometry) -> float:
    """Modal-overlap efficiency of the weighted, combined aperture.

    eta_geo = |sum_j g_j e^{i phi_j} c'_j|^2 / sum_j g_j^2 with the antenna
    insertion loss de-embedded from c (geometric and insertion losses are
    budgeted separately).
    """
    if weights.n_channels != c.n_antennas:
        raise ValueError("weights length must match the coupling vector")
    if not np.any(weights.gains > 0):
        raise ValueError("at least one gain must be nonzero")
    cp = deembed_insertion_loss(c, geometry)
    amp = np.sum(weights.complex_weights() * cp)
    return float(np.abs(amp) ** 2 / np.sum(weights.gains**2))


def geometric_loss(c: CouplingVector, weights: ChannelSettings, geometry: ApertureGeometry) -> float:
    """Geometric loss in dB of the weighted combination (insertion loss excluded)."""
    return -10 * np.log10(geometric_efficiency(c, weights, geometry))


def matched_settings(c: CouplingVector, geometry: ApertureGeometry, amplitude_weights: bool = False) -> ChannelSettings:
    """Gain/phase profile maximizing the geometric efficiency.

    Phases conjugate the coupling phases; with ``amplitude_weights`` the
    gains follow |c'_j| (the Cauchy-Schwarz optimum), otherwise they are
    uniform.
    """
    cp = deembed_insertion_loss(c, geometry)
    gains = np.abs(cp) if amplitude_weights else np.ones(c.n_antennas)
    return ChannelSettings(gains=gains, phases=np.where(cp != 0, -np.angle(cp), 0.0))
