"""
Fundamental-mode Gaussian beam propagation.

Lengths are in units of the wavelength unless a different ``wavelength``
is given. Every function takes ``z`` measured from the beam's own waist;
use :meth:`GaussianBeam.local` to convert a lab-frame coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class GaussianBeam:
    """Transverse TEM00 mode.

    Parameters
    ----------
    waist_radius : float
        1/e field radius at the waist.
    waist_position : float
        Lab-frame axial coordinate of the waist.
    wavelength : float
        Vacuum wavelength (default 1, i.e. lengths in wavelengths).
    """

    waist_radius: float
    waist_position: float = 0.0
    wavelength: float = 1.0

    def __post_init__(self):
        if not self.waist_radius > 0:
            raise ParameterError("waist_radius", f"must be > 0, got {self.waist_radius!r}")
        if not self.wavelength > 0:
            raise ParameterError("wavelength", f"must be > 0, got {self.wavelength!r}")

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.wavelength

    def local(self, z_lab):
        """Axial distance from the waist for a lab-frame coordinate."""
        return z_lab - self.waist_position


def rayleigh_range(beam: GaussianBeam) -> float:
    """Rayleigh range ``pi * w0**2 / wavelength``."""
    return np.pi * beam.waist_radius**2 / beam.wavelength


def beam_width(beam: GaussianBeam, z):
    """1/e field radius at distance ``z`` from the waist."""
    z0 = rayleigh_range(beam)
    return beam.waist_radius * np.sqrt(1 + (z / z0) ** 2)


def inverse_curvature(beam: GaussianBeam, z):
    """Wavefront curvature ``1/R(z) = z / (z**2 + z0**2)``.

    Returned as the inverse so the flat wavefront at the waist is a plain 0
    instead of an infinite radius.
    """
    z0 = rayleigh_range(beam)
    return z / (z**2 + z0**2)


def gouy_phase(beam: GaussianBeam, z):
    return np.arctan(z / rayleigh_range(beam))


def field_amplitude(beam: GaussianBeam, rho, z):
    """Complex scalar field of the mode, unit amplitude on axis at the waist.

    Parameters
    ----------
    beam : GaussianBeam
    rho : float or array_like
        Radial distance from the axis.
    z : float
        Distance from the waist.

    Returns
    -------
    complex or ndarray of complex
    """
    k = beam.wavenumber
    w = beam_width(beam, z)
    envelope = beam.waist_radius / w * np.exp(-(rho**2) / w**2)
    phase = -k * z - 0.5 * k * rho**2 * inverse_curvature(beam, z) + gouy_phase(beam, z)
    return envelope * np.exp(1j * phase)
