"""
Mode-matching coefficients between the laser mode and the vacuum mode.

Two geometries are covered:

* detector-waist: the vacuum mode has its waist ``w0`` on the detector,
  travels to the mirror and back (``2 z1`` in total) and is compared with
  itself. The coefficient is ``mu``.
* mirror-waist: the vacuum mode has its waist ``wm`` on the mirror and is
  compared on the detector with the laser mode (waist ``w0`` there). The
  coefficient is the effective reflectance amplitude ``sqrt(Rm)``.

Closed forms (:func:`mu_closed`, :func:`rm_closed`) are what the rest of the
package uses. :func:`overlap_numeric` evaluates the transverse overlap
integral by quadrature and exists to cross-check them.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .beam_optics import GaussianBeam, beam_width, field_amplitude, rayleigh_range
from .errors import ParameterError, QuadratureError

#: Radial cutoff in units of the wider beam's radius.
RHO_MAX_WIDTHS = 8.0
QUAD_EPSABS = 1e-8
QUAD_LIMIT = 1000


class InnerProductKind(enum.Enum):
    """Normalization used by :func:`overlap_numeric`.

    ``CONJUGATED`` is the usual mode overlap, normalized by the powers
    ``int |E|^2``. ``PAPER_NONCONJUGATED`` normalizes by ``|int E^2|``,
    the squares written without complex conjugation.
    """

    CONJUGATED = "conjugated"
    PAPER_NONCONJUGATED = "paper_nonconjugated"


def mu_closed(z1, z0):
    """Counter-propagating mode match for a vacuum waist on the detector.

    Evaluated as written,
    ``(1 + 4u^2)^(1/4) / (1 + 5u^2 + 4u^4)^(1/4)`` with ``u = z1/z0``,
    which factorizes to ``(1 + u^2)^(-1/4)``.
    """
    if np.any(np.asarray(z1) < 0):
        raise ParameterError("z1", "mirror distance must be >= 0")
    if np.any(np.asarray(z0) <= 0):
        raise ParameterError("z0", "Rayleigh range must be > 0")
    u2 = (z1 / z0) ** 2
    return (1 + 4 * u2) ** 0.25 / (1 + 5 * u2 + 4 * u2**2) ** 0.25


def rm_closed(z1, w0, wm, wavelength=1.0):
    """Effective reflectance amplitude ``sqrt(Rm)`` for a vacuum waist on the mirror.

    Parameters
    ----------
    z1 : float or array_like
        Mirror-to-detector distance.
    w0 : float
        Laser waist radius, located on the detector.
    wm : float
        Vacuum waist radius, located on the mirror.
    wavelength : float

    Returns
    -------
    float or ndarray
        Value in (0, 1]; equals 1 only for ``wm == w0`` and ``z1 == 0``.
    """
    if np.any(np.asarray(z1) < 0):
        raise ParameterError("z1", "mirror distance must be >= 0")
    for name, value in (("w0", w0), ("wm", wm), ("wavelength", wavelength)):
        if np.any(np.asarray(value) <= 0):
            raise ParameterError(name, "must be > 0")
    z0 = np.pi * w0**2 / wavelength
    zm = np.pi * wm**2 / wavelength
    grow_m = 1 + (z1 / zm) ** 2
    num = np.sqrt(2) * np.sqrt(wm / w0) * grow_m**0.25
    den = (((1 + (wm / w0) ** 2) ** 2 + (z1 / z0) ** 2) * grow_m) ** 0.25
    return num / den


def _radial_integral(func, upper, breakpoints):
    """Complex ``int_0^upper func(t) t dt`` with a convergence check."""
    parts = []
    for take in (np.real, np.imag):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            result = integrate.quad(
                lambda t: take(func(t)) * t,
                0.0,
                upper,
                epsabs=QUAD_EPSABS * 1e-4,
                epsrel=1e-11,
                limit=QUAD_LIMIT,
                points=breakpoints,
                full_output=1,
            )
        # ier == 1: subdivision cap reached; roundoff flags on ~0 parts are benign
        if len(result) > 3 and result[2]["last"] >= QUAD_LIMIT:
            raise QuadratureError(
                f"radial overlap integral did not converge in {QUAD_LIMIT} subdivisions"
            )
        value = result[0]
        parts.append(value)
    return complex(parts[0], parts[1])


def overlap_numeric(beam_a: GaussianBeam, plane_offset_a, beam_b: GaussianBeam,
                    plane_offset_b, kind=InnerProductKind.CONJUGATED) -> float:
    """Normalized transverse overlap of two coaxial modes by quadrature.

    The evaluation plane lies ``plane_offset_a`` from the waist of
    ``beam_a`` and ``plane_offset_b`` from the waist of ``beam_b``. The
    integral runs over ``rho`` in ``[0, 8 max(w_a, w_b)]`` where ``w_x`` is
    each beam's radius on that plane.

    Raises
    ------
    QuadratureError
        If adaptive subdivision hits its cap.
    """
    kind = InnerProductKind(kind)
    wa = float(beam_width(beam_a, plane_offset_a))
    wb = float(beam_width(beam_b, plane_offset_b))
    scale = max(wa, wb)
    upper = RHO_MAX_WIDTHS
    # narrow beam features near the axis when one beam is much wider
    breakpoints = sorted({min(wa, wb) / scale, 1.0})

    def ea(t):
        return field_amplitude(beam_a, t * scale, plane_offset_a)

    def eb(t):
        return field_amplitude(beam_b, t * scale, plane_offset_b)

    cross = _radial_integral(lambda t: ea(t) * np.conj(eb(t)), upper, breakpoints)
    if kind is InnerProductKind.CONJUGATED:
        na = _radial_integral(lambda t: abs(ea(t)) ** 2, upper, breakpoints).real
        nb = _radial_integral(lambda t: abs(eb(t)) ** 2, upper, breakpoints).real
    else:
        na = abs(_radial_integral(lambda t: ea(t) ** 2, upper, breakpoints))
        nb = abs(_radial_integral(lambda t: eb(t) ** 2, upper, breakpoints))
    return abs(cross) / np.sqrt(na * nb)


@dataclass(frozen=True)
class OverlapScenario:
    """Laser and vacuum modes plus the detector-to-mirror distance.

    For the detector-waist geometry both beams have their waist on the
    detector. For the mirror-waist geometry ``vacuum_beam`` holds the
    mirror waist ``wm``.
    """

    laser_beam: GaussianBeam
    vacuum_beam: GaussianBeam
    mirror_distance: float

    def __post_init__(self):
        if not self.mirror_distance >= 0:
            raise ParameterError("z1", f"mirror distance must be >= 0, got {self.mirror_distance!r}")
        if self.laser_beam.wavelength != self.vacuum_beam.wavelength:
            raise ParameterError("wavelength", "laser and vacuum beams must share a wavelength")

    @classmethod
    def detector_waist(cls, w0, z1, wavelength=1.0):
        beam = GaussianBeam(w0, 0.0, wavelength)
        return cls(beam, beam, z1)

    @classmethod
    def mirror_waist(cls, w0, wm, z1, wavelength=1.0):
        return cls(GaussianBeam(w0, 0.0, wavelength), GaussianBeam(wm, z1, wavelength), z1)


def mu_effective(scenario: OverlapScenario, method="closed_form", kind=InnerProductKind.CONJUGATED):
    """``mu`` from the closed form or from quadrature (``method="numeric"``)."""
    z1 = scenario.mirror_distance
    if method == "closed_form":
        return float(mu_closed(z1, rayleigh_range(scenario.vacuum_beam)))
    if method == "numeric":
        beam = scenario.vacuum_beam
        return overlap_numeric(beam, 0.0, beam, 2 * z1, kind)
    raise ValueError(f"unknown method {method!r}")


def rm_effective(scenario: OverlapScenario, method="closed_form", kind=InnerProductKind.CONJUGATED):
    """``sqrt(Rm)`` for the mirror-waist geometry, closed form or quadrature."""
    z1 = scenario.mirror_distance
    laser, vac = scenario.laser_beam, scenario.vacuum_beam
    if method == "closed_form":
        return float(rm_closed(z1, laser.waist_radius, vac.waist_radius, laser.wavelength))
    if method == "numeric":
        # vacuum waist sits on the mirror, z1 away from the detector plane
        return overlap_numeric(vac, z1, laser, 0.0, kind)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ModeMatchGeometry:
    """Waists that set ``mu`` and ``sqrt(Rm)`` as functions of ``z1``.

    ``w0`` is used for both the laser and the detector-waist vacuum mode;
    ``wm`` is the mirror-waist vacuum mode. When ``wm`` is None the
    effective reflectance is left to the caller.
    """

    w0: float
    wm: float | None = None
    wavelength: float = 1.0

    def mu(self, z1):
        return mu_closed(z1, np.pi * self.w0**2 / self.wavelength)

    def sqrt_rm(self, z1):
        if self.wm is None:
            return None
        return rm_closed(z1, self.w0, self.wm, self.wavelength)
