"""
Closed-form photocurrent fluctuation with a mirror behind the open port.

All variances are in the normalized units of :mod:`vacmirror.mode_network`:
the shot-noise level of the transmitted laser is ``|alpha|^2 T / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .mode_network import OpticalNetworkParams

SUB_POISSON_SLACK = 1e-12


@dataclass(frozen=True)
class LaserModel:
    """Local oscillator: amplitude ``|alpha|``, phase, carrier wavenumber, Gaussian linewidth."""

    amplitude: float = 1.0
    phase: float = 0.0
    k0: float = 2 * np.pi
    linewidth: float = 0.0

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ParameterError("alpha", f"must be >= 0, got {self.amplitude!r}")
        if not self.k0 > 0:
            raise ParameterError("k0", f"must be > 0, got {self.k0!r}")
        if not self.linewidth >= 0:
            raise ParameterError("dk", f"must be >= 0, got {self.linewidth!r}")

    @classmethod
    def from_wavelength(cls, wavelength=1.0, **kwargs):
        return cls(k0=2 * np.pi / wavelength, **kwargs)

    @property
    def shot_noise(self):
        """``|alpha|^2 / 2``; multiply by ``T`` for the detected baseline."""
        return self.amplitude**2 / 2


@dataclass(frozen=True)
class DetectorModel:
    """Absorbing layer with coefficient ``kappa`` and active depth ``D``.

    A photon is converted at depth ``eta`` with density ``kappa exp(-kappa eta)``.
    """

    kappa: float
    depth: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ParameterError("kappa", f"must be > 0, got {self.kappa!r}")
        if not self.depth >= 0:
            raise ParameterError("D", f"must be >= 0, got {self.depth!r}")

    @property
    def absorbed_fraction(self):
        return -np.expm1(-self.kappa * self.depth)


def _interference(p: OpticalNetworkParams):
    return 2 * p.mu * p.R * np.sqrt(p.Rm)


def ideal_variance(p: OpticalNetworkParams, laser: LaserModel) -> float:
    """``|alpha|^2 T/2 * (1 + mu^2 - 2 mu R sqrt(Rm) cos(2 k0 z1))``."""
    base = laser.shot_noise * p.T
    return base * (1 + p.mu**2 - _interference(p) * np.cos(2 * laser.k0 * p.z1))


def detector_response_factor(det: DetectorModel, k0, z1):
    """Standing-wave modulation averaged over the absorption profile.

    Closed form of ``int_0^D kappa e^{-kappa eta} cos(2 k0 (z1 + eta)) d eta``.
    """
    kappa, depth = det.kappa, det.depth
    phi0 = np.arctan(2 * k0 / kappa)
    near = np.cos(2 * k0 * z1 + phi0)
    far = np.exp(-kappa * depth) * np.cos(2 * k0 * (z1 + depth) + phi0)
    return kappa * (near - far) / np.sqrt(4 * k0**2 + kappa**2)


def coherence_envelope(laser: LaserModel, z1):
    return np.exp(-(z1**2) * laser.linewidth**2)


def practical_variance(p: OpticalNetworkParams, laser: LaserModel, det: DetectorModel) -> float:
    """Variance including the laser linewidth and the finite absorbing layer."""
    base = laser.shot_noise * p.T
    modulation = coherence_envelope(laser, p.z1) * detector_response_factor(det, laser.k0, p.z1)
    return base * (1 + p.mu**2 - _interference(p) * modulation)


def normalized_variance(p: OpticalNetworkParams, laser: LaserModel, det: DetectorModel | None = None,
                        model="ideal") -> float:
    """Variance divided by the shot-noise baseline ``|alpha|^2 T / 2``.

    Values below 1 mark sub-Poissonian operation.
    """
    base = laser.shot_noise * p.T
    if base == 0:
        raise ParameterError("alpha", "|alpha|^2 T is zero; no shot-noise baseline to normalize by")
    if model == "ideal":
        return ideal_variance(p, laser) / base
    if model == "practical":
        if det is None:
            raise ParameterError("detector", "practical model needs a DetectorModel")
        return practical_variance(p, laser, det) / base
    raise ParameterError("model", f"must be 'ideal' or 'practical', got {model!r}")


@dataclass(frozen=True)
class ScanPoint:
    z1: float
    mu: float
    sqrt_rm: float
    normalized_variance: float
    is_sub_poisson: bool


@dataclass(frozen=True)
class ScanResult:
    points: tuple
    coupling: str

    @property
    def minimum(self) -> ScanPoint:
        return min(self.points, key=lambda pt: pt.normalized_variance)

    @property
    def sub_poisson_points(self):
        return [pt for pt in self.points if pt.is_sub_poisson]


def sub_poisson_scan(template: OpticalNetworkParams, laser: LaserModel, z_range, samples: int,
                     det: DetectorModel | None = None, model="ideal", geometry=None) -> ScanResult:
    """Scan the mirror distance and flag sub-Poissonian points.

    Parameters
    ----------
    template : OpticalNetworkParams
        Supplies ``T`` and, without ``geometry``, fixed ``mu`` and ``Rm``.
        Its ``z1`` is ignored.
    z_range : (float, float)
        Inclusive range of ``z1``, sampled uniformly.
    samples : int
        Number of points, at least 2.
    geometry : ModeMatchGeometry, optional
        When given, ``mu`` (and ``sqrt(Rm)`` if the geometry has a mirror
        waist) follow ``z1`` through the closed-form overlaps.
    """
    if samples < 2:
        raise ParameterError("samples", f"need at least 2, got {samples!r}")
    start, stop = z_range
    if not stop > start:
        raise ParameterError("z_range", f"empty range {z_range!r}")
    coupling = "fixed" if geometry is None else "geometry"
    points = []
    for z1 in np.linspace(start, stop, samples):
        z1 = float(z1)
        mu, rm = template.mu, template.Rm
        if geometry is not None:
            mu = float(geometry.mu(z1))
            s = geometry.sqrt_rm(z1)
            if s is not None:
                rm = float(s) ** 2
        p = OpticalNetworkParams(T=template.T, Rm=rm, mu=mu, z1=z1, Z1=template.Z1, ZM=template.ZM)
        nv = float(normalized_variance(p, laser, det, model))
        points.append(ScanPoint(z1, mu, float(np.sqrt(rm)), nv, nv < 1 - SUB_POISSON_SLACK))
    return ScanResult(tuple(points), coupling)
