"""
Linear bookkeeping of the vacuum modes reaching the detector.

Four independent input modes feed the detector port: the two vacuum modes
``a1`` and ``a2`` circulating between the splitter and the mirror, the
vacuum ``b`` entering with the laser, and the vacuum ``d`` leaking through
the mirror from behind. Any linear observable is stored as the complex
coefficients of the annihilation operators; the Hermitian observable is
that sum plus its conjugate, so its vacuum variance is ``sum |c|^2``.

The common field prefactor and the 1/sqrt(2) vacuum normalization are
dropped, so a lone vacuum mode has unit variance.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ParameterError

SUM_TOLERANCE = 1e-12


class ModeLabel(enum.Enum):
    A1 = "a1"
    A2 = "a2"
    B = "b"
    D = "d"


@dataclass(frozen=True)
class ModeExpression:
    """Immutable linear combination of input-mode annihilation operators."""

    terms: Mapping[ModeLabel, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {ModeLabel(k): complex(v) for k, v in dict(self.terms).items()}
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def coefficient(self, label) -> complex:
        return self.terms.get(ModeLabel(label), 0j)

    def __add__(self, other: ModeExpression) -> ModeExpression:
        merged = dict(self.terms)
        for label, c in other.terms.items():
            merged[label] = merged.get(label, 0j) + c
        return ModeExpression(merged)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other: ModeExpression) -> ModeExpression:
        return self + (-other)

    def scaled(self, factor: complex) -> ModeExpression:
        return ModeExpression({label: factor * c for label, c in self.terms.items()})

    __rmul__ = scaled

    def norm_squared(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.terms.values()))


def mode(label) -> ModeExpression:
    """Expression consisting of a single input mode with unit coefficient."""
    return ModeExpression({ModeLabel(label): 1.0})


@dataclass(frozen=True)
class OpticalNetworkParams:
    """Beam splitter, mirror and path lengths of the detection arm.

    Parameters
    ----------
    T : float
        Beam-splitter intensity transmittance.
    Rm : float
        Mirror intensity reflectance (use ``sqrt_rm**2`` for an effective,
        mode-matching reduced reflectance).
    mu : float
        Match between the counter-propagating ``a1`` modes at the detector.
    z1 : float
        Mirror-to-detector distance.
    Z1 : float
        Laser-to-detector distance; enters only as a phase.
    ZM : float
        Path of the vacuum behind the mirror; enters only as a phase.
    R, Tm : float, optional
        Complements of ``T`` and ``Rm``. Derived when omitted, checked
        against ``T + R = 1`` and ``Tm + Rm = 1`` when given.
    """

    T: float
    Rm: float
    mu: float
    z1: float = 0.0
    Z1: float = 0.0
    ZM: float = 0.0
    R: float | None = None
    Tm: float | None = None

    def __post_init__(self):
        for name in ("T", "Rm", "mu"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ParameterError(name, f"must lie in [0, 1], got {value!r}")
        if self.R is None:
            object.__setattr__(self, "R", 1.0 - self.T)
        if self.Tm is None:
            object.__setattr__(self, "Tm", 1.0 - self.Rm)
        for name in ("R", "Tm"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ParameterError(name, f"must lie in [0, 1], got {value!r}")
        if abs(self.T + self.R - 1.0) > SUM_TOLERANCE:
            raise ParameterError("R", f"T + R must equal 1, got {self.T + self.R!r}")
        if abs(self.Tm + self.Rm - 1.0) > SUM_TOLERANCE:
            raise ParameterError("Tm", f"Tm + Rm must equal 1, got {self.Tm + self.Rm!r}")
        if not self.z1 >= 0:
            raise ParameterError("z1", f"must be >= 0, got {self.z1!r}")

    @property
    def sqrt_rm(self) -> float:
        return float(np.sqrt(self.Rm))


def splitter_output_modes(p: OpticalNetworkParams):
    """Splitter outputs ``(a1_out, a2_out)`` with the mirror loop expanded.

    The mode returning from the mirror is
    ``c = sqrt(Tm) d - sqrt(Rm) (sqrt(R) a1 + sqrt(T) a2)``.
    """
    sT, sR = np.sqrt(p.T), np.sqrt(p.R)
    c = np.sqrt(p.Tm) * mode("d") - np.sqrt(p.Rm) * (sR * mode("a1") + sT * mode("a2"))
    a1_out = sT * mode("b") + sR * c
    a2_out = -sR * mode("b") + sT * c
    return a1_out, a2_out


def detected_field_expression(p: OpticalNetworkParams, k) -> ModeExpression:
    """Vacuum field at the detector in the ``a1`` output port.

    ``a1`` arrives along two paths, directly (weight ``mu``) and after one
    more mirror round trip (weight ``-R sqrt(Rm)``), with relative phase
    ``2 k z1``.
    """
    sT, sR, sRm = np.sqrt(p.T), np.sqrt(p.R), np.sqrt(p.Rm)
    # coefficients of the creation operators, conjugated to annihilation form
    creation = {
        ModeLabel.B: sT * np.exp(-1j * k * p.Z1),
        ModeLabel.A1: p.mu * np.exp(1j * k * p.z1) - p.R * sRm * np.exp(-1j * k * p.z1),
        ModeLabel.A2: -sR * sT * sRm * np.exp(-1j * k * p.z1),
        ModeLabel.D: sR * np.sqrt(p.Tm) * np.exp(-1j * k * p.ZM),
    }
    return ModeExpression({label: np.conj(c) for label, c in creation.items()})


def photocurrent_expression(p: OpticalNetworkParams, laser) -> ModeExpression:
    """Linearized photocurrent with the dc term removed.

    Each vacuum amplitude beats against the transmitted classical field
    ``sqrt(T) |alpha| e^{i phi} / sqrt(2)``.
    """
    beat = laser.amplitude / np.sqrt(2) * np.sqrt(p.T) * np.exp(1j * laser.phase)
    return detected_field_expression(p, laser.k0).scaled(beat)


def vacuum_variance(expr: ModeExpression) -> float:
    """``<X^2>`` of the Hermitian observable on the multimode vacuum."""
    return expr.norm_squared()
