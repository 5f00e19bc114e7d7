"""
Independent oracle checks behind ``vacmirror validate``.

Each suite returns a :class:`SuiteReport`. Mandatory suites decide the exit
status of the command; the overlap comparison against the closed forms is
printed as a table and never fails the run.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .beam_optics import GaussianBeam, rayleigh_range
from .fluctuation import (
    DetectorModel,
    LaserModel,
    detector_response_factor,
    ideal_variance,
    practical_variance,
)
from .mode_network import OpticalNetworkParams, photocurrent_expression, vacuum_variance
from .overlap import (
    InnerProductKind,
    OverlapScenario,
    mu_effective,
    overlap_numeric,
    rm_effective,
)

DEFAULT_SEED = 20240607

MODENET_TOL = 1e-12
DETECTOR_TOL = 1e-9
LIMIT_REL_TOL = 1e-5
LIMIT_ABS_TOL = 1e-6
SELF_OVERLAP_TOL = 1e-8
ANALYTIC_OVERLAP_TOL = 1e-6


@dataclass
class SuiteReport:
    name: str
    passed: bool
    mandatory: bool = True
    worst: float = 0.0
    lines: list = field(default_factory=list)

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if not self.mandatory:
            status += " (report only)"
        head = f"[{self.name}] {status}"
        return "\n".join([head] + ["  " + line for line in self.lines])


def random_network(rng, k0=2 * np.pi):
    """One random lossless network draw with ``k0 z1`` spread over [0, 1e3]."""
    T = rng.uniform(0, 1)
    Rm = rng.uniform(0, 1)
    p = OpticalNetworkParams(
        T=T, Rm=Rm, mu=rng.uniform(0, 1),
        z1=rng.uniform(0, 1e3) / k0,
        Z1=rng.uniform(0, 1e3), ZM=rng.uniform(0, 1e3),
    )
    laser = LaserModel(amplitude=rng.uniform(0, 3), phase=rng.uniform(-np.pi, np.pi), k0=k0)
    return p, laser


def fluctuation_closed_form(p, laser):
    """The ideal variance written out directly from its printed form."""
    return (laser.amplitude**2 * p.T / 2) * (
        1 + p.mu**2 - 2 * p.mu * p.R * math.sqrt(p.Rm) * math.cos(2 * laser.k0 * p.z1)
    )


def check_modenet(seed=DEFAULT_SEED, draws=10_000) -> SuiteReport:
    rng = np.random.default_rng(seed)
    worst, worst_at = 0.0, None
    for _ in range(draws):
        p, laser = random_network(rng)
        dev = abs(vacuum_variance(photocurrent_expression(p, laser)) - fluctuation_closed_form(p, laser))
        if dev > worst:
            worst, worst_at = dev, (p, laser)
    report = SuiteReport("modenet", worst < MODENET_TOL, worst=worst)
    report.lines.append(f"{draws} draws, max |mode sum - closed form| = {worst:.3e} (tol {MODENET_TOL:g})")
    if worst_at is not None and not report.passed:
        report.lines.append(f"worst at {worst_at}")
    return report


def detector_factor_quadrature(det: DetectorModel, k0, z1) -> float:
    """``int_0^D kappa e^{-kappa eta} cos(2 k0 (z1 + eta)) d eta`` by oscillatory quadrature.

    The cosine is split into ``cos(theta) cos(2 k0 eta) - sin(theta) sin(2 k0 eta)``
    so each part can use QUADPACK's Fourier-weighted routine.
    """
    if det.depth == 0:
        return 0.0
    theta = 2 * k0 * z1
    profile = lambda eta: det.kappa * math.exp(-det.kappa * eta)  # noqa: E731
    parts = []
    for weight in ("cos", "sin"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(profile, 0.0, det.depth, weight=weight, wvar=2 * k0,
                                    epsabs=1e-13, epsrel=1e-11, limit=500)
        parts.append(val)
    return math.cos(theta) * parts[0] - math.sin(theta) * parts[1]


def random_detector_points(rng, n, k0=2 * np.pi):
    """Random ``(kappa, D, z1)`` with ``kappa D`` log-uniform over [1e-3, 1e2]."""
    for _ in range(n):
        kappa = k0 * 10 ** rng.uniform(-2, 3)
        kappa_d = 10 ** rng.uniform(-3, 2)
        yield DetectorModel(kappa, kappa_d / kappa), rng.uniform(0, 50)


def check_detector(seed=DEFAULT_SEED, points=1000) -> SuiteReport:
    rng = np.random.default_rng(seed)
    k0 = 2 * np.pi
    worst, worst_at = 0.0, None
    for det, z1 in random_detector_points(rng, points, k0):
        dev = abs(detector_response_factor(det, k0, z1) - detector_factor_quadrature(det, k0, z1))
        if dev > worst:
            worst, worst_at = dev, (det, z1)
    report = SuiteReport("detector", worst < DETECTOR_TOL, worst=worst)
    report.lines.append(
        f"{points} points, max |closed - quadrature| = {worst:.3e} (tol {DETECTOR_TOL:g})"
    )
    if not report.passed:
        report.lines.append(f"worst at kappa={worst_at[0].kappa!r}, D={worst_at[0].depth!r}, z1={worst_at[1]!r}")
    return report


def limit_deviations(rng, draws=2000):
    """Worst deviations of the practical model from its three limits.

    Returns a dict with the thick-detector deviation (relative to
    ``max(ideal, |alpha|^2 T/2)``), and the absolute deviations from
    ``|alpha|^2 T/2 (1 + mu^2)`` for a zero-depth detector and a broad line.
    """
    k0 = 2 * np.pi
    thick = [DetectorModel(1e6 * k0, 1.0), DetectorModel(1e6 * k0, 20 / (1e6 * k0))]
    out = {"thick": 0.0, "thin": 0.0, "broad": 0.0}
    for _ in range(draws):
        p, laser = random_network(rng, k0)
        base = laser.shot_noise * p.T
        ideal = ideal_variance(p, laser)
        for det in thick:
            dev = abs(practical_variance(p, laser, det) - ideal) / max(ideal, base, 1e-300)
            out["thick"] = max(out["thick"], dev)
        flat = base * (1 + p.mu**2)
        thin = practical_variance(p, laser, DetectorModel(rng.uniform(0.1, 1e3), 0.0))
        out["thin"] = max(out["thin"], abs(thin - flat))
        z1 = rng.uniform(0.5, 100)
        broad_laser = LaserModel(laser.amplitude, laser.phase, k0, linewidth=10 / z1 * rng.uniform(1, 3))
        broad_p = OpticalNetworkParams(T=p.T, Rm=p.Rm, mu=p.mu, z1=z1)
        broad = practical_variance(broad_p, broad_laser, DetectorModel(10 * k0, 1.0))
        out["broad"] = max(out["broad"], abs(broad - laser.shot_noise * p.T * (1 + p.mu**2)))
    return out


def check_limits(seed=DEFAULT_SEED, draws=2000) -> SuiteReport:
    rng = np.random.default_rng(seed)
    dev = limit_deviations(rng, draws)
    ok = dev["thick"] < LIMIT_REL_TOL and dev["thin"] < LIMIT_ABS_TOL and dev["broad"] < LIMIT_ABS_TOL
    report = SuiteReport("limits", ok, worst=max(dev.values()))
    report.lines += [
        f"dk=0, kappa=1e6 k0, D in {{lambda, 20/kappa}}: max rel dev = {dev['thick']:.3e} (tol {LIMIT_REL_TOL:g})",
        f"kappa D = 0: max |dev| from (1+mu^2) baseline = {dev['thin']:.3e} (tol {LIMIT_ABS_TOL:g})",
        f"dk z1 >= 10: max |dev| from (1+mu^2) baseline = {dev['broad']:.3e} (tol {LIMIT_ABS_TOL:g})",
    ]
    boundary = DetectorModel(1e6 * 2 * np.pi, 10 / (1e6 * 2 * np.pi))
    report.lines.append(
        "note: at D = 10/kappa exactly the factor at cos=1 is "
        f"{detector_response_factor(boundary, 2 * np.pi, 0.0):.8f} (residual e^-10)"
    )
    return report


OVERLAP_WAISTS = (1.0, 10.0, 100.0)
OVERLAP_U = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)
OVERLAP_WAIST_RATIOS = (0.25, 0.5, 1.0, 2.0)


def overlap_table(waists=OVERLAP_WAISTS, us=OVERLAP_U, ratios=OVERLAP_WAIST_RATIOS):
    """Closed forms against quadrature under both normalizations.

    One row per (geometry, w0, wm/w0, z1/z0) with the closed form, its
    square, the conjugated quadrature and the non-conjugated quadrature.
    """
    rows = []
    for w0 in waists:
        z0 = math.pi * w0**2
        for u in us:
            sc = OverlapScenario.detector_waist(w0, u * z0)
            rows.append((
                "mu", w0, 1.0, u, mu_effective(sc),
                mu_effective(sc, "numeric", InnerProductKind.CONJUGATED),
                mu_effective(sc, "numeric", InnerProductKind.PAPER_NONCONJUGATED),
            ))
        for ratio in ratios:
            for u in us:
                sc = OverlapScenario.mirror_waist(w0, ratio * w0, u * z0)
                rows.append((
                    "rm", w0, ratio, u, rm_effective(sc),
                    rm_effective(sc, "numeric", InnerProductKind.CONJUGATED),
                    rm_effective(sc, "numeric", InnerProductKind.PAPER_NONCONJUGATED),
                ))
    return rows


def self_overlap_deviation(waists=(1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0)) -> float:
    """Worst ``|self-overlap - 1|``.

    Conjugated kind on and off the waist; non-conjugated kind at the waist
    only, since a curved wavefront makes ``|int E^2|`` smaller than the power.
    """
    worst = 0.0
    for w in waists:
        beam = GaussianBeam(w)
        for z in (0.0, 0.7 * rayleigh_range(beam)):
            worst = max(worst, abs(overlap_numeric(beam, z, beam, z) - 1))
        nonconj = overlap_numeric(beam, 0.0, beam, 0.0, InnerProductKind.PAPER_NONCONJUGATED)
        worst = max(worst, abs(nonconj - 1))
    return worst


def propagated_overlap_deviation(waists=(1.0, 10.0, 100.0), us=(0.1, 0.5, 1.0, 2.0, 5.0)) -> float:
    """Conjugated quadrature against ``(1 + (z1/z0)^2)^(-1/2)``."""
    worst = 0.0
    for w in waists:
        beam = GaussianBeam(w)
        z0 = rayleigh_range(beam)
        for u in us:
            numeric = overlap_numeric(beam, 0.0, beam, 2 * u * z0)
            worst = max(worst, abs(numeric - (1 + u * u) ** -0.5))
    return worst


def check_overlap() -> SuiteReport:
    self_dev = self_overlap_deviation()
    prop_dev = propagated_overlap_deviation()
    ok = self_dev < SELF_OVERLAP_TOL and prop_dev < ANALYTIC_OVERLAP_TOL
    report = SuiteReport("overlap", ok, mandatory=False, worst=max(self_dev, prop_dev))
    report.lines += [
        f"self-overlap, waists 1..1000: max |dev| = {self_dev:.3e} (tol {SELF_OVERLAP_TOL:g})",
        f"conjugated vs (1+u^2)^-1/2: max |dev| = {prop_dev:.3e} (tol {ANALYTIC_OVERLAP_TOL:g})",
        "closed forms vs quadrature (not asserted):",
        f"{'coef':>4} {'w0':>6} {'wm/w0':>6} {'z1/z0':>6} {'closed':>10} {'closed^2':>10}"
        f" {'conj':>10} {'nonconj':>10}",
    ]
    for coef, w0, ratio, u, closed, conj, nonconj in overlap_table():
        report.lines.append(
            f"{coef:>4} {w0:>6g} {ratio:>6g} {u:>6g} {closed:>10.6f} {closed**2:>10.6f}"
            f" {conj:>10.6f} {nonconj:>10.6f}"
        )
    return report


SUITES = {
    "modenet": check_modenet,
    "detector": check_detector,
    "overlap": check_overlap,
    "limits": check_limits,
}
