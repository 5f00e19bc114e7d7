import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vacmirror import overlap
from vacmirror.beam_optics import GaussianBeam, rayleigh_range
from vacmirror.errors import ParameterError, QuadratureError
from vacmirror.overlap import (
    InnerProductKind,
    ModeMatchGeometry,
    OverlapScenario,
    mu_closed,
    mu_effective,
    overlap_numeric,
    rm_closed,
    rm_effective,
)


def analytic_conjugated_overlap(w0, z0, z, k):
    """Overlap of a waist with its own mode propagated by z.

    Both profiles are exp(-c rho^2); int exp(-c rho^2) 2 pi rho d rho = pi / c.
    """
    w2 = w0**2 * (1 + (z / z0) ** 2)
    inv_r = z / (z**2 + z0**2)
    c_cross = 1 / w0**2 + 1 / w2 - 0.5j * k * inv_r
    prefactor = w0 / math.sqrt(w2)
    cross = prefactor * math.pi / c_cross
    norm = math.pi * w0**2 / 2
    return abs(cross) / norm


def test_mu_closed_examples():
    assert mu_closed(0.0, 5.0) == 1.0
    assert mu_closed(5.0, 5.0) == pytest.approx(2 ** -0.25, rel=1e-15)
    assert mu_closed(5.0, 5.0) == pytest.approx(0.84090, abs=1e-5)
    assert mu_closed(10.0, 5.0) == pytest.approx(5 ** -0.25, rel=1e-15)
    assert mu_closed(10.0, 5.0) == pytest.approx(0.66874, abs=1e-5)


@pytest.mark.parametrize("z1, z0", [(-1.0, 1.0), (1.0, 0.0)])
def test_mu_closed_rejects(z1, z0):
    with pytest.raises(ParameterError):
        mu_closed(z1, z0)


@given(st.floats(min_value=0, max_value=1e4))
def test_mu_factorization(u):
    assert mu_closed(u, 1.0) == pytest.approx((1 + u * u) ** -0.25, rel=1e-12)


@given(z0=st.floats(min_value=0.1, max_value=1e5), a=st.floats(min_value=0, max_value=1e5),
       b=st.floats(min_value=0, max_value=1e5))
def test_mu_decreasing_in_distance(z0, a, b):
    lo, hi = sorted((a, b))
    if hi - lo > 1e-6 * z0:
        assert mu_closed(hi, z0) < mu_closed(lo, z0)


@given(w_small=st.floats(min_value=1, max_value=500), ratio=st.floats(min_value=1.01, max_value=3),
       z1=st.floats(min_value=1, max_value=1e4))
def test_mu_increasing_in_waist(w_small, ratio, z1):
    z0a = math.pi * w_small**2
    z0b = math.pi * (ratio * w_small) ** 2
    assert mu_closed(z1, z0b) > mu_closed(z1, z0a)


def test_rm_closed_examples():
    assert rm_closed(0.0, 100.0, 100.0) == 1.0
    z0 = math.pi * 100.0**2
    assert rm_closed(math.sqrt(12) * z0, 100.0, 100.0) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert rm_closed(math.sqrt(12) * z0, 100.0, 100.0) == pytest.approx(0.70711, abs=1e-5)


def test_rm_closed_matched_reduction():
    # wm == w0 reduces to sqrt(2) / (4 + u^2)^(1/4)
    w = 7.0
    z0 = math.pi * w * w
    for u in (0.1, 1.0, 3.0, 30.0):
        assert rm_closed(u * z0, w, w) == pytest.approx(math.sqrt(2) / (4 + u * u) ** 0.25, rel=1e-13)


def test_rm_closed_decays():
    z = np.linspace(0, 1e9, 200)
    values = rm_closed(z, 100.0, 100.0)
    assert np.all(np.diff(values) < 0)
    assert values[-1] < 0.01


@pytest.mark.parametrize("w", [0.3, 1.0, 10.0, 100.0, 400.0, 5e3])
def test_rm_closed_unity_when_matched_at_mirror(w):
    assert rm_closed(0.0, w, w) == pytest.approx(1.0, abs=1e-12)


def test_rm_closed_bounded_on_grid():
    z1 = np.linspace(0, 1e4, 101)[:, None]
    ratio = np.geomspace(0.1, 10, 61)[None, :]
    for w0 in (1.0, 10.0, 100.0):
        assert np.all(rm_closed(z1, w0, ratio * w0) <= 1 + 1e-12)


@pytest.mark.parametrize("kind", list(InnerProductKind))
@pytest.mark.parametrize("w", [1.0, 10.0, 100.0, 1000.0])
def test_self_overlap_at_waist(kind, w):
    beam = GaussianBeam(w)
    assert overlap_numeric(beam, 0.0, beam, 0.0, kind) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("w", [1.0, 100.0])
def test_conjugated_self_overlap_off_waist(w):
    beam = GaussianBeam(w)
    z = 2.5 * rayleigh_range(beam)
    assert overlap_numeric(beam, z, beam, z) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("w0", [1.0, 20.0, 150.0])
@pytest.mark.parametrize("u", [0.05, 0.5, 1.0, 3.0, 10.0])
def test_conjugated_matches_gaussian_integral(w0, u):
    beam = GaussianBeam(w0)
    z0 = rayleigh_range(beam)
    z = 2 * u * z0
    oracle = analytic_conjugated_overlap(w0, z0, z, beam.wavenumber)
    assert oracle == pytest.approx((1 + u * u) ** -0.5, rel=1e-12)
    assert overlap_numeric(beam, 0.0, beam, z) == pytest.approx(oracle, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(wa=st.floats(min_value=1, max_value=100), wb=st.floats(min_value=1, max_value=100),
       za=st.floats(min_value=-300, max_value=300), zb=st.floats(min_value=-300, max_value=300))
def test_conjugated_symmetric_and_bounded(wa, wb, za, zb):
    a, b = GaussianBeam(wa), GaussianBeam(wb)
    ab = overlap_numeric(a, za, b, zb)
    ba = overlap_numeric(b, zb, a, za)
    assert ab == pytest.approx(ba, abs=1e-9)
    assert ab <= 1 + 1e-9


def test_quadrature_cap_raises(monkeypatch):
    monkeypatch.setattr(overlap, "QUAD_LIMIT", 4)
    beam = GaussianBeam(1.0)
    with pytest.raises(QuadratureError):
        overlap_numeric(beam, 0.0, beam, 50.0, InnerProductKind.PAPER_NONCONJUGATED)


def test_mu_effective_dispatch():
    z0 = math.pi * 4.0**2
    at_zero = OverlapScenario.detector_waist(4.0, 0.0)
    for method in ("closed_form", "numeric"):
        assert mu_effective(at_zero, method) == pytest.approx(1.0, abs=1e-8)
    sc = OverlapScenario.detector_waist(4.0, z0)
    assert mu_effective(sc) == pytest.approx(0.84090, abs=1e-5)
    assert mu_effective(sc, "numeric") == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    with pytest.raises(ValueError):
        mu_effective(sc, "bogus")


def test_closed_forms_are_square_roots_of_conjugated_overlap():
    # observed relation, recorded as a regression check
    for w0 in (1.0, 50.0):
        z0 = math.pi * w0**2
        for u in (0.3, 1.0, 4.0):
            sc = OverlapScenario.detector_waist(w0, u * z0)
            assert mu_effective(sc) ** 2 == pytest.approx(mu_effective(sc, "numeric"), abs=1e-6)
            for ratio in (0.3, 1.0, 2.5):
                sc = OverlapScenario.mirror_waist(w0, ratio * w0, u * z0)
                assert rm_effective(sc) ** 2 == pytest.approx(rm_effective(sc, "numeric"), abs=1e-6)


def test_scenario_validation():
    with pytest.raises(ParameterError):
        OverlapScenario.detector_waist(1.0, -1.0)
    with pytest.raises(ParameterError):
        OverlapScenario(GaussianBeam(1.0), GaussianBeam(1.0, wavelength=2.0), 0.0)


def test_geometry_helper():
    geo = ModeMatchGeometry(100.0, 100.0)
    assert geo.mu(0.0) == 1.0
    assert geo.sqrt_rm(0.0) == 1.0
    assert ModeMatchGeometry(100.0).sqrt_rm(5.0) is None
