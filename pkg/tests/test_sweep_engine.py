import math

import numpy as np
import pytest

from vacmirror.errors import GridPointError, SweepSpecError
from vacmirror.sweep_engine import (
    Axis,
    Quantity,
    SweepSpec,
    evaluate,
    figure2_dataset,
    figure3_dataset,
    run_sweep,
)


def test_one_axis_mu_sweep_decreasing():
    z0 = math.pi * 10.0**2
    spec = SweepSpec("mu", [Axis("z1", 0.0, 2 * z0, 5)], {"w0": 10.0})
    result = run_sweep(spec)
    mu = result.column("mu")
    assert mu[0] == 1.0
    assert np.all(np.diff(mu) < 0)
    assert result.columns == ("z1", "mu")


def test_grid_cardinality_and_order():
    spec = SweepSpec("rm", [Axis("w0", 1.0, 3.0, 3), Axis("z1", 0.0, 3.0, 4)], {"wm": 2.0})
    result = run_sweep(spec)
    assert len(result.records) == 12
    w0 = [1.0, 2.0, 3.0]
    z1 = [0.0, 1.0, 2.0, 3.0]
    for i, rec in enumerate(result.records):
        assert rec[0] == w0[i // 4]
        assert rec[1] == z1[i % 4]


def test_baseline_sweep_is_flat():
    spec = SweepSpec("normalized_variance", [Axis("z1", 0.0, 3.0, 13), Axis("T", 0.1, 0.9, 5)],
                     {"mu": 0.0, "Rm": 0.7})
    assert np.all(run_sweep(spec).column("normalized_variance") == pytest.approx(1.0, abs=1e-15))


def test_log_axis_with_pin():
    axis = Axis("wm", 1.0, 400.0, 80, "log", pins=(100.0,))
    values = axis.values()
    assert len(values) == 80
    assert 100.0 in values
    assert values[0] == 1.0 and values[-1] == 400.0
    assert all(b > a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("kwargs", [
    {"count": 1}, {"start": 2.0, "stop": 1.0}, {"spacing": "cubic"}, {"start": 0.0, "spacing": "log"},
    {"pins": (50.0,)},
])
def test_axis_validation(kwargs):
    base = {"name": "z1", "start": 0.5, "stop": 2.0, "count": 3}
    base.update(kwargs)
    with pytest.raises(SweepSpecError):
        Axis(**base)


@pytest.mark.parametrize("quantity, axes, fixed, field", [
    ("mu", [Axis("z1", 0, 1, 2)], {}, "w0"),
    ("mu", [Axis("z1", 0, 1, 2)], {"w0": 1.0, "z1": 3.0}, "z1"),
    ("mu", [Axis("z1", 0, 1, 2)], {"w0": 1.0, "T": 0.5}, "T"),
    ("rm", [Axis("z1", 0, 1, 2)], {"w0": 1.0, "bogus": 2}, "bogus"),
    ("ideal_variance", [Axis("z1", 0, 1, 2)], {"T": 0.5, "Rm": 1.0}, "mu"),
    ("ideal_variance", [Axis("z1", 0, 1, 2)], {"T": 0.5, "mu": 1.0}, "Rm"),
    ("ideal_variance", [Axis("z1", 0, 1, 2)], {"T": 0.5, "mu": 1.0, "Rm": 1.0, "w0": 3.0}, "w0"),
])
def test_spec_validation_names_field(quantity, axes, fixed, field):
    with pytest.raises(SweepSpecError) as info:
        SweepSpec(quantity, axes, fixed)
    assert info.value.field == field


def test_geometry_coupled_variance():
    v = evaluate("ideal_variance", {"T": 0.5, "z1": 0.0, "w0": 10.0, "wm": 10.0})
    # mu = sqrt(Rm) = 1 at z1 = 0: 1/2 * 0.5 * (2 - 1)
    assert v == pytest.approx(0.25, rel=1e-15)


def test_practical_sweep_thin_detector_constant():
    spec = SweepSpec("practical_variance", [Axis("z1", 0.0, 2.0, 9)],
                     {"T": 0.5, "mu": 0.6, "Rm": 0.9, "D": 0.0, "alpha2": 2.0})
    vals = run_sweep(spec).column("practical_variance")
    assert np.all(vals == pytest.approx(0.5 * (1 + 0.36), abs=1e-15))


def test_detector_factor_quantity():
    v = evaluate("detector_factor", {"z1": 0.0, "kappa": 1e9, "D": 1.0})
    assert v == pytest.approx(1.0, abs=1e-6)


def test_grid_error_carries_coordinates():
    spec = SweepSpec("ideal_variance", [Axis("T", 0.5, 1.5, 3)], {"z1": 0.0, "mu": 1.0, "Rm": 1.0})
    with pytest.raises(GridPointError) as info:
        run_sweep(spec)
    assert info.value.coordinates == {"T": 1.5}


def test_parallel_equals_serial():
    spec = SweepSpec("normalized_variance", [Axis("z1", 0.0, 3.0, 37), Axis("w0", 1.0, 20.0, 11, "log")],
                     {"T": 0.2, "wm": 3.0, "model": "practical", "dk": 0.05})
    serial = run_sweep(spec, workers=1)
    parallel = run_sweep(spec, workers=3)
    assert serial.records == parallel.records


def test_figure_datasets_shape():
    fig2 = figure2_dataset()
    assert len(fig2.records) == 16000
    g = fig2.grid((80, 200))
    assert np.all(g[:, 0] == 1.0)
    w0 = fig2.column("w0").reshape(80, 200)[:, 0]
    i100 = int(np.argmin(abs(w0 - 100)))
    assert w0[i100] != 100.0  # the fig2 log grid does not hit 100 exactly
    fig3 = figure3_dataset()
    g3 = fig3.grid((80, 200))
    i, j = np.unravel_index(np.argmax(g3), g3.shape)
    assert fig3.records[i * 200 + j][:2] == (100.0, 0.0)
    assert g3.max() == 1.0


def test_figure2_reference_point():
    z0 = math.pi * 100.0**2
    assert evaluate(Quantity.MU, {"w0": 100.0, "z1": z0}) == pytest.approx(2 ** -0.25, rel=1e-14)


def test_figure3_reference_point():
    z0 = math.pi * 100.0**2
    v = evaluate(Quantity.RM, {"w0": 100.0, "wm": 100.0, "z1": math.sqrt(12) * z0})
    assert v == pytest.approx(1 / math.sqrt(2), rel=1e-14)
