"""
Deterministic grid evaluation of the package's scalar quantities.

A :class:`SweepSpec` names one quantity, a list of axes and a set of fixed
parameters. :func:`run_sweep` evaluates the quantity at every grid point in
row-major order (first axis slowest). Every point is evaluated on its own
with Python floats, so chunking across worker processes cannot change a
single bit of the output.
"""
from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import GridPointError, ParameterError, SweepSpecError
from .fluctuation import (
    DetectorModel,
    LaserModel,
    detector_response_factor,
    ideal_variance,
    normalized_variance,
    practical_variance,
)
from .mode_network import OpticalNetworkParams
from .overlap import mu_closed, rm_closed


class Quantity(enum.Enum):
    MU = "mu"
    RM = "rm"
    IDEAL_VARIANCE = "ideal_variance"
    PRACTICAL_VARIANCE = "practical_variance"
    NORMALIZED_VARIANCE = "normalized_variance"
    DETECTOR_FACTOR = "detector_factor"


KNOWN_PARAMETERS = (
    "z1", "w0", "wm", "wavelength", "T", "Rm", "mu", "alpha2", "phi", "dk", "kappa", "D", "model",
)
STRING_PARAMETERS = {"model"}


def default_parameters(wavelength=1.0):
    """Defaults for parameters a quantity may leave unspecified."""
    k0 = 2 * math.pi / wavelength
    return {
        "wavelength": wavelength,
        "alpha2": 1.0,
        "phi": 0.0,
        "dk": 0.0,
        "kappa": 10 * k0,
        "D": wavelength,
        "model": "ideal",
    }


_VARIANCE_OPTIONAL = {"wavelength", "alpha2", "phi"}
# (required, optional-with-default); variance quantities also need mu/Rm or geometry
_REQUIREMENTS = {
    Quantity.MU: ({"z1", "w0"}, {"wavelength"}),
    Quantity.RM: ({"z1", "w0", "wm"}, {"wavelength"}),
    Quantity.DETECTOR_FACTOR: ({"z1"}, {"wavelength", "kappa", "D"}),
    Quantity.IDEAL_VARIANCE: ({"T", "z1"}, _VARIANCE_OPTIONAL),
    Quantity.PRACTICAL_VARIANCE: ({"T", "z1"}, _VARIANCE_OPTIONAL | {"dk", "kappa", "D"}),
    Quantity.NORMALIZED_VARIANCE: ({"T", "z1"}, _VARIANCE_OPTIONAL | {"dk", "kappa", "D", "model"}),
}
_VARIANCE_QUANTITIES = {Quantity.IDEAL_VARIANCE, Quantity.PRACTICAL_VARIANCE,
                        Quantity.NORMALIZED_VARIANCE}


def check_parameters(quantity: Quantity, names) -> None:
    """Raise :class:`SweepSpecError` unless ``names`` covers ``quantity`` exactly."""
    names = set(names)
    unknown = names - set(KNOWN_PARAMETERS)
    if unknown:
        bad = sorted(unknown)[0]
        raise SweepSpecError(f"unknown parameter {bad!r}", field=bad)
    required, optional = _REQUIREMENTS[quantity]
    allowed = set(required) | set(optional)
    missing = sorted(required - names)
    if quantity in _VARIANCE_QUANTITIES:
        if "mu" not in names and "w0" not in names:
            missing.append("mu")
        if "Rm" not in names and not {"w0", "wm"} <= names:
            missing.append("Rm")
        allowed |= {"mu", "Rm"}
        if "mu" not in names or "Rm" not in names:
            allowed.add("w0")
        if "Rm" not in names:
            allowed.add("wm")
    if missing:
        raise SweepSpecError(
            f"quantity {quantity.value!r} needs parameter {missing[0]!r}", field=missing[0]
        )
    unused = sorted(names - allowed)
    if unused:
        raise SweepSpecError(
            f"parameter {unused[0]!r} is not used by quantity {quantity.value!r}", field=unused[0]
        )


def _network(v) -> OpticalNetworkParams:
    wavelength = v["wavelength"]
    mu = v["mu"] if "mu" in v else float(mu_closed(v["z1"], math.pi * v["w0"] ** 2 / wavelength))
    if "Rm" in v:
        rm = v["Rm"]
    else:
        rm = float(rm_closed(v["z1"], v["w0"], v["wm"], wavelength)) ** 2
    return OpticalNetworkParams(T=v["T"], Rm=rm, mu=mu, z1=v["z1"])


def _laser(v) -> LaserModel:
    if v["alpha2"] < 0:
        raise ParameterError("alpha2", f"must be >= 0, got {v['alpha2']!r}")
    return LaserModel(amplitude=math.sqrt(v["alpha2"]), phase=v["phi"],
                      k0=2 * math.pi / v["wavelength"], linewidth=v["dk"])


def evaluate(quantity, values: dict) -> float:
    """Value of ``quantity`` at one parameter point; missing optionals use defaults."""
    quantity = Quantity(quantity)
    v = default_parameters(values.get("wavelength", 1.0))
    v.update(values)
    if quantity is Quantity.MU:
        return float(mu_closed(v["z1"], math.pi * v["w0"] ** 2 / v["wavelength"]))
    if quantity is Quantity.RM:
        return float(rm_closed(v["z1"], v["w0"], v["wm"], v["wavelength"]))
    laser = _laser(v)
    det = DetectorModel(v["kappa"], v["D"])
    if quantity is Quantity.DETECTOR_FACTOR:
        return float(detector_response_factor(det, laser.k0, v["z1"]))
    p = _network(v)
    if quantity is Quantity.IDEAL_VARIANCE:
        return float(ideal_variance(p, laser))
    if quantity is Quantity.PRACTICAL_VARIANCE:
        return float(practical_variance(p, laser, det))
    return float(normalized_variance(p, laser, det, v["model"]))


@dataclass(frozen=True)
class Axis:
    """One sweep axis.

    ``pins`` are values that replace the nearest grid node, so a reference
    value can sit exactly on a log grid.
    """

    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"
    pins: tuple = ()

    def __post_init__(self):
        if self.count < 2:
            raise SweepSpecError(f"axis {self.name!r}: count must be >= 2", field=self.name)
        if not self.start < self.stop:
            raise SweepSpecError(f"axis {self.name!r}: start must be < stop", field=self.name)
        if self.spacing not in ("linear", "log"):
            raise SweepSpecError(f"axis {self.name!r}: spacing must be linear or log",
                                 field=self.name)
        if self.spacing == "log" and not self.start > 0:
            raise SweepSpecError(f"axis {self.name!r}: log spacing needs start > 0",
                                 field=self.name)
        for pin in self.pins:
            if not self.start <= pin <= self.stop:
                raise SweepSpecError(f"axis {self.name!r}: pin {pin!r} outside range",
                                     field=self.name)

    def values(self) -> list:
        if self.spacing == "log":
            grid = np.geomspace(self.start, self.stop, self.count)
            distance = lambda a, b: abs(math.log(a) - math.log(b))  # noqa: E731
        else:
            grid = np.linspace(self.start, self.stop, self.count)
            distance = lambda a, b: abs(a - b)  # noqa: E731
        grid = [float(x) for x in grid]
        grid[0], grid[-1] = float(self.start), float(self.stop)
        for pin in self.pins:
            nearest = min(range(len(grid)), key=lambda i: distance(grid[i], pin))
            grid[nearest] = float(pin)
        return grid


@dataclass(frozen=True)
class SweepSpec:
    quantity: Quantity
    axes: tuple
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "quantity", Quantity(self.quantity))
        object.__setattr__(self, "axes", tuple(self.axes))
        seen = set()
        for name in [a.name for a in self.axes] + list(self.fixed):
            if name in seen:
                raise SweepSpecError(f"parameter {name!r} supplied more than once", field=name)
            seen.add(name)
        for name in STRING_PARAMETERS & {a.name for a in self.axes}:
            raise SweepSpecError(f"parameter {name!r} cannot be an axis", field=name)
        check_parameters(self.quantity, seen)

    @property
    def shape(self):
        return tuple(a.count for a in self.axes)

    def describe(self) -> dict:
        """Plain-data echo of the spec for result metadata."""
        return {
            "quantity": self.quantity.value,
            "axes": [
                {"name": a.name, "start": a.start, "stop": a.stop, "count": a.count,
                 "spacing": a.spacing, "pins": list(a.pins)}
                for a in self.axes
            ],
            "fixed": dict(self.fixed),
        }


@dataclass(frozen=True)
class SweepResult:
    columns: tuple
    records: list
    metadata: dict

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.records])

    def grid(self, shape) -> np.ndarray:
        """Quantity column reshaped to the axis grid."""
        return self.column(self.columns[-1]).reshape(shape)


def _evaluate_chunk(quantity, names, fixed, rows):
    out = []
    for row in rows:
        values = dict(fixed)
        values.update(zip(names, row))
        try:
            out.append(evaluate(quantity, values))
        except (ParameterError, ArithmeticError, ValueError) as exc:
            raise GridPointError(dict(zip(names, row)), exc) from exc
    return out


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate ``spec`` on its full grid.

    Parameters
    ----------
    spec : SweepSpec
    workers : int
        Processes to fan out over. Results are merged by chunk index, so the
        output does not depend on this value.
    """
    names = [a.name for a in spec.axes]
    rows = list(itertools.product(*(a.values() for a in spec.axes)))
    quantity = spec.quantity.value
    if workers <= 1 or len(rows) < 2:
        values = _evaluate_chunk(quantity, names, spec.fixed, rows)
    else:
        n_chunks = min(len(rows), workers * 4)
        bounds = np.linspace(0, len(rows), n_chunks + 1).astype(int)
        chunks = [rows[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_chunk, quantity, names, spec.fixed, c) for c in chunks]
            values = [v for f in futures for v in f.result()]
    records = [tuple(row) + (val,) for row, val in zip(rows, values)]
    metadata = {
        "library": f"vacmirror {__version__}",
        "spec": spec.describe(),
        "ordering": "row-major, first axis slowest",
        "quadrature_epsabs": 1e-8,
        "sub_poisson_slack": 1e-12,
    }
    return SweepResult(tuple(names) + (quantity,), records, metadata)


FIGURE_Z1_RANGE = (0.0, 5e4)
FIGURE_W0 = 100.0


def figure2_spec() -> SweepSpec:
    return SweepSpec(
        Quantity.MU,
        (Axis("w0", 1.0, 200.0, 80, "log"), Axis("z1", *FIGURE_Z1_RANGE, 200)),
        {"wavelength": 1.0},
    )


def figure3_spec() -> SweepSpec:
    return SweepSpec(
        Quantity.RM,
        (Axis("wm", 1.0, 400.0, 80, "log", pins=(FIGURE_W0,)), Axis("z1", *FIGURE_Z1_RANGE, 200)),
        {"w0": FIGURE_W0, "wavelength": 1.0},
    )


def figure2_dataset(workers: int = 1) -> SweepResult:
    """``mu`` over waist radius (log grid) and mirror distance."""
    return run_sweep(figure2_spec(), workers)


def figure3_dataset(workers: int = 1) -> SweepResult:
    """``sqrt(Rm)`` over mirror-waist radius and mirror distance, laser waist 100 wavelengths."""
    return run_sweep(figure3_spec(), workers)


PRESETS = {"fig2": figure2_spec, "fig3": figure3_spec}
