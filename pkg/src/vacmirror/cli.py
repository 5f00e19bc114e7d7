"""
Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration
error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .csvio import format_number, write_csv
from .errors import GridPointError, ParameterError, QuadratureError, SweepSpecError
from .fluctuation import (
    DetectorModel,
    LaserModel,
    detector_response_factor,
    ideal_variance,
    practical_variance,
    sub_poisson_scan,
)
from .mode_network import OpticalNetworkParams
from .overlap import ModeMatchGeometry, mu_closed, rm_closed
from .specfile import parse_config_text, parse_sweep_text
from .sweep_engine import PRESETS, run_sweep
from .validation import DEFAULT_SEED, SUITES

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
OUTPUT_DIR_ENV = "VACMIRROR_OUTPUT_DIR"

# keys accepted by --config files and mirrored as flags
CONFIG_KEYS = ("wavelength", "T", "Rm", "mu", "alpha2", "phi", "dk", "kappa", "D", "w0", "wm", "z1")


class ConfigError(Exception):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Resolved single-point configuration.

    ``mu`` and ``Rm`` are None when they follow the beam geometry
    (``mu`` from ``w0``; ``sqrt(Rm)`` from ``w0`` and ``wm``).
    """

    wavelength: float = 1.0
    T: float = 0.5
    Rm: float | None = None
    mu: float | None = None
    alpha2: float = 1.0
    phi: float = 0.0
    dk: float = 0.0
    kappa: float | None = None
    D: float | None = None
    w0: float = 100.0
    wm: float | None = None
    z1: float = 0.0

    @classmethod
    def from_sources(cls, file_values: dict, flag_values: dict) -> "RunConfig":
        merged = {}
        for source in (file_values, flag_values):
            for key, value in source.items():
                if key not in CONFIG_KEYS:
                    raise ConfigError(key, "unknown configuration key")
                if value is not None:
                    merged[key] = float(value)
        cfg = cls(**merged)
        cfg.check()
        return cfg

    def check(self):
        positive = ("wavelength", "w0")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)!r}")
        for name in ("wm", "kappa"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(name, f"must be > 0, got {value!r}")
        for name in ("T", "Rm", "mu"):
            value = getattr(self, name)
            if value is not None and not 0 <= value <= 1:
                raise ConfigError(name, f"must lie in [0, 1], got {value!r}")
        for name in ("alpha2", "dk", "z1"):
            if not getattr(self, name) >= 0:
                raise ConfigError(name, f"must be >= 0, got {getattr(self, name)!r}")
        if self.D is not None and not self.D >= 0:
            raise ConfigError("D", f"must be >= 0, got {self.D!r}")

    @property
    def k0(self):
        return 2 * math.pi / self.wavelength

    def geometry(self) -> ModeMatchGeometry:
        return ModeMatchGeometry(self.w0, self.wm if self.wm is not None else self.w0, self.wavelength)

    def laser(self) -> LaserModel:
        return LaserModel(math.sqrt(self.alpha2), self.phi, self.k0, self.dk)

    def detector(self) -> DetectorModel:
        kappa = self.kappa if self.kappa is not None else 10 * self.k0
        depth = self.D if self.D is not None else self.wavelength
        return DetectorModel(kappa, depth)

    def network(self, z1=None) -> OpticalNetworkParams:
        z1 = self.z1 if z1 is None else z1
        geo = self.geometry()
        mu = self.mu if self.mu is not None else float(geo.mu(z1))
        rm = self.Rm if self.Rm is not None else float(geo.sqrt_rm(z1)) ** 2
        return OpticalNetworkParams(T=self.T, Rm=rm, mu=mu, z1=z1)


def format_scalar(value: float) -> str:
    """Fixed 12 decimals for ordinary magnitudes, 12 significant digits otherwise."""
    value = float(value)
    if value == 0 or 1e-4 <= abs(value) < 1e12:
        return f"{value:.12f}"
    return f"{value:.11e}"


EVAL_NOTES = {
    "mu": "mu = (1+4u^2)^(1/4) / (1+5u^2+4u^4)^(1/4), u = z1/z0, vacuum waist on detector",
    "rm": "sqrt(Rm) = overlap of mirror-waist vacuum mode with laser mode on the detector",
    "variance": "<I^2> = |alpha|^2 T/2 (1 + mu^2 - 2 mu R sqrt(Rm) cos(2 k0 z1))",
    "practical": "<I^2>_P = |alpha|^2 T/2 (1 + mu^2 - 2 mu R sqrt(Rm) exp(-z1^2 dk^2) F_det)",
    "detector-factor": "F_det = kappa [cos(2k0z1+phi0) - e^(-kappa D) cos(2k0(z1+D)+phi0)] / sqrt(4k0^2+kappa^2)",
}


def cmd_eval(args, cfg: RunConfig, out) -> int:
    subject = args.subject
    if subject == "mu":
        value = mu_closed(cfg.z1, math.pi * cfg.w0**2 / cfg.wavelength)
    elif subject == "rm":
        value = rm_closed(cfg.z1, cfg.w0, cfg.wm if cfg.wm is not None else cfg.w0, cfg.wavelength)
    elif subject == "variance":
        value = ideal_variance(cfg.network(), cfg.laser())
    elif subject == "practical":
        value = practical_variance(cfg.network(), cfg.laser(), cfg.detector())
    else:
        value = detector_response_factor(cfg.detector(), cfg.k0, cfg.z1)
    out.write(format_scalar(value) + "\n")
    out.write(f"# {EVAL_NOTES[subject]}\n")
    return EXIT_OK


def _output_target(args, default_name):
    if args.output == "-":
        return None
    if args.output:
        return Path(args.output)
    outdir = args.outdir or os.environ.get(OUTPUT_DIR_ENV) or "."
    return Path(outdir) / default_name


def cmd_sweep(args, out, err) -> int:
    if args.preset and args.specfile:
        raise ConfigError("preset", "give either a spec file or --preset, not both")
    if args.preset:
        spec = PRESETS[args.preset]()
        name = args.preset
    elif args.specfile:
        path = Path(args.specfile)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError("specfile", str(exc)) from None
        spec = parse_sweep_text(text)
        name = path.stem
    else:
        raise ConfigError("specfile", "a spec file or --preset is required")
    result = run_sweep(spec, workers=args.workers)
    target = _output_target(args, f"{name}.csv")
    if target is None:
        write_csv(result, out)
    else:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", newline="", encoding="ascii") as fh:
            write_csv(result, fh)
        err.write(f"wrote {len(result.records)} rows to {target}\n")
    return EXIT_OK


def cmd_validate(args, out) -> int:
    names = list(SUITES) if not args.suites or "all" in args.suites else args.suites
    for name in names:
        if name not in SUITES:
            raise ConfigError("suite", f"unknown suite {name!r}")
    out.write(f"vacmirror {__version__} validation, seed {args.seed}\n")
    failed = False
    for name in names:
        func = SUITES[name]
        report = func(seed=args.seed) if name != "overlap" else func()
        out.write(report.render() + "\n")
        if report.mandatory and not report.passed:
            failed = True
    return EXIT_VALIDATION if failed else EXIT_OK


def cmd_scan(args, cfg: RunConfig, out) -> int:
    geometry = None
    template_mu = cfg.mu if cfg.mu is not None else 1.0
    template_rm = cfg.Rm if cfg.Rm is not None else 1.0
    if args.coupled:
        geometry = cfg.geometry()
    template = OpticalNetworkParams(T=cfg.T, Rm=template_rm, mu=template_mu)
    det = cfg.detector() if args.model == "practical" else None
    scan = sub_poisson_scan(template, cfg.laser(), (args.start, args.stop), args.samples,
                            det=det, model=args.model, geometry=geometry)
    out.write(f"# coupling: {scan.coupling}\n# model: {args.model}\n")
    out.write("z1,mu,sqrt_rm,normalized_variance,sub_poisson\n")
    for pt in scan.points:
        out.write(",".join(format_number(v) for v in (pt.z1, pt.mu, pt.sqrt_rm, pt.normalized_variance))
                  + f",{int(pt.is_sub_poisson)}\n")
    best = scan.minimum
    out.write(f"# minimum normalized_variance {format_number(best.normalized_variance)}"
              f" at z1 = {format_number(best.z1)}\n")
    return EXIT_OK


def _add_physics_flags(p):
    g = p.add_argument_group("configuration (lengths in wavelengths unless --wavelength is set)")
    g.add_argument("--config", help="key = value file; flags override its entries")
    g.add_argument("--wavelength", type=float)
    g.add_argument("--T", type=float, help="beam-splitter transmittance (default 0.5)")
    g.add_argument("--Rm", type=float, help="mirror reflectance; omit to derive from w0/wm")
    g.add_argument("--mu", type=float, help="counter-propagating match; omit to derive from w0")
    g.add_argument("--alpha2", type=float, help="|alpha|^2 (default 1)")
    g.add_argument("--phi", type=float)
    g.add_argument("--dk", type=float, help="Gaussian linewidth (default 0)")
    g.add_argument("--kappa", type=float, help="absorption coefficient (default 10 k0)")
    g.add_argument("--D", type=float, help="detector active depth (default one wavelength)")
    g.add_argument("--w0", type=float, help="laser waist on the detector (default 100)")
    g.add_argument("--wm", type=float, help="vacuum waist on the mirror (default w0)")
    g.add_argument("--z1", type=float, help="mirror-to-detector distance (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vacmirror",
        description="Vacuum-fluctuation modulation by a mirror behind a beam splitter.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one quantity at one point")
    p.add_argument("subject", choices=sorted(EVAL_NOTES))
    _add_physics_flags(p)

    p = sub.add_parser("sweep", help="evaluate a quantity on a grid and write CSV")
    p.add_argument("specfile", nargs="?")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("-o", "--output", help="output file, '-' for stdout")
    p.add_argument("--outdir", help=f"output directory (default ${OUTPUT_DIR_ENV} or .)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("validate", help="run oracle checks")
    p.add_argument("suites", nargs="*", metavar="SUITE",
                   help=f"any of {', '.join(SUITES)}, or all (default)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("scan", help="sub-Poisson scan over the mirror distance")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--model", choices=("ideal", "practical"), default="ideal")
    p.add_argument("--coupled", action="store_true",
                   help="recompute mu and sqrt(Rm) from the beam geometry at every z1")
    _add_physics_flags(p)
    return parser


def _load_config(args) -> RunConfig:
    file_values = {}
    if args.config:
        try:
            file_values = parse_config_text(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
    flags = {key: getattr(args, key) for key in CONFIG_KEYS}
    return RunConfig.from_sources(file_values, flags)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            return cmd_eval(args, _load_config(args), out)
        if args.command == "scan":
            return cmd_scan(args, _load_config(args), out)
        if args.command == "sweep":
            return cmd_sweep(args, out, err)
        return cmd_validate(args, out)
    except (ConfigError, ParameterError, SweepSpecError) as exc:
        err.write(f"vacmirror: error: {exc}\n")
        return EXIT_CONFIG
    except GridPointError as exc:
        err.write(f"vacmirror: error: {exc}\n")
        return EXIT_CONFIG if isinstance(exc.cause, ParameterError) else EXIT_NUMERIC
    except (QuadratureError, ArithmeticError) as exc:
        err.write(f"vacmirror: numeric error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
