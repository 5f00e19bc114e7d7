"""
Text formats for run configuration and sweep specifications.

Both are line-oriented ``key = value`` files. ``#`` starts a comment and
blank lines are ignored. A sweep file adds sections::

    quantity = mu

    [fixed]
    wavelength = 1

    [axis w0]
    start = 1
    stop = 200
    count = 80
    spacing = log        # optional, linear by default
    pins = 100           # optional, comma-separated

    [axis z1]
    start = 0
    stop = 50000
    count = 200

Axes are ordered as they appear; the first is the slowest in the output.
"""
from __future__ import annotations

import re

from .errors import SweepSpecError
from .sweep_engine import STRING_PARAMETERS, Axis, Quantity, SweepSpec

_SECTION = re.compile(r"^\[\s*(fixed|axis\s+(\S+))\s*\]$")


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _split(lineno, line):
    if "=" not in line:
        raise SweepSpecError(f"expected 'key = value', got {line!r}", line=lineno)
    key, value = (part.strip() for part in line.split("=", 1))
    if not key or not value:
        raise SweepSpecError(f"expected 'key = value', got {line!r}", line=lineno)
    return key, value


def _number(lineno, key, value):
    try:
        return float(value)
    except ValueError:
        raise SweepSpecError(f"{key}: {value!r} is not a number", line=lineno, field=key) from None


def parse_value(lineno, key, value):
    if key in STRING_PARAMETERS:
        return value
    return _number(lineno, key, value)


def parse_config_text(text) -> dict:
    """Flat ``key = value`` file into a dict; numbers become floats."""
    out = {}
    for lineno, line in _lines(text):
        key, value = _split(lineno, line)
        if key in out:
            raise SweepSpecError(f"{key!r} given twice", line=lineno, field=key)
        out[key] = parse_value(lineno, key, value)
    return out


_AXIS_KEYS = {"start", "stop", "count", "spacing", "pins"}


def _build_axis(name, fields, lineno):
    for required in ("start", "stop", "count"):
        if required not in fields:
            raise SweepSpecError(f"axis {name!r} is missing {required!r}", line=lineno, field=name)
    try:
        return Axis(
            name,
            fields["start"][0],
            fields["stop"][0],
            fields["count"][0],
            fields.get("spacing", ("linear", lineno))[0],
            tuple(fields.get("pins", ((), lineno))[0]),
        )
    except SweepSpecError as exc:
        raise SweepSpecError(str(exc), line=lineno, field=name) from None


def parse_sweep_text(text) -> SweepSpec:
    """Parse a sweep specification; errors name the line and field."""
    quantity = None
    fixed, fixed_lines = {}, {}
    axes = []
    section, axis_name, axis_fields, axis_line = None, None, {}, None

    def close_axis():
        if axis_name is not None:
            axes.append((_build_axis(axis_name, axis_fields, axis_line), axis_line))

    for lineno, line in _lines(text):
        m = _SECTION.match(line)
        if m:
            close_axis()
            axis_name, axis_fields, axis_line = None, {}, lineno
            if m.group(1) == "fixed":
                section = "fixed"
            else:
                section, axis_name = "axis", m.group(2)
            continue
        if line.startswith("["):
            raise SweepSpecError(f"bad section header {line!r}", line=lineno)
        key, value = _split(lineno, line)
        if section is None:
            if key != "quantity":
                raise SweepSpecError(
                    f"unexpected top-level key {key!r} (put parameters under [fixed])",
                    line=lineno, field=key,
                )
            try:
                quantity = Quantity(value)
            except ValueError:
                choices = ", ".join(q.value for q in Quantity)
                raise SweepSpecError(f"quantity must be one of {choices}", line=lineno,
                                     field="quantity") from None
        elif section == "fixed":
            if key in fixed:
                raise SweepSpecError(f"{key!r} given twice", line=lineno, field=key)
            fixed[key] = parse_value(lineno, key, value)
            fixed_lines[key] = lineno
        else:
            if key not in _AXIS_KEYS:
                raise SweepSpecError(f"unknown axis key {key!r}", line=lineno, field=key)
            if key in axis_fields:
                raise SweepSpecError(f"{key!r} given twice", line=lineno, field=key)
            if key == "count":
                try:
                    parsed = int(value)
                except ValueError:
                    raise SweepSpecError(f"count: {value!r} is not an integer", line=lineno,
                                         field="count") from None
            elif key == "spacing":
                parsed = value
            elif key == "pins":
                parsed = [_number(lineno, "pins", v.strip()) for v in value.split(",")]
            else:
                parsed = _number(lineno, key, value)
            axis_fields[key] = (parsed, lineno)
    close_axis()

    if quantity is None:
        raise SweepSpecError("missing 'quantity = ...'", field="quantity")
    if not axes:
        raise SweepSpecError("at least one [axis NAME] section is required")
    try:
        return SweepSpec(quantity, tuple(a for a, _ in axes), fixed)
    except SweepSpecError as exc:
        lines = {a.name: ln for a, ln in axes}
        lines.update(fixed_lines)
        raise SweepSpecError(str(exc), line=lines.get(exc.field), field=exc.field) from None


def format_sweep_spec(spec: SweepSpec) -> str:
    """Inverse of :func:`parse_sweep_text`."""
    out = [f"quantity = {spec.quantity.value}"]
    if spec.fixed:
        out += ["", "[fixed]"] + [f"{k} = {v!r}" if not isinstance(v, str) else f"{k} = {v}"
                                  for k, v in spec.fixed.items()]
    for a in spec.axes:
        out += ["", f"[axis {a.name}]", f"start = {a.start!r}", f"stop = {a.stop!r}",
                f"count = {a.count}", f"spacing = {a.spacing}"]
        if a.pins:
            out.append("pins = " + ", ".join(repr(float(p)) for p in a.pins))
    return "\n".join(out) + "\n"
