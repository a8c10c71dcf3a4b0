"""Sweep-grid containers and machine-readable export (CSV / JSON).

A :class:`SpectrumGrid` is the common output of all solver layers: axis
vectors in Hz, a row-major value matrix (y outer, x inner) and a
metadata record.  Serialization rules, chosen so that outputs are
byte-stable and round-trippable:

* CSV: ``#``-prefixed ``key = value`` metadata lines, then a header
  row, then data rows; numbers written with 12 significant digits;
  masked cells as the literal ``nan``.
* JSON: full-precision floats (repr round-trip), so re-ingesting a
  file reproduces the grid bit for bit.
* The only non-deterministic field is ``generated`` in the metadata;
  comparisons must exclude it.
"""

from __future__ import annotations

import datetime
import json
import math
from dataclasses import dataclass, field

import numpy as np

OBSERVABLES = ("population", "dispersive_shift_hz")
LAYERS = ("adiabatic_impulse", "rwa", "lindblad2", "lindblad5")


@dataclass(frozen=True)
class GridSpec:
    """A 2-D sweep request in internal angular units (rad/s).

    ``nu`` is the detuning axis; ``y`` is either the modulation
    frequency axis (``y_kind='omega_mod'``, with ``delta`` fixed) or the
    modulation amplitude axis (``y_kind='delta'``, with ``omega_mod``
    fixed).
    """

    nu: np.ndarray
    y_kind: str
    y: np.ndarray
    delta: float | None = None
    omega_mod: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "nu", np.asarray(self.nu, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.nu.size == 0 or self.y.size == 0:
            raise ValueError("grid axes must be non-empty")
        if self.y_kind == "omega_mod":
            if self.delta is None:
                raise ValueError("y_kind='omega_mod' requires a fixed delta")
        elif self.y_kind == "delta":
            if self.omega_mod is None:
                raise ValueError("y_kind='delta' requires a fixed omega_mod")
        else:
            raise ValueError("y_kind must be 'omega_mod' or 'delta'")
        for ax in (self.nu, self.y):
            if ax.size > 1 and not (np.all(np.diff(ax) > 0) or np.all(np.diff(ax) < 0)):
                raise ValueError("grid axes must be strictly monotone")

    def resolve(self, y_value: float) -> tuple[float, float]:
        """(delta, omega_mod) for one y-axis value."""
        if self.y_kind == "omega_mod":
            return self.delta, float(y_value)
        return float(y_value), self.omega_mod

    def fixed_meta(self) -> dict:
        if self.y_kind == "omega_mod":
            return {"delta_hz": self.delta / (2 * np.pi)}
        return {"omega_mod_hz": self.omega_mod / (2 * np.pi)}


@dataclass
class SpectrumGrid:
    """2-D sweep result with Hz axes; values row-major (y outer, x inner)."""

    x_hz: np.ndarray
    y_hz: np.ndarray
    values: np.ndarray
    observable: str
    layer: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_hz = np.asarray(self.x_hz, dtype=float)
        self.y_hz = np.asarray(self.y_hz, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.y_hz.size, self.x_hz.size):
            raise ValueError("values shape must be (len(y), len(x))")
        if self.observable not in OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}")
        if self.layer not in LAYERS:
            raise ValueError(f"unknown layer {self.layer!r}")


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def grid_to_csv(grid: SpectrumGrid, path, generated: str | None = None) -> None:
    """Write a grid as metadata comments + header row + data rows."""
    lines = [
        f"# observable = {grid.observable}",
        f"# layer = {grid.layer}",
        f"# generated = {generated or datetime.datetime.now(datetime.timezone.utc).isoformat()}",
    ]
    for key, val in sorted(grid.meta.items()):
        if key in ("layer",):
            continue
        lines.append(f"# {key} = {json.dumps(val, sort_keys=True)}")
    header = ["y_hz\\x_hz"] + [_fmt(x) for x in grid.x_hz]
    lines.append(",".join(header))
    for yv, row in zip(grid.y_hz, grid.values):
        lines.append(",".join([_fmt(yv)] + [_fmt(v) for v in row]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def grid_to_json(grid: SpectrumGrid, path=None, generated: str | None = None):
    """Serialize with full float precision; returns the string if path is None."""
    payload = {
        "observable": grid.observable,
        "layer": grid.layer,
        "x_hz": grid.x_hz.tolist(),
        "y_hz": grid.y_hz.tolist(),
        "values": grid.values.tolist(),
        "meta": dict(grid.meta, generated=generated
                     or datetime.datetime.now(datetime.timezone.utc).isoformat()),
    }
    text = json.dumps(payload, indent=1, sort_keys=True)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return None


def grid_from_json(path_or_text) -> SpectrumGrid:
    """Inverse of :func:`grid_to_json` (bit-exact for the data sections)."""
    if hasattr(path_or_text, "read"):
        payload = json.load(path_or_text)
    else:
        text = str(path_or_text)
        if text.lstrip().startswith("{"):
            payload = json.loads(text)
        else:
            with open(text) as fh:
                payload = json.load(fh)
    return SpectrumGrid(
        x_hz=np.array(payload["x_hz"], dtype=float),
        y_hz=np.array(payload["y_hz"], dtype=float),
        values=np.array(payload["values"], dtype=float),
        observable=payload["observable"],
        layer=payload["layer"],
        meta=payload.get("meta", {}),
    )


def curve_to_csv(points: np.ndarray, path, columns=("omega_hz", "nu_hz"),
                 meta: dict | None = None, generated: str | None = None) -> None:
    """Write an (N, k) point array as a small CSV table."""
    points = np.asarray(points, dtype=float).reshape(-1, len(columns))
    lines = [f"# generated = {generated or datetime.datetime.now(datetime.timezone.utc).isoformat()}"]
    for key, val in sorted((meta or {}).items()):
        lines.append(f"# {key} = {json.dumps(val, sort_keys=True)}")
    lines.append(",".join(columns))
    for row in points:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
