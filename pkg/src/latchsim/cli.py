"""Config-driven command line front end.

Subcommands
-----------
``spectrum``      2-D sweep of one solver layer, written as CSV + JSON.
``resonances``    Analytic resonance/antiresonance curve families, one
                  CSV per (family, index).
``sidebands``     Observable traces along one sideband nu = -m Omega
                  versus modulation frequency, per requested layer.
``sudden``        Ramp-validity table: second-order formula vs the
                  Schroedinger oracle over a detuning range.
``fit-transmon``  Fit (E_C, E_J_sum, d) to a measured flux spectrum CSV.

Configuration is a flat INI file (sections ``waveform``, ``qubit``,
``transmon``, ``sweep``, ``output`` plus per-command sections); all
frequencies there are plain Hz and are converted to angular units
internally.  See docs/config_format.md for the grammar.  ``--threads``
(or the ``LATCHSIM_THREADS`` environment variable) parallelizes grid
rows; results are identical at any thread count.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import dynamics, latch_model, rwa, sudden, transmon
from .grids import GridSpec, SpectrumGrid, curve_to_csv, grid_to_csv, grid_to_json
from .latch_model import QubitParams, ResonanceFamily
from .sudden import RampSpec
from .waveforms import ModulationWaveform, WaveformKind

TWO_PI = 2.0 * np.pi

_FAMILIES = {
    "diff": ResonanceFamily.DIFF_RES,
    "sum": ResonanceFamily.SUM_RES,
    "single": ResonanceFamily.SINGLE_PERIOD_RES,
    "anti": ResonanceFamily.ANTI_RES,
}

_LAYERS = ("adiabatic", "rwa", "lindblad2", "lindblad5")


class ConfigError(ValueError):
    """Invalid or missing configuration entry, with location diagnostics."""


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        outdir = Path(args.out or _get(cfg, "output", "dir", fallback="out"))
        outdir.mkdir(parents=True, exist_ok=True)
        prefix = _get(cfg, "output", "prefix", fallback="latchsim")
        threads = args.threads or int(os.environ.get("LATCHSIM_THREADS", "1"))
        if args.command == "spectrum":
            _cmd_spectrum(cfg, args, outdir, prefix, threads)
        elif args.command == "resonances":
            _cmd_resonances(cfg, outdir, prefix)
        elif args.command == "sidebands":
            _cmd_sidebands(cfg, outdir, prefix)
        elif args.command == "sudden":
            _cmd_sudden(cfg, outdir, prefix)
        elif args.command == "fit-transmon":
            _cmd_fit_transmon(cfg, args, outdir, prefix)
        else:  # pragma: no cover - argparse enforces choices
            parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latchsim",
        description="Stueckelberg-interference sweeps for latching and sinusoidal modulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "resonances", "sidebands", "sudden", "fit-transmon"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="INI config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="parallel workers (default LATCHSIM_THREADS or 1)")
        if name == "spectrum":
            p.add_argument("--layer", choices=_LAYERS, default=None,
                           help="override [sweep] layer")
            p.add_argument("--grid", default=None, metavar="NxM",
                           help="override grid size (nu x y)")
        if name == "fit-transmon":
            p.add_argument("--data", default=None, help="flux spectrum CSV")
    return parser


# ---------------------------------------------------------------- config


def _load_config(path) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    found = cfg.read(path)
    if not found:
        raise ConfigError(f"cannot read config file {path!r}")
    return cfg


def _get(cfg, section, key, fallback=None, required=False):
    if cfg.has_option(section, key):
        return cfg.get(section, key)
    if required:
        raise ConfigError(f"missing [{section}] {key}")
    return fallback


def _get_float(cfg, section, key, fallback=None, required=False):
    raw = _get(cfg, section, key, required=required)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from exc


def _parse_range(raw, section, key):
    """'start:stop:count' -> linspace in the same units."""
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"[{section}] {key} must be 'start:stop:count'")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} malformed") from exc
    if count < 1:
        raise ConfigError(f"[{section}] {key}: count must be >= 1")
    return np.linspace(start, stop, count)


def _parse_list(raw):
    return [item.strip() for item in raw.split(",") if item.strip()]


def _qubit_params(cfg) -> QubitParams:
    omega0 = TWO_PI * _get_float(cfg, "qubit", "omega0_hz", required=True)
    g = TWO_PI * _get_float(cfg, "qubit", "g_hz", required=True)
    gamma1 = TWO_PI * _get_float(cfg, "qubit", "gamma1_hz", fallback=0.0)
    if cfg.has_option("qubit", "gamma_phi_hz"):
        gamma_phi = TWO_PI * _get_float(cfg, "qubit", "gamma_phi_hz")
    elif cfg.has_option("qubit", "gamma2_hz"):
        gamma2 = TWO_PI * _get_float(cfg, "qubit", "gamma2_hz")
        gamma_phi = gamma2 - gamma1 / 2.0
        if gamma_phi < 0.0:
            raise ConfigError("[qubit] gamma2_hz smaller than gamma1_hz / 2")
    else:
        gamma_phi = 0.0
    return QubitParams(
        omega0=omega0,
        omega=omega0,  # per-point detuning is set by the sweep
        g=g,
        gamma1=gamma1,
        gamma_phi=gamma_phi,
        t_bath=_get_float(cfg, "qubit", "t_bath_k", fallback=0.0),
    )


def _waveform(cfg, delta=None, omega_mod=None) -> ModulationWaveform:
    kind_raw = _get(cfg, "waveform", "kind", fallback="square")
    try:
        kind = WaveformKind(kind_raw)
    except ValueError as exc:
        raise ConfigError(f"[waveform] kind = {kind_raw!r} unknown") from exc
    delta = delta if delta is not None else TWO_PI * _get_float(
        cfg, "waveform", "delta_hz", required=True)
    omega_mod = omega_mod if omega_mod is not None else TWO_PI * _get_float(
        cfg, "waveform", "omega_hz", required=True)
    return ModulationWaveform(
        kind=kind,
        delta=delta,
        omega=omega_mod,
        phase=_get_float(cfg, "waveform", "phase_rad", fallback=0.0),
        ramp=_get_float(cfg, "waveform", "ramp_s", fallback=0.0),
    )


def _transmon_params(cfg) -> transmon.TransmonParams:
    return transmon.TransmonParams(
        e_c=TWO_PI * _get_float(cfg, "transmon", "e_c_hz", required=True),
        e_j_sum=TWO_PI * _get_float(cfg, "transmon", "e_j_sum_hz", required=True),
        asym=_get_float(cfg, "transmon", "asym", fallback=0.0),
        flux_dc=_get_float(cfg, "transmon", "flux_dc", fallback=0.0),
        flux_sq=_get_float(cfg, "transmon", "flux_sq", fallback=0.0),
        omega_r=TWO_PI * _get_float(cfg, "transmon", "omega_r_hz", fallback=0.0),
        g0=TWO_PI * _get_float(cfg, "transmon", "g0_hz", fallback=0.0),
        n_r=_get_float(cfg, "transmon", "n_r", fallback=0.0),
        n_g=_get_float(cfg, "transmon", "n_g", fallback=0.0),
        n_levels=int(_get_float(cfg, "transmon", "n_levels", fallback=5)),
    )


def _grid_spec(cfg, args) -> GridSpec:
    nu = TWO_PI * _parse_range(_get(cfg, "sweep", "nu_hz", required=True), "sweep", "nu_hz")
    y_kind = _get(cfg, "sweep", "y", fallback="omega_mod")
    if y_kind not in ("omega_mod", "delta"):
        raise ConfigError("[sweep] y must be 'omega_mod' or 'delta'")
    if y_kind == "omega_mod":
        y = TWO_PI * _parse_range(
            _get(cfg, "sweep", "omega_mod_hz", required=True), "sweep", "omega_mod_hz")
        fixed = {"delta": TWO_PI * _get_float(cfg, "waveform", "delta_hz", required=True)}
    else:
        y = TWO_PI * _parse_range(
            _get(cfg, "sweep", "delta_hz", required=True), "sweep", "delta_hz")
        fixed = {"omega_mod": TWO_PI * _get_float(cfg, "waveform", "omega_hz", required=True)}
    if getattr(args, "grid", None):
        try:
            nx, ny = (int(v) for v in args.grid.lower().split("x"))
        except ValueError as exc:
            raise ConfigError("--grid must look like 41x41") from exc
        nu = np.linspace(nu[0], nu[-1], nx)
        y = np.linspace(y[0], y[-1], ny)
    return GridSpec(nu=nu, y_kind=y_kind, y=y, **fixed)


# ------------------------------------------------------------- commands


def _cmd_spectrum(cfg, args, outdir: Path, prefix: str, threads: int):
    layer = args.layer or _get(cfg, "sweep", "layer", fallback="lindblad2")
    if layer not in _LAYERS:
        raise ConfigError(f"[sweep] layer = {layer!r} unknown")
    q = _qubit_params(cfg)
    grid = _grid_spec(cfg, args)
    if layer == "adiabatic":
        result = latch_model.latch_spectrum(q, grid)
    elif layer == "rwa":
        result = _rwa_spectrum(cfg, q, grid)
    else:
        w = _waveform(cfg, delta=grid.delta or 0.0, omega_mod=grid.omega_mod or 1.0)
        if layer == "lindblad5":
            tp = _transmon_params(cfg)
            model = dynamics.transmon_ladder_model(q, tp.e_c, tp.n_levels)
            result = dynamics.dissipative_spectrum(
                model, q, w, grid, observable="dispersive_shift_hz", tp=tp,
                threads=threads)
        else:
            model = dynamics.two_level_model(q)
            result = dynamics.dissipative_spectrum(model, q, w, grid, threads=threads)
    base = outdir / f"{prefix}_spectrum_{layer}"
    grid_to_csv(result, base.with_suffix(".csv"))
    grid_to_json(result, base.with_suffix(".json"))
    print(f"wrote {base.with_suffix('.csv')} and {base.with_suffix('.json')}"
          f" ({result.meta.get('nan_cells', 0)} masked cells)")


def _rwa_spectrum(cfg, q: QubitParams, grid: GridSpec) -> SpectrumGrid:
    """Analytic multi-sideband population over the grid (one sideband set per row)."""
    kind_raw = _get(cfg, "waveform", "kind", fallback="square")
    kind = WaveformKind(kind_raw)
    if q.gamma1 <= 0.0:
        raise ConfigError("rwa layer requires [qubit] gamma1_hz > 0")
    values = np.empty((grid.y.size, grid.nu.size))
    for j, yv in enumerate(grid.y):
        delta, omega_mod = grid.resolve(yv)
        sb = rwa.sideband_set(kind, delta / omega_mod)
        for i, nu in enumerate(grid.nu):
            values[j, i] = rwa.rwa_population(q, sb, omega_mod, nu)
    meta = {
        "layer": "rwa",
        "nan_cells": 0,
        "waveform": kind.value,
        "rwa_valid_min_omega_hz": q.g / TWO_PI,
        "fixed": grid.fixed_meta(),
    }
    return SpectrumGrid(grid.nu / TWO_PI, grid.y / TWO_PI, values,
                        "population", "rwa", meta)


def _cmd_resonances(cfg, outdir: Path, prefix: str):
    q = _qubit_params(cfg)
    delta = TWO_PI * _get_float(cfg, "waveform", "delta_hz", required=True)
    omegas = TWO_PI * _parse_range(
        _get(cfg, "resonances", "omega_mod_hz", required=True),
        "resonances", "omega_mod_hz")
    family_names = _parse_list(_get(cfg, "resonances", "families", fallback="diff,sum,anti"))
    indices = [int(v) for v in _parse_list(_get(cfg, "resonances", "indices", fallback="1,2,3,4"))]
    for name in family_names:
        if name not in _FAMILIES:
            raise ConfigError(f"[resonances] unknown family {name!r}")
        for index in indices:
            fam = _FAMILIES[name]
            if fam is ResonanceFamily.SINGLE_PERIOD_RES and index < 0:
                continue
            pts = latch_model.resonance_curves(q, delta, fam, index, omegas)
            pts_hz = pts / TWO_PI
            path = outdir / f"{prefix}_resonance_{name}{index}.csv"
            curve_to_csv(pts_hz, path, meta={"family": name, "index": index,
                                             "delta_hz": delta / TWO_PI,
                                             "g_hz": q.g / TWO_PI})
            print(f"wrote {path} ({pts_hz.shape[0]} points)")


def _cmd_sidebands(cfg, outdir: Path, prefix: str):
    q = _qubit_params(cfg)
    m = int(_get_float(cfg, "sidebands", "m", required=True))
    average_pm = _get(cfg, "sidebands", "average_pm", fallback="true").lower() in ("1", "true", "yes")
    layers = _parse_list(_get(cfg, "sidebands", "layers", fallback="rwa,lindblad2"))
    omegas = TWO_PI * _parse_range(
        _get(cfg, "sidebands", "omega_mod_hz", required=True), "sidebands", "omega_mod_hz")
    delta = TWO_PI * _get_float(cfg, "waveform", "delta_hz", required=True)
    kind = WaveformKind(_get(cfg, "waveform", "kind", fallback="square"))
    tp = _transmon_params(cfg) if "lindblad5" in layers else None

    columns = ["omega_hz"] + layers + ["rwa_extrapolated"]
    rows = []
    for om in omegas:
        nus = [-m * om, m * om] if average_pm else [-m * om]
        row = [om / TWO_PI]
        for layer in layers:
            row.append(np.mean([_sideband_value(layer, cfg, q, kind, delta, om, nu, tp)
                                for nu in nus]))
        row.append(0.0 if rwa.rwa_valid(q, om) else 1.0)
        rows.append(row)
    path = outdir / f"{prefix}_sideband_m{m}.csv"
    curve_to_csv(np.array(rows), path, columns=tuple(columns),
                 meta={"m": m, "average_pm": average_pm, "waveform": kind.value,
                       "delta_hz": delta / TWO_PI})
    print(f"wrote {path} ({len(rows)} rows)")


def _sideband_value(layer, cfg, q, kind, delta, omega_mod, nu, tp):
    qp = replace(q, omega=q.omega0 - nu)
    if layer == "rwa":
        sb = rwa.sideband_set(kind, delta / omega_mod)
        return rwa.rwa_population(qp, sb, omega_mod, nu)
    if layer == "adiabatic":
        lf = latch_model.latch_frame(qp, delta, omega_mod)
        return latch_model.averaged_population(lf)
    w = ModulationWaveform(kind, delta, omega_mod)
    if layer == "lindblad2":
        model = dynamics.two_level_model(qp)
        _, pops = dynamics.steady_state(model, qp, w)
        return pops[1]
    if layer == "lindblad5":
        model = dynamics.transmon_ladder_model(qp, tp.e_c, tp.n_levels)
        background = dynamics.dispersive_shift(tp, dynamics.undriven_populations(model, qp))
        _, pops = dynamics.steady_state(model, qp, w)
        return (dynamics.dispersive_shift(tp, pops) - background) / TWO_PI
    raise ConfigError(f"[sidebands] unknown layer {layer!r}")


def _cmd_sudden(cfg, outdir: Path, prefix: str):
    q = _qubit_params(cfg)
    delta = TWO_PI * _get_float(cfg, "waveform", "delta_hz", required=True)
    t_ramps = [1e-9 * float(v) for v in _parse_list(
        _get(cfg, "sudden", "t_ramp_ns", fallback="1,2"))]
    nus = TWO_PI * _parse_range(
        _get(cfg, "sudden", "nu_hz", required=True), "sudden", "nu_hz")
    columns = ["nu_hz"]
    for k, _ in enumerate(t_ramps):
        columns += [f"w_formula_t{k}", f"w_oracle_t{k}"]
    rows = []
    for nu in nus:
        qp = replace(q, omega=q.omega0 - nu)
        row = [nu / TWO_PI]
        for t_ramp in t_ramps:
            row.append(sudden.sudden_error(qp, delta, RampSpec(t_ramp)))
            row.append(sudden.ramp_transition_oracle(qp, delta, t_ramp)
                       if t_ramp > 0 else 0.0)
        rows.append(row)
    path = outdir / f"{prefix}_sudden.csv"
    curve_to_csv(np.array(rows), path, columns=tuple(columns),
                 meta={"t_ramp_ns": [t * 1e9 for t in t_ramps],
                       "delta_hz": delta / TWO_PI, "g_hz": q.g / TWO_PI})
    print(f"wrote {path} ({len(rows)} rows)")


def _cmd_fit_transmon(cfg, args, outdir: Path, prefix: str):
    data_path = args.data or _get(cfg, "fit", "data", required=True)
    flux, f01_hz = _read_flux_csv(data_path)
    initial = _transmon_params(cfg)
    fitted, rms = transmon.fit_flux_spectrum(flux, TWO_PI * f01_hz, initial)
    result = {
        "e_c_hz": fitted.e_c / TWO_PI,
        "e_j_sum_hz": fitted.e_j_sum / TWO_PI,
        "asym": fitted.asym,
        "rms_hz": rms / TWO_PI,
        "n_points": int(flux.size),
    }
    path = outdir / f"{prefix}_transmon_fit.json"
    with open(path, "w") as fh:
        json.dump(result, fh, indent=1, sort_keys=True)
        fh.write("\n")
    resid = np.column_stack([
        flux,
        f01_hz,
        [transmon.charge_basis_levels(fitted, f)[1] / TWO_PI for f in flux],
    ])
    curve_to_csv(resid, outdir / f"{prefix}_transmon_fit_residuals.csv",
                 columns=("flux", "f01_measured_hz", "f01_fitted_hz"))
    print(f"wrote {path} (rms {result['rms_hz']:.4g} Hz)")


def _read_flux_csv(path):
    flux, freq = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                values = [float(p) for p in parts[:2]]
            except ValueError:
                continue  # header row
            flux.append(values[0])
            freq.append(values[1])
    if len(flux) < 3:
        raise ConfigError(f"flux CSV {path!r} has fewer than 3 data rows")
    return np.array(flux), np.array(freq)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
