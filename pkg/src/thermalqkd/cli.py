"""Command line front end: sweeps, figure presets, time-series runs, CSV.

Configuration is a flat ``key = value`` text file with ``#`` comment
lines; ``--set key=value`` flags override file entries, and the
dedicated flags (``--out``, ``--seed``) override both.  Transmittance
values accept a dB suffix ("-7dB" means 10^-0.7).  Exit codes: 0
success, 2 usage or validation, 3 I/O.

Every CSV starts with one ``#`` comment line echoing the tool version,
the full parameter set, and the seed; data columns follow in the frozen
order documented in the README.  Output is byte-identical across runs
with identical inputs, whatever ``--threads`` says.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    DegenerateChannelError,
    DomainError,
    UnphysicalStateError,
)
from .metrics import MetricsReport, evaluate, eve_energy_bounds
from .network import ProtocolParams
from .timeseries import (
    SimConfig,
    apply_delay,
    ber_and_mutual_info,
    detect,
    estimate_g2,
    generate_field,
    slice_bits,
    split_field,
    thermality_test,
    write_field_trace,
)

__all__ = [
    "SweepSpec",
    "main",
    "cmd_metrics_sweep",
    "cmd_figure",
    "cmd_timeseries",
    "cmd_g2",
    "cmd_eve_bounds",
]

PARAM_COLUMNS = tuple(f.name for f in fields(ProtocolParams))
METRIC_COLUMNS = ("i_ab", "i_be", "chi_be", "chi_ae", "discord_b_given_a",
                  "discord_quadrature", "key_rate_k", "key_rate_k_prime")
CSV_COLUMNS = PARAM_COLUMNS + METRIC_COLUMNS

_DB_PARAMS = {"eta1", "eta2", "eta4"}
_SWEEPABLE = set(PARAM_COLUMNS) | {"v_s"}
_SIM_KEYS = {"sample_rate", "duration", "coherence_time", "mean_intensity",
             "regime", "detector_window", "electronic_noise_sd", "shot_noise",
             "photons_per_intensity", "seed", "path_delay"}
_FIGURE_GRID = (0.02, 0.98, 50)


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _parse_float(key: str, text: str) -> float:
    raw = text.strip()
    if key in _DB_PARAMS and raw.lower().endswith("db"):
        return 10.0 ** (float(raw[:-2]) / 10.0)
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"cannot read {key}={raw!r} as a number") from None


def _parse_bool(key: str, text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "on", "yes"):
        return True
    if lowered in ("0", "false", "off", "no"):
        return False
    raise DomainError(f"cannot read {key}={text!r} as on/off")


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise DomainError(f"cannot read {key}={text!r} as an integer") from None


def _read_config(path: Path) -> dict[str, str]:
    settings: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise DomainError(f"{path}:{lineno}: expected key = value, got {line!r}")
        settings[key.strip()] = value.strip()
    return settings


def _collect_settings(args) -> dict[str, str]:
    settings: dict[str, str] = {}
    if args.config is not None:
        settings.update(_read_config(args.config))
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"--set expects KEY=VALUE, got {item!r}")
        settings[key.strip()] = value.strip()
    if args.seed is not None:
        settings["seed"] = str(args.seed)
    if args.out is not None:
        settings["out"] = str(args.out)
    return settings


# ------------------------------------------------------------ metrics sweep

@dataclass(frozen=True)
class SweepSpec:
    """One validated sweep: a grid over one parameter, the rest fixed."""

    param: str
    lo: float
    hi: float
    count: int
    spacing: str
    fixed: dict[str, float]
    out: Path
    seed: int

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def points(self) -> list[ProtocolParams]:
        rows = []
        for value in self.grid():
            overrides = dict(self.fixed)
            if self.param == "v_s":
                overrides["v_s_x"] = overrides["v_s_p"] = float(value)
            else:
                overrides[self.param] = float(value)
            rows.append(ProtocolParams(**overrides))
        return rows


def _fixed_params_from(settings: dict[str, str], skip: str) -> dict[str, float]:
    fixed: dict[str, float] = {}
    for key, raw in settings.items():
        if key in ("sweep", "out", "seed") or key == skip:
            continue
        if key == "v_s":
            fixed["v_s_x"] = fixed["v_s_p"] = _parse_float(key, raw)
        elif key in PARAM_COLUMNS:
            fixed[key] = _parse_float(key, raw)
        else:
            raise DomainError(f"unknown parameter {key!r}")
    return fixed


def _sweep_spec(settings: dict[str, str]) -> SweepSpec:
    if "sweep" not in settings:
        raise DomainError("missing sweep=PARAM:MIN:MAX:COUNT[:SPACING]")
    parts = settings["sweep"].split(":")
    if len(parts) not in (4, 5):
        raise DomainError(
            f"sweep must be PARAM:MIN:MAX:COUNT[:SPACING], got {settings['sweep']!r}")
    param = parts[0].strip()
    if param not in _SWEEPABLE:
        raise DomainError(f"cannot sweep {param!r}; choose one of "
                          + ", ".join(sorted(_SWEEPABLE)))
    lo = _parse_float(param, parts[1])
    hi = _parse_float(param, parts[2])
    count = _parse_int("count", parts[3])
    spacing = parts[4].strip() if len(parts) == 5 else "linear"
    if spacing not in ("linear", "log"):
        raise DomainError(f"spacing must be linear or log, got {spacing!r}")
    if count < 2:
        raise DomainError(f"sweep needs at least 2 points, got {count}")
    if lo == hi:
        raise DomainError("sweep endpoints must differ")
    if spacing == "log" and (lo <= 0.0 or hi <= 0.0):
        raise DomainError("log spacing needs positive endpoints")
    if "out" not in settings:
        raise DomainError("no output path (--out or out= in config)")
    seed = _parse_int("seed", settings.get("seed", "0"))
    if not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be a 64-bit unsigned int, got {seed}")
    fixed = _fixed_params_from(settings, skip=param)
    spec = SweepSpec(param=param, lo=lo, hi=hi, count=count, spacing=spacing,
                     fixed=fixed, out=Path(settings["out"]), seed=seed)
    spec.points()  # surfaces out-of-domain grids before any work
    return spec


def _evaluate_grid(points: list[ProtocolParams], threads: int) -> list[MetricsReport]:
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(evaluate, points))


def _report_row(report: MetricsReport) -> str:
    cells = [_fmt(getattr(report.params, name)) for name in PARAM_COLUMNS]
    cells += [_fmt(getattr(report, name)) for name in METRIC_COLUMNS]
    return ",".join(cells)


def _sweep_csv(spec: SweepSpec, reports: list[MetricsReport],
               command: str, extra_echo: str = "") -> str:
    sweep_echo = "sweep=%s:%s:%s:%d:%s" % (
        spec.param, _fmt(spec.lo), _fmt(spec.hi), spec.count, spec.spacing)
    resolved = ProtocolParams(**spec.fixed)
    swept = {"v_s_x", "v_s_p"} if spec.param == "v_s" else {spec.param}
    fixed_echo = ", ".join(
        f"{name}={_fmt(getattr(resolved, name))}" for name in PARAM_COLUMNS
        if name not in swept)
    pieces = [f"# thermalqkd v{__version__}", f"command={command}"]
    if extra_echo:
        pieces.append(extra_echo)
    pieces.append(sweep_echo)
    if fixed_echo:
        pieces.append(fixed_echo)
    pieces.append(f"seed={spec.seed}")
    lines = [", ".join(pieces), ",".join(CSV_COLUMNS)]
    lines.extend(_report_row(report) for report in reports)
    return "\n".join(lines) + "\n"


def cmd_metrics_sweep(settings: dict[str, str], threads: int) -> int:
    spec = _sweep_spec(settings)
    reports = _evaluate_grid(spec.points(), threads)
    spec.out.write_text(_sweep_csv(spec, reports, "metrics-sweep"))
    return 0


# ------------------------------------------------------------------ figures

def _figure_runs(preset: str):
    """Per-preset sweep list [(filename, fixed-param dict)] plus notes."""
    lo, hi, count = _FIGURE_GRID
    eta4_db7 = 10.0 ** -0.7
    if preset in ("fig5", "fig6", "fig7", "fig8"):
        base = {"eta1": 0.5, "eta4": eta4_db7, "epsilon": 1e-2,
                "v_s_x": 200.0, "v_s_p": 200.0, "n_a": 1.0, "n_b": 1.0}
        sweep = ("eta2", lo, hi, count, "linear")
        notes = [
            "eta4 assumed -7 dB (0.1995); unstated for this scenario",
            "source variance v_s = 200 shot-noise units on both quadratures",
        ]
        if preset == "fig5":
            runs = [(f"fig5_ve{v:g}.csv", {**base, "v_e": float(v)})
                    for v in (1, 2, 5)]
            notes.append("series vary the adversary input variance v_e")
        elif preset == "fig6":
            runs = [(f"fig6_ve{v:g}.csv", {**base, "v_e": float(v)})
                    for v in (1, 2)]
            notes.append("series vary the adversary input variance v_e")
        elif preset == "fig7":
            runs = [(f"fig7_eps{e:g}.csv", {**base, "v_e": 2.0, "epsilon": e})
                    for e in (1e-2, 1.0)]
            notes.append("series vary the excess channel noise epsilon")
        else:
            runs = [(f"fig8_n{n:g}.csv",
                     {**base, "v_e": 2.0, "n_a": float(n), "n_b": float(n)})
                    for n in (1, 5)]
            notes.append("series vary the trusted detector noise n_a = n_b")
        return runs, sweep, None, notes
    if preset == "fig4":
        base = {"eta2": 0.5, "eta4": 0.9, "epsilon": 1e-2, "v_e": 2.0,
                "n_a": 1.0, "n_b": 1.0}
        runs = [("fig4_thermal.csv", {**base, "v_s_x": 3.0, "v_s_p": 3.0}),
                ("fig4_coherent.csv", {**base, "v_s_x": 1.0, "v_s_p": 1.0})]
        sweep = ("eta1", 0.01, 0.99, 99, "linear")
        grid_axes = ("eta1", "eta2", 0.02, 0.98, 41)
        notes = [
            "thermal panel uses v_s = 3, coherent panel v_s = 1",
            "v_e = 2 chosen so the adversary's arm decouples from the "
            "forward channel at eta1 = 0.5",
            "eta4 = 0.9, epsilon = 0.01, n_a = n_b = 1 assumed",
            "heatmap grids are simulated over (eta1, eta2); slices fix "
            "eta2 = 0.5",
        ]
        return runs, sweep, grid_axes, notes
    raise DomainError(f"unknown preset {preset!r}; choose fig4..fig8")


def _grid_csv(preset: str, fixed: dict[str, float], axes, threads: int) -> str:
    name_a, name_b, lo, hi, count = axes
    values = np.linspace(lo, hi, count)
    points = []
    for va in values:
        for vb in values:
            points.append(ProtocolParams(**{**fixed, name_a: float(va),
                                            name_b: float(vb)}))
    reports = _evaluate_grid(points, threads)
    fixed_echo = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(fixed.items()))
    grid_echo = "grid=%s:%s:%s:%d;%s:%s:%s:%d" % (
        name_a, _fmt(lo), _fmt(hi), count, name_b, _fmt(lo), _fmt(hi), count)
    header = (f"# thermalqkd v{__version__}, command=figure, preset={preset}, "
              f"{grid_echo}, {fixed_echo}, seed=0")
    lines = [header, ",".join(CSV_COLUMNS)]
    lines.extend(_report_row(report) for report in reports)
    return "\n".join(lines) + "\n"


def cmd_figure(preset: str, out_dir: Path, threads: int) -> int:
    runs, sweep, grid_axes, notes = _figure_runs(preset)
    out_dir.mkdir(parents=True, exist_ok=True)
    param, lo, hi, count, spacing = sweep
    manifest = {
        "figure": preset,
        "sweep": {"param": param, "min": lo, "max": hi, "count": count,
                  "spacing": spacing},
        "files": {},
        "notes": notes,
    }
    for filename, fixed in runs:
        spec = SweepSpec(param=param, lo=lo, hi=hi, count=count,
                         spacing=spacing, fixed=fixed,
                         out=out_dir / filename, seed=0)
        reports = _evaluate_grid(spec.points(), threads)
        spec.out.write_text(
            _sweep_csv(spec, reports, "figure", extra_echo=f"preset={preset}"))
        manifest["files"][filename] = {k: v for k, v in sorted(fixed.items())}
    if grid_axes is not None:
        manifest["grid"] = {"axes": [grid_axes[0], grid_axes[1]],
                            "min": grid_axes[2], "max": grid_axes[3],
                            "count": grid_axes[4]}
        for filename, fixed in runs:
            grid_fixed = {k: v for k, v in fixed.items()
                          if k not in (grid_axes[0], grid_axes[1])}
            grid_name = filename.replace(".csv", "_grid.csv")
            (out_dir / grid_name).write_text(
                _grid_csv(preset, grid_fixed, grid_axes, threads))
            manifest["files"][grid_name] = dict(sorted(grid_fixed.items()))
    (out_dir / f"{preset}_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


# -------------------------------------------------------------- time series

def _sim_config(settings: dict[str, str], extras: set[str]) -> SimConfig:
    unknown = set(settings) - _SIM_KEYS - extras
    if unknown:
        raise DomainError(f"unknown keys: {', '.join(sorted(unknown))}")
    kwargs = {}
    for key in _SIM_KEYS & set(settings):
        raw = settings[key]
        if key == "regime":
            kwargs[key] = raw
        elif key == "shot_noise":
            kwargs[key] = _parse_bool(key, raw)
        elif key == "seed":
            kwargs["rng_seed"] = _parse_int(key, raw)
        else:
            kwargs[key] = _parse_float(key, raw)
    for required in ("sample_rate", "duration", "coherence_time"):
        if required not in kwargs:
            raise DomainError(f"missing {required}= in config")
    return SimConfig(**kwargs)


def _g2_csv(config: SimConfig, estimate, command: str, extra: str = "") -> str:
    echo = ", ".join(
        f"{f.name}={_fmt(getattr(config, f.name))}" for f in fields(SimConfig)
        if f.name != "rng_seed")
    pieces = [f"# thermalqkd v{__version__}", f"command={command}"]
    if extra:
        pieces.append(extra)
    pieces += [echo, f"seed={config.rng_seed}"]
    lines = [", ".join(pieces), "lag,g2,stderr"]
    lines.extend("%.12g,%.12g,%.12g" % (lag, g2, err) for lag, g2, err
                 in zip(estimate.lags, estimate.g2, estimate.stderr))
    return "\n".join(lines) + "\n"


def _default_max_lag(config: SimConfig) -> float:
    return min(5.0 * config.coherence_time, config.duration / 20.0)


def cmd_timeseries(settings: dict[str, str], out_dir: Path) -> int:
    extras = {"eta1", "eta2", "eta4", "vacuum_intensity", "max_lag", "out"}
    wiring = {key: settings.pop(key) for key in tuple(settings)
              if key in extras}
    config = _sim_config(settings, extras=set())
    eta1 = _parse_float("eta1", wiring.get("eta1", "0.5"))
    eta2 = _parse_float("eta2", wiring.get("eta2", "0.5"))
    eta4 = _parse_float("eta4", wiring.get("eta4", "0.5"))
    vacuum = float(wiring.get("vacuum_intensity", 0.0))
    max_lag = (_parse_float("max_lag", wiring["max_lag"])
               if "max_lag" in wiring else _default_max_lag(config))
    out_dir.mkdir(parents=True, exist_ok=True)

    source = generate_field(config)
    seed = config.rng_seed
    alice_arm, onward = split_field(source, eta1, seed=seed + 1,
                                    vacuum_intensity=vacuum)
    eve_arm, onward = split_field(onward, eta2, seed=seed + 2,
                                  vacuum_intensity=vacuum)
    _, bob_arm = split_field(onward, eta4, seed=seed + 3,
                             vacuum_intensity=vacuum)
    bob_arm = apply_delay(bob_arm, config.path_delay)

    arms = {"alice": alice_arm, "bob": bob_arm, "eve": eve_arm}
    detected = {}
    for name, arm in arms.items():
        write_field_trace(arm, out_dir / f"{name}_field.bin")
        detected[name] = detect(arm, config, detector_id=name)

    estimate = estimate_g2(detected["alice"], detected["bob"], max_lag)
    (out_dir / "g2.csv").write_text(
        _g2_csv(config, estimate, "timeseries",
                extra=f"eta1={_fmt(eta1)}, eta2={_fmt(eta2)}, eta4={_fmt(eta4)}"))

    verdict = thermality_test(detected["alice"])
    comparison = ber_and_mutual_info(slice_bits(detected["alice"]),
                                     slice_bits(detected["bob"]))
    records = [
        {"kind": "run", "regime": config.regime, "eta1": eta1, "eta2": eta2,
         "eta4": eta4, "seed": config.rng_seed,
         "vacuum_intensity": vacuum, "n_samples": config.n_samples},
        {"kind": "g2", "zero_lag": estimate.zero_lag,
         "stderr": float(estimate.stderr[0]), "max_lag": max_lag},
        {"kind": "thermality", "verdict": verdict},
        {"kind": "bits", "ber": comparison.ber, "mi_bsc": comparison.mi_bsc,
         "mi_plugin": comparison.mi_plugin, "n_bits": comparison.n_bits},
    ]
    (out_dir / "report.jsonl").write_text(
        "\n".join(json.dumps(record, sort_keys=True) for record in records)
        + "\n")
    return 0


def cmd_g2(settings: dict[str, str], out: Path) -> int:
    wiring = {key: settings.pop(key) for key in tuple(settings)
              if key in ("max_lag", "out")}
    config = _sim_config(settings, extras=set())
    max_lag = (_parse_float("max_lag", wiring["max_lag"])
               if "max_lag" in wiring else _default_max_lag(config))
    trace = detect(generate_field(config), config, detector_id="det")
    estimate = estimate_g2(trace, trace, max_lag)
    out.write_text(_g2_csv(config, estimate, "g2"))
    return 0


# --------------------------------------------------------------- eve bounds

def cmd_eve_bounds(coherence_time: float, photon_energy: float,
                   as_json: bool, out: Path | None) -> int:
    bounds = eve_energy_bounds(coherence_time, photon_energy)
    payload = {
        "coherence_time": bounds.coherence_time,
        "photon_energy": bounds.photon_energy,
        "delta_e_min": bounds.delta_e_min,
        "vacuum_energy": bounds.vacuum_energy,
        "ratio": bounds.ratio,
    }
    if as_json:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = (
            "coherence_time = %.12g s\n"
            "photon_energy  = %.12g eV\n"
            "delta_e_min    = %.12g eV\n"
            "vacuum_energy  = %.12g eV\n"
            "ratio          = %.12g\n"
            % (bounds.coherence_time, bounds.photon_energy,
               bounds.delta_e_min, bounds.vacuum_energy, bounds.ratio))
    if out is not None:
        out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------- main

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermalqkd",
        description="Sweeps and simulations for a central-broadcast "
                    "thermal-light key-distribution network.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", type=Path, help="flat key=value file")
        sp.add_argument("--out", type=Path,
                        help="output file (or directory for figure/timeseries)")
        sp.add_argument("--seed", type=int, help="master seed (64-bit)")
        sp.add_argument("--threads", type=int, default=1,
                        help="grid evaluation threads; never changes output")
        sp.add_argument("--set", action="append", default=[],
                        dest="overrides", metavar="KEY=VALUE",
                        help="override one config entry")

    add_common(sub.add_parser("metrics-sweep",
                              help="sweep one parameter, write a metrics CSV"))
    figure = sub.add_parser("figure", help="run a named preset sweep family")
    figure.add_argument("preset", help="fig4, fig5, fig6, fig7 or fig8")
    add_common(figure)
    add_common(sub.add_parser("timeseries",
                              help="simulate the split-detection experiment"))
    add_common(sub.add_parser("g2", help="auto-correlation of one detector"))
    bounds = sub.add_parser("eve-bounds",
                            help="intercept detection-floor energy scales")
    bounds.add_argument("coherence_time", type=float, help="seconds")
    bounds.add_argument("photon_energy", type=float, help="eV")
    bounds.add_argument("--json", action="store_true", dest="as_json")
    add_common(bounds)
    return parser


def _dispatch(args) -> int:
    if args.command == "eve-bounds":
        return cmd_eve_bounds(args.coherence_time, args.photon_energy,
                              args.as_json, args.out)
    settings = _collect_settings(args)
    if args.command == "metrics-sweep":
        return cmd_metrics_sweep(settings, args.threads)
    if args.command == "figure":
        out_dir = Path(settings.pop("out", "."))
        settings.pop("seed", None)
        if settings:
            raise DomainError(
                f"figure presets take no parameters, got: "
                f"{', '.join(sorted(settings))}")
        return cmd_figure(args.preset, out_dir, args.threads)
    if args.command == "timeseries":
        out_dir = Path(settings.pop("out", "."))
        return cmd_timeseries(settings, out_dir)
    if args.command == "g2":
        if "out" not in settings:
            raise DomainError("no output path (--out or out= in config)")
        out = Path(settings.pop("out"))
        return cmd_g2(settings, out)
    raise DomainError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _dispatch(args)
    except (DomainError, UnphysicalStateError, DegenerateChannelError,
            ValueError) as exc:
        print(f"thermalqkd: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"thermalqkd: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
