"""Command-line surface: figure/table-reproduction pipelines emitting CSV/JSON.

Commands
--------
scan      robustness curves F(delta) for one rotation across the families
rb        standard or interleaved randomized benchmarking
ff        filter-function curves, the 1/f fidelity table, and the infrared
          cutoff sweep
lindblad  open-system fidelity-versus-time curves
path      Bloch-sphere trajectory of the dressed state
check     analytic-vs-numeric and geometric-condition self-checks

Every command reads an optional JSON config (``--config``), applies flag
overrides, and writes its outputs atomically under ``--out``.  Unknown
config keys are rejected.  All randomness is seeded from the config.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import reference
from .benchmarking import RBConfig, fit_rb, run_interleaved_rb, run_standard_rb
from .checks import run_all_checks
from .evolution import StaticError, fidelity_scan, propagate, propagate_sampled
from .filterfunc import (
    NoiseSpectrum,
    fidelity_table,
    filter_function,
    gate_table_sequences,
    infrared_cutoff_sweep,
)
from .lindblad import LindbladParams, evolve_master
from .pulses import GateFamily, gate_sequence, named_rotation

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def _load_config(cls, path: str | None, overrides: dict):
    data = {}
    if path is not None:
        with open(path) as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)} (known: {sorted(known)})")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _format_cell(cell) -> str:
    if isinstance(cell, float):
        return format(cell, ".12g")
    return str(cell)


def _write_json(path: str, payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# scan


@dataclass
class ScanConfig:
    gate: str = "X/2"
    delta_min: float = -0.2
    delta_max: float = 0.2
    points: int = 81
    error_kind: str = "offresonance"
    include_twopi: bool = False

    def __post_init__(self):
        if self.points < 1:
            raise ConfigError("points must be >= 1")
        if self.delta_max < self.delta_min:
            raise ConfigError("delta_max must be >= delta_min")


def cmd_scan(config: ScanConfig, out_dir: str) -> None:
    axis, chi = named_rotation(config.gate)
    grid = np.linspace(config.delta_min, config.delta_max, config.points)
    columns = {
        "fidelity_naive": fidelity_scan("naive", axis, chi, grid, config.error_kind),
        "fidelity_geo": fidelity_scan("geo", axis, chi, grid, config.error_kind),
        "fidelity_opt": fidelity_scan("opt", axis, chi, grid, config.error_kind),
        "fidelity_opt_perfect": fidelity_scan(
            "opt", axis, chi, grid, config.error_kind, perfect_pi=True
        ),
    }
    if config.include_twopi:
        columns["fidelity_twopi"] = fidelity_scan("twopi", axis, chi, grid, config.error_kind)
    header = ["error"] + list(columns)
    rows = [[grid[i]] + [float(col[i]) for col in columns.values()] for i in range(len(grid))]
    _write_csv(os.path.join(out_dir, "scan.csv"), header, rows)


# ---------------------------------------------------------------------------
# rb


@dataclass
class RBCommandConfig:
    lengths: tuple = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)
    sequences_per_length: int = 200
    sigma_delta: float = reference.RB_SIGMA_DELTA
    family: str = "opt"
    perfect_pi: bool = False
    seed: int = 2024
    target: str | None = None
    draw_per: str = "sequence"
    compile_strategy: str | None = None


def cmd_rb(config: RBCommandConfig, out_dir: str) -> None:
    rb_config = RBConfig(
        lengths=tuple(config.lengths),
        sequences_per_length=config.sequences_per_length,
        sigma_delta=config.sigma_delta,
        family=GateFamily.coerce(config.family),
        perfect_pi=config.perfect_pi,
        rng_seed=config.seed,
        interleaved_target=config.target,
        draw_per=config.draw_per,
        compile_strategy=config.compile_strategy,
    )
    summary = {
        "family": rb_config.family.value,
        "K": rb_config.sequences_per_length,
        "seed": rb_config.rng_seed,
        "sigma_delta": rb_config.sigma_delta,
    }
    if config.target is None:
        curve = run_standard_rb(rb_config)
        fit = fit_rb(curve)
        summary.update({"mode": "standard", "d": fit.d, "F": fit.f_avg, "p": fit.p})
    else:
        result = run_interleaved_rb(rb_config)
        curve = result.interleaved_curve
        fit = result.interleaved_fit
        summary.update(
            {
                "mode": "interleaved",
                "target": config.target,
                "d": fit.d,
                "F": fit.f_avg,
                "p": fit.p,
                "standard_d": result.standard_fit.d,
                "standard_F": result.standard_fit.f_avg,
                "standard_p": result.standard_fit.p,
                "F_interleaved": result.f_interleaved,
                "F_interleaved_direct": result.f_interleaved_direct,
            }
        )
    rows = list(zip(curve.lengths.astype(int), curve.mean_survival, curve.stderr))
    _write_csv(os.path.join(out_dir, "rb_curve.csv"), ["n", "mean_survival", "stderr"], rows)
    _write_json(os.path.join(out_dir, "rb_summary.json"), summary)


# ---------------------------------------------------------------------------
# ff


@dataclass
class FFConfig:
    gate: str = "X/2"
    rabi_hz: float = reference.RABI_FREQUENCY_HZ
    S0: float = reference.NOISE_S0_HZ2
    alpha: float = reference.NOISE_ALPHA
    f_lo: float = 10.0
    f_uv: float = reference.NOISE_F_UV_HZ
    convention: str = "ordinary"
    curve_points: int = 160
    sweep_cutoffs: tuple = (10.0, 100.0, 1000.0)


def cmd_ff(config: FFConfig, out_dir: str, sweep: bool = False) -> None:
    spectrum = NoiseSpectrum(S0=config.S0, alpha=config.alpha, f_lo=config.f_lo, f_uv=config.f_uv)
    rabi = 2.0 * math.pi * config.rabi_hz
    axis, chi = named_rotation(config.gate)
    freqs = np.logspace(-4, math.log10(2.0), config.curve_points)
    curves = {}
    for family in ("naive", "geo", "opt"):
        seq = gate_sequence(family, axis, chi)
        curves[family] = filter_function(seq, freqs=freqs).values
    rows = [
        [freqs[i], curves["naive"][i], curves["geo"][i], curves["opt"][i]]
        for i in range(len(freqs))
    ]
    _write_csv(
        os.path.join(out_dir, "ff_curves.csv"),
        ["f_over_frabi", "ff_naive", "ff_geo", "ff_opt"],
        rows,
    )
    table = fidelity_table(rabi, spectrum, config.convention)
    _write_json(
        os.path.join(out_dir, "ff_table.json"),
        {
            "gate_fidelities": table,
            "convention": config.convention,
            "spectrum": dataclasses.asdict(spectrum),
            "rabi_hz": config.rabi_hz,
        },
    )
    if sweep:
        report = infrared_cutoff_sweep(
            rabi,
            spectrum,
            cutoffs=tuple(config.sweep_cutoffs),
            reference=reference.FF_TABLE,
            convention=config.convention,
        )
        payload = {
            "convention": report["convention"],
            "best_f_lo": report.get("best_f_lo"),
            "cutoffs": {
                str(f_lo): {
                    "max_abs_dev": entry.get("max_abs_dev"),
                    "mean_abs_dev": entry.get("mean_abs_dev"),
                    "table": entry["table"],
                }
                for f_lo, entry in report["cutoffs"].items()
            },
        }
        _write_json(os.path.join(out_dir, "ff_flo_sweep.json"), payload)


# ---------------------------------------------------------------------------
# lindblad


@dataclass
class LindbladConfig:
    gate: str = "X/2"
    family: str = "opt"
    delta: float = 0.1
    gamma1: tuple = (0.0, 1e-4, 1e-2)
    gamma_phi: float = 0.0
    steps_per_pi: int = 400
    record_every: int = 4


def cmd_lindblad(config: LindbladConfig, out_dir: str) -> None:
    axis, chi = named_rotation(config.gate)
    seq = gate_sequence(config.family, axis, chi)
    duration = seq.duration
    rows = []
    for gamma1 in config.gamma1:
        traj = evolve_master(
            seq,
            StaticError(delta=config.delta),
            LindbladParams(gamma1=float(gamma1), gamma_phi=config.gamma_phi),
            dt=math.pi / config.steps_per_pi,
            record_every=config.record_every,
        )
        for t, fid in zip(traj.times, traj.fidelities):
            rows.append([float(gamma1), t / duration, fid])
    _write_csv(
        os.path.join(out_dir, "lindblad.csv"), ["gamma1", "t_over_T", "fidelity"], rows
    )


# ---------------------------------------------------------------------------
# path


@dataclass
class PathConfig:
    gate: str = "X/2"
    family: str = "geo"
    deltas: tuple = (0.0, 0.2)
    samples_per_segment: int = 64


def cmd_path(config: PathConfig, out_dir: str) -> None:
    axis, chi = named_rotation(config.gate)
    seq = gate_sequence(config.family, axis, chi)
    for delta in config.deltas:
        traj = propagate_sampled(
            seq, StaticError(delta=float(delta)), samples_per_segment=config.samples_per_segment
        )
        rows = [
            [traj.times[i], traj.bloch_points[i, 0], traj.bloch_points[i, 1], traj.bloch_points[i, 2]]
            for i in range(len(traj.times))
        ]
        name = f"path_{GateFamily.coerce(config.family).value}_delta{delta:g}.csv"
        _write_csv(os.path.join(out_dir, name), ["t", "x", "y", "z"], rows)


# ---------------------------------------------------------------------------
# check


@dataclass
class CheckConfig:
    grid: int = 4


def cmd_check(config: CheckConfig, out_dir: str, as_json: bool) -> int:
    results = run_all_checks(grid=config.grid)
    passed = all(r.passed for r in results)
    if as_json:
        payload = {
            "passed": passed,
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
        }
        _write_json(os.path.join(out_dir, "check_report.json"), payload)
        print(json.dumps({"passed": passed, "n_checks": len(results)}))
    else:
        for r in results:
            print(r)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing


_COMMANDS = {
    "scan": ScanConfig,
    "rb": RBCommandConfig,
    "ff": FFConfig,
    "lindblad": LindbladConfig,
    "path": PathConfig,
    "check": CheckConfig,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geogate", description="Geometric-gate robustness pipelines"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="JSON config file")
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument(
            "--family", choices=[f.value for f in GateFamily], default=None
        )
        cmd.add_argument("--perfect-pi", action="store_true", default=None)
        cmd.add_argument("--json", action="store_true", help="machine-readable output")
        if name == "rb":
            cmd.add_argument("--target", default=None, help="interleaved target, e.g. X/2")
        if name == "ff":
            cmd.add_argument(
                "--sweep-flo", action="store_true", help="also run the infrared-cutoff sweep"
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    overrides: dict = {}
    if args.command in ("rb",):
        overrides = {
            "seed": args.seed,
            "family": args.family,
            "perfect_pi": args.perfect_pi,
            "target": args.target,
        }
    elif args.command in ("lindblad", "path"):
        overrides = {"family": args.family}
    try:
        config = _load_config(_COMMANDS[args.command], args.config, overrides)
        if args.command == "scan":
            cmd_scan(config, args.out)
        elif args.command == "rb":
            cmd_rb(config, args.out)
        elif args.command == "ff":
            cmd_ff(config, args.out, sweep=args.sweep_flo)
        elif args.command == "lindblad":
            cmd_lindblad(config, args.out)
        elif args.command == "path":
            cmd_path(config, args.out)
        elif args.command == "check":
            return cmd_check(config, args.out, args.json)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
