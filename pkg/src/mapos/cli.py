"""Command-line entry point.

Three subcommands, all driven by a JSON config file and a master seed:

    mapos map      --config cfg.json --out map.csv        SNR heat map
    mapos optimize --config cfg.json --out trajectory.csv single search run
    mapos compare  --config cfg.json --out results_dir    budget/noise sweeps

Configs are validated before any computation (unknown keys are rejected), so
a bad config never leaves partial output behind. Exit codes: 0 success,
1 I/O or runtime failure, 2 invalid config.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import seeding
from .baseline import BaselineConfig
from .channel import MeasurementOracle, receive_snr
from .harness import (
    ExperimentConfig,
    SWEEP_SINGLE,
    _channel_for_trial,
    run_budget_sweep,
    run_noise_sweep,
    snr_map,
    write_csv,
    write_snr_map_csv,
    write_summary_csv,
)
from .optimizer import HyperParams, optimize


class ConfigError(Exception):
    """Invalid configuration document."""


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return value


def _as_number(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    return float(value)


def _as_bool(value, key: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{key}: expected true/false, got {value!r}")
    return value


def _as_int_tuple(value, key: str) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise ConfigError(f"{key}: expected a list of integers, got {value!r}")
    return tuple(_as_int(item, f"{key}[{i}]") for i, item in enumerate(value))


def _as_number_tuple(value, key: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ConfigError(f"{key}: expected a list of numbers, got {value!r}")
    return tuple(_as_number(item, f"{key}[{i}]") for i, item in enumerate(value))


def _check_keys(data: dict, allowed: dict, context: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown {context} key(s): {', '.join(unknown)}")


_OPTIMIZER_KEYS = {
    "step_size": _as_number,
    "beta1": _as_number,
    "beta2": _as_number,
    "mu": _as_number,
    "dim_factor": _as_number,
    "epsilon": _as_number,
    "num_init_candidates": _as_int,
    "max_iterations": _as_int,
    "early_stop": _as_bool,
    "early_stop_window": _as_int,
    "early_stop_tol": _as_number,
}

_BASELINE_KEYS = {
    "grid_elevation": _as_int,
    "grid_azimuth": _as_int,
    "sparsity": _as_int,  # null allowed, handled below
    "sparsity_cap": _as_int,
    "search_resolution": _as_number,
    "residual_tol": _as_number,
}

_TOP_KEYS = {
    "seed": _as_int,
    "num_paths": _as_int,
    "region_side": _as_number,
    "transmit_power_dbm": _as_number,
    "transmit_snr_db": _as_number,
    "trials": _as_int,
    "grid_resolution": _as_number,
    "resample_channels": _as_bool,
    "budgets": _as_int_tuple,
    "noise_variances_dbm": _as_number_tuple,
    "noise_sweep_budget": _as_int,
    "optimizer": None,
    "baseline": None,
}


def _optimizer_from(data, context: str) -> HyperParams:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected an object")
    _check_keys(data, _OPTIMIZER_KEYS, context)
    kwargs = {key: _OPTIMIZER_KEYS[key](val, f"{context}.{key}") for key, val in data.items()}
    try:
        return HyperParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def _baseline_from(data, context: str) -> BaselineConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected an object")
    _check_keys(data, _BASELINE_KEYS, context)
    kwargs = {}
    for key, val in data.items():
        if key == "sparsity" and val is None:
            kwargs[key] = None
        else:
            kwargs[key] = _BASELINE_KEYS[key](val, f"{context}.{key}")
    return BaselineConfig(**kwargs)


def load_config(path, seed_override=None, trials_override=None) -> ExperimentConfig:
    """Parse and validate a JSON config into an ExperimentConfig."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path}: top level must be a JSON object")
    _check_keys(data, _TOP_KEYS, "config")

    kwargs = {}
    for key, val in data.items():
        if key == "seed":
            kwargs["master_seed"] = _as_int(val, "seed")
        elif key == "optimizer":
            kwargs["optimizer"] = _optimizer_from(val, "optimizer")
        elif key == "baseline":
            kwargs["baseline"] = _baseline_from(val, "baseline")
        else:
            kwargs[key] = _TOP_KEYS[key](val, key)
    try:
        config = ExperimentConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if seed_override is not None:
        config = replace(config, master_seed=seed_override)
    if trials_override is not None:
        if trials_override < 1:
            raise ConfigError(f"--trials must be >= 1, got {trials_override}")
        config = replace(config, trials=trials_override)
    return config


def cmd_map(config_path, out_path, seed=None) -> int:
    """Write the noiseless SNR heat map of the trial-0 channel as CSV."""
    config = load_config(config_path, seed_override=seed)
    chan = _channel_for_trial(config, 0)
    grid = snr_map(
        chan, config.region, config.grid_resolution, config.transmit_power, config.noise_variance
    )
    write_snr_map_csv(grid, out_path)
    return 0


def cmd_optimize(config_path, out_path, seed=None) -> int:
    """Run one search on the trial-0 channel; write the trajectory as CSV and
    print a one-line summary."""
    config = load_config(config_path, seed_override=seed)
    chan = _channel_for_trial(config, 0)
    power = config.transmit_power
    sigma2 = config.noise_variance
    oracle = MeasurementOracle(
        chan,
        power,
        sigma2,
        rng=seeding.stream(config.master_seed, seeding.ROLE_NOISE, 0, SWEEP_SINGLE, 0),
    )
    opt_rng = seeding.stream(config.master_seed, seeding.ROLE_OPTIMIZER, SWEEP_SINGLE, 0)
    final_position, trajectory = optimize(oracle, config.region, config.optimizer, opt_rng)

    with open(out_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["iteration", "x", "y", "measured_power", "true_snr_db"])
        start = trajectory.initial_position
        writer.writerow(
            [
                0,
                repr(start.x),
                repr(start.y),
                repr(trajectory.initial_power),
                repr(receive_snr(chan, start, power, sigma2)),
            ]
        )
        for record in trajectory.records:
            pos = record.new_position
            probe_mean = 0.5 * (record.power_plus + record.power_minus)
            writer.writerow(
                [
                    record.iteration,
                    repr(pos.x),
                    repr(pos.y),
                    repr(probe_mean),
                    repr(receive_snr(chan, pos, power, sigma2)),
                ]
            )

    final_snr = receive_snr(chan, final_position, power, sigma2)
    print(
        f"final_position=({final_position.x:.6f}, {final_position.y:.6f}) "
        f"final_snr_db={final_snr:.4f} measurements={trajectory.num_measurements}"
    )
    return 0


def cmd_compare(config_path, out_dir, seed=None, trials=None) -> int:
    """Run the configured sweeps; write one CSV per sweep plus a summary CSV."""
    config = load_config(config_path, seed_override=seed, trials_override=trials)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    labeled_summaries = []
    if config.budgets:
        table = run_budget_sweep(config)
        write_csv(table, out / "budget_sweep.csv")
        labeled_summaries.extend(("budget", row) for row in table.summarize())
        for note in table.diagnostics:
            print(f"note: {note}", file=sys.stderr)
    if config.noise_variances_dbm:
        table = run_noise_sweep(config)
        write_csv(table, out / "noise_sweep.csv")
        labeled_summaries.extend(("noise", row) for row in table.summarize())
        for note in table.diagnostics:
            print(f"note: {note}", file=sys.stderr)
    write_summary_csv(labeled_summaries, out / "summary.csv")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapos",
        description="Movable-antenna position optimization experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_map = sub.add_parser("map", help="write the region SNR heat map as CSV")
    p_opt = sub.add_parser("optimize", help="run one position search, write its trajectory")
    p_cmp = sub.add_parser("compare", help="run budget/noise sweeps against the baseline")
    for sp in (p_map, p_opt, p_cmp):
        sp.add_argument("--config", required=True, help="JSON config file")
        sp.add_argument("--seed", type=int, default=None, help="override the config master seed")
    p_map.add_argument("--out", required=True, help="output CSV path")
    p_opt.add_argument("--out", required=True, help="output CSV path")
    p_cmp.add_argument("--out", required=True, help="output directory")
    p_cmp.add_argument("--trials", type=int, default=None, help="override the trial count")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "map":
            return cmd_map(args.config, args.out, seed=args.seed)
        if args.command == "optimize":
            return cmd_optimize(args.config, args.out, seed=args.seed)
        return cmd_compare(args.config, args.out, seed=args.seed, trials=args.trials)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
