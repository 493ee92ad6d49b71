"""Desk-scale experiment drivers: SNR maps over the region, measurement-budget
and noise sweeps comparing the measurement-driven search against the
sparse-recovery baseline, and CSV emission.

Every method is scored by the TRUE noiseless receive SNR at the position it
returns; noise only corrupts the measurements that drive the search. The
reported gap is against a brute-force grid maximum on the same channel.
Trials run sequentially and all randomness derives from the master seed, so
identical configs produce identical tables.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import seeding
from .baseline import BaselineConfig, csi_baseline
from .channel import ChannelRealization, MeasurementOracle, Position, Region, receive_snr, response_at, sample_channel
from .gridsearch import grid_argmax, grid_axis, grid_positions
from .optimizer import HyperParams, optimize

METHOD_PROPOSED = "proposed"
METHOD_BASELINE = "baseline"

_SWEEP_BUDGET = 0
_SWEEP_NOISE = 1
SWEEP_SINGLE = 2  # reserved for one-off CLI runs


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment campaign: channel population, radio constants,
    method settings, sweep axes, and trial count."""

    master_seed: int = 0
    num_paths: int = 30
    region_side: float = 4.0
    transmit_power_dbm: float = 30.0
    transmit_snr_db: float = 30.0
    optimizer: HyperParams = field(default_factory=HyperParams)
    baseline: BaselineConfig = field(default_factory=BaselineConfig)
    budgets: tuple[int, ...] = (29, 69, 100, 149, 209)
    noise_variances_dbm: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0)
    noise_sweep_budget: int = 209
    trials: int = 100
    grid_resolution: float = 0.05
    resample_channels: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.num_paths < 1:
            raise ValueError(f"num_paths must be >= 1, got {self.num_paths}")
        if not self.grid_resolution > 0:
            raise ValueError(f"grid_resolution must be positive, got {self.grid_resolution}")

    @property
    def region(self) -> Region:
        return Region(self.region_side)

    @property
    def transmit_power(self) -> float:
        """Linear transmit power (mW for dBm inputs)."""
        return 10.0 ** (self.transmit_power_dbm / 10.0)

    @property
    def noise_variance(self) -> float:
        """Nominal linear noise power implied by the transmit SNR."""
        return self.transmit_power / 10.0 ** (self.transmit_snr_db / 10.0)


class SweepRow(NamedTuple):
    method: str
    sweep_param: float  # measurement budget, or noise variance in dBm
    trial: int
    achieved_snr_db: float
    gap_db: float
    measurements: int


class SummaryRow(NamedTuple):
    method: str
    sweep_param: float
    mean_snr_db: float
    std_snr_db: float
    trials: int


@dataclass
class SweepTable:
    """Per-trial sweep results plus diagnostics for skipped rows."""

    rows: list[SweepRow] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def summarize(self) -> list[SummaryRow]:
        """Mean/std of achieved SNR per (method, sweep point), in first-seen order."""
        groups: dict[tuple[str, float], list[float]] = {}
        for row in self.rows:
            groups.setdefault((row.method, row.sweep_param), []).append(row.achieved_snr_db)
        return [
            SummaryRow(method, param, float(np.mean(vals)), float(np.std(vals)), len(vals))
            for (method, param), vals in groups.items()
        ]


class SnrMap(NamedTuple):
    x: np.ndarray  # (n,) grid coordinates
    y: np.ndarray  # (n,)
    snr_db: np.ndarray  # (n, n), [i, j] at (x[i], y[j])


def snr_map(
    channel: ChannelRealization,
    region: Region,
    resolution: float,
    transmit_power: float,
    noise_variance: float,
) -> SnrMap:
    """Noiseless receive SNR on a uniform grid covering the region."""
    if not noise_variance > 0:
        raise ValueError(f"noise_variance must be positive for an SNR map, got {noise_variance}")
    axis = grid_axis(region, resolution)
    xs, ys = grid_positions(region, resolution)
    power = np.abs(response_at(channel, xs, ys)) ** 2
    snr = 10.0 * np.log10(power * transmit_power / noise_variance)
    n = axis.shape[0]
    return SnrMap(axis, axis.copy(), snr.reshape(n, n))


def _grid_peak(channel: ChannelRealization, region: Region, resolution: float):
    """(position, |h|^2) of the grid maximum, first tie in x-major order."""
    xs, ys = grid_positions(region, resolution)
    power = np.abs(response_at(channel, xs, ys)) ** 2
    position = grid_argmax(power, region, resolution)
    return position, float(power.max())


def brute_force_max(
    channel: ChannelRealization,
    region: Region,
    resolution: float,
    transmit_power: float,
    noise_variance: float,
) -> tuple[Position, float]:
    """Ground-truth grid optimum of the noiseless receive SNR."""
    position, peak_power = _grid_peak(channel, region, resolution)
    return position, 10.0 * math.log10(peak_power * transmit_power / noise_variance)


def _channel_for_trial(config: ExperimentConfig, trial: int) -> ChannelRealization:
    index = trial if config.resample_channels else 0
    seed = seeding.child_seed(config.master_seed, seeding.ROLE_CHANNEL, index)
    return sample_channel(seed, config.num_paths)


def _run_proposed(
    config: ExperimentConfig,
    chan: ChannelRealization,
    budget: int,
    noise_variance: float,
    key: tuple[int, ...],
) -> tuple[Position, int] | None:
    """Proposed method under a total budget; None when the budget cannot cover
    initialization plus at least one iteration.

    `key` is (sweep kind, trial): stream slots are shared across the points of
    one sweep so that each trial is a paired comparison where only the swept
    variable changes.
    """
    n_init = config.optimizer.num_init_candidates
    iterations = (budget - n_init) // 2
    if iterations < 1:
        return None
    hyper = replace(config.optimizer, max_iterations=iterations)
    oracle = MeasurementOracle(
        chan,
        config.transmit_power,
        noise_variance,
        rng=seeding.stream(config.master_seed, seeding.ROLE_NOISE, 0, *key),
    )
    opt_rng = seeding.stream(config.master_seed, seeding.ROLE_OPTIMIZER, *key)
    position, _ = optimize(oracle, config.region, hyper, opt_rng)
    if oracle.measurement_count > budget:
        raise RuntimeError(
            f"proposed method used {oracle.measurement_count} measurements, budget {budget}"
        )
    return position, oracle.measurement_count


def _run_baseline(
    config: ExperimentConfig,
    chan: ChannelRealization,
    budget: int,
    noise_variance: float,
    key: tuple[int, ...],
) -> tuple[Position, int]:
    oracle = MeasurementOracle(
        chan,
        config.transmit_power,
        noise_variance,
        rng=seeding.stream(config.master_seed, seeding.ROLE_NOISE, 1, *key),
    )
    train_rng = seeding.stream(config.master_seed, seeding.ROLE_TRAINING, *key)
    position, used = csi_baseline(oracle, budget, config.region, config.baseline, train_rng)
    if oracle.measurement_count > budget:
        raise RuntimeError(
            f"baseline used {oracle.measurement_count} measurements, budget {budget}"
        )
    return position, used


def run_budget_sweep(config: ExperimentConfig) -> SweepTable:
    """Both methods at every measurement budget, over Monte Carlo trials.

    Each row records the true noiseless SNR at the returned position and the
    gap to the brute-force grid optimum of the same channel.
    """
    if not config.budgets:
        raise ValueError("budget list is empty")
    table = SweepTable()
    power = config.transmit_power
    sigma2 = config.noise_variance
    for trial in range(config.trials):
        chan = _channel_for_trial(config, trial)
        _, best_snr = brute_force_max(chan, config.region, config.grid_resolution, power, sigma2)
        for budget in config.budgets:
            key = (_SWEEP_BUDGET, trial)
            proposed = _run_proposed(config, chan, budget, sigma2, key)
            if proposed is None:
                table.diagnostics.append(
                    f"trial {trial}: budget {budget} too small for "
                    f"{config.optimizer.num_init_candidates} init candidates plus one iteration; "
                    "proposed row skipped"
                )
            else:
                position, used = proposed
                achieved = receive_snr(chan, position, power, sigma2)
                table.rows.append(
                    SweepRow(METHOD_PROPOSED, float(budget), trial, achieved, best_snr - achieved, used)
                )
            position, used = _run_baseline(config, chan, budget, sigma2, key)
            achieved = receive_snr(chan, position, power, sigma2)
            table.rows.append(
                SweepRow(METHOD_BASELINE, float(budget), trial, achieved, best_snr - achieved, used)
            )
    return table


def run_noise_sweep(config: ExperimentConfig) -> SweepTable:
    """Both methods at a fixed budget while the measurement noise sweeps.

    Achieved SNR and the brute-force ceiling are evaluated at each row's own
    noise variance, so the gap column stays comparable across rows.
    """
    if not config.noise_variances_dbm:
        raise ValueError("noise variance list is empty")
    table = SweepTable()
    power = config.transmit_power
    budget = config.noise_sweep_budget
    for trial in range(config.trials):
        chan = _channel_for_trial(config, trial)
        _, peak_power = _grid_peak(chan, config.region, config.grid_resolution)
        for sigma2_dbm in config.noise_variances_dbm:
            sigma2 = 10.0 ** (sigma2_dbm / 10.0)
            best_snr = 10.0 * math.log10(peak_power * power / sigma2)
            key = (_SWEEP_NOISE, trial)
            proposed = _run_proposed(config, chan, budget, sigma2, key)
            if proposed is None:
                table.diagnostics.append(
                    f"trial {trial}: noise-sweep budget {budget} too small; proposed row skipped"
                )
            else:
                position, used = proposed
                achieved = receive_snr(chan, position, power, sigma2)
                table.rows.append(
                    SweepRow(
                        METHOD_PROPOSED, float(sigma2_dbm), trial, achieved, best_snr - achieved, used
                    )
                )
            position, used = _run_baseline(config, chan, budget, sigma2, key)
            achieved = receive_snr(chan, position, power, sigma2)
            table.rows.append(
                SweepRow(
                    METHOD_BASELINE, float(sigma2_dbm), trial, achieved, best_snr - achieved, used
                )
            )
    return table


def write_csv(table: SweepTable, path) -> None:
    """Sweep rows as CSV: full-precision decimals, LF line endings."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(
                ["method", "sweep_param", "trial", "achieved_snr_db", "gap_db", "measurements"]
            )
            for row in table.rows:
                writer.writerow(
                    [
                        row.method,
                        repr(row.sweep_param),
                        row.trial,
                        repr(row.achieved_snr_db),
                        repr(row.gap_db),
                        row.measurements,
                    ]
                )
    except OSError as exc:
        raise OSError(f"could not write sweep CSV to {path}: {exc}") from exc


def read_csv(path) -> SweepTable:
    """Inverse of write_csv (diagnostics are not round-tripped)."""
    table = SweepTable()
    with open(path, "r", newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["method", "sweep_param", "trial", "achieved_snr_db", "gap_db", "measurements"]:
            raise ValueError(f"unexpected sweep CSV header in {path}: {header}")
        for rec in reader:
            table.rows.append(
                SweepRow(rec[0], float(rec[1]), int(rec[2]), float(rec[3]), float(rec[4]), int(rec[5]))
            )
    return table


def write_summary_csv(labeled_summaries: list[tuple[str, SummaryRow]], path) -> None:
    """Aggregated sweep statistics as CSV, one row per (sweep label, method,
    sweep point); the standard deviation is the population one."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["sweep", "method", "sweep_param", "mean_snr_db", "std_snr_db", "trials"])
            for label, row in labeled_summaries:
                writer.writerow(
                    [
                        label,
                        row.method,
                        repr(row.sweep_param),
                        repr(row.mean_snr_db),
                        repr(row.std_snr_db),
                        row.trials,
                    ]
                )
    except OSError as exc:
        raise OSError(f"could not write summary CSV to {path}: {exc}") from exc


def write_snr_map_csv(snr: SnrMap, path) -> None:
    """Heat-map triplets (x, y, snr_db), x-major, for external plotting."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["x", "y", "snr_db"])
            for i, x in enumerate(snr.x):
                for j, y in enumerate(snr.y):
                    writer.writerow([repr(float(x)), repr(float(y)), repr(float(snr.snr_db[i, j]))])
    except OSError as exc:
        raise OSError(f"could not write SNR map CSV to {path}: {exc}") from exc
