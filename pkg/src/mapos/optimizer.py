"""CSI-free antenna position search from magnitude-only measurements.

The objective |y(r)|^2 is probed two points at a time: a coordinate direction
u is drawn at random, the oracle is measured at r +/- mu*u, and the central
difference scaled by the dimension factor gives a one-coordinate gradient
estimate. Adaptive-moment averaging (first and second moment with bias
correction) turns those noisy estimates into position updates, clamped to the
feasible region after every step. A run costs exactly

    num_init_candidates + 2 * iterations

oracle measurements: candidates are probed once each during initialization,
then two probes per iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import MeasurementOracle, Position, Region

_UNIT_DIRECTIONS = (np.array([1.0, 0.0]), np.array([0.0, 1.0]))


@dataclass(frozen=True)
class HyperParams:
    """Search hyperparameters.

    step_size and mu are in wavelength units. dim_factor matches the
    direction sampling: 2 for coordinate directions drawn uniformly from
    {e1, e2}, making the estimate unbiased for the true gradient. epsilon
    guards the adaptive denominator; it is plumbing, not part of the method.
    """

    step_size: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.99
    mu: float = 0.1
    dim_factor: float = 2.0
    epsilon: float = 1e-8
    num_init_candidates: int = 35
    max_iterations: int = 17
    early_stop: bool = False
    early_stop_window: int = 5
    early_stop_tol: float = 1e-3

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError(f"step_size must be positive, got {self.step_size}")
        if not 0 <= self.beta1 < 1:
            raise ValueError(f"beta1 must be in [0, 1), got {self.beta1}")
        if not 0 <= self.beta2 < 1:
            raise ValueError(f"beta2 must be in [0, 1), got {self.beta2}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.dim_factor > 0:
            raise ValueError(f"dim_factor must be positive, got {self.dim_factor}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.num_init_candidates < 1:
            raise ValueError(f"num_init_candidates must be >= 1, got {self.num_init_candidates}")
        if self.max_iterations < 0:
            raise ValueError(f"max_iterations must be >= 0, got {self.max_iterations}")


@dataclass(frozen=True)
class OptimizerState:
    """Iterate of the adaptive-moment update: position, both moment vectors,
    and the number of steps taken so far."""

    position: Position
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def at(cls, position: Position) -> "OptimizerState":
        return cls(position, np.zeros(2), np.zeros(2), 0)


class IterationRecord(NamedTuple):
    iteration: int
    position: Position  # probe center for this iteration
    power_plus: float  # |y(r + mu*u)|^2
    power_minus: float  # |y(r - mu*u)|^2
    direction_index: int  # 0 = x axis, 1 = y axis
    new_position: Position


@dataclass
class Trajectory:
    """Full record of one run: chosen starting point plus one entry per step."""

    initial_position: Position
    initial_power: float  # |y|^2 at the chosen starting candidate
    records: list[IterationRecord]
    num_measurements: int

    @property
    def num_iterations(self) -> int:
        return len(self.records)

    @property
    def final_position(self) -> Position:
        if self.records:
            return self.records[-1].new_position
        return self.initial_position


def project(position: Position, region: Region) -> Position:
    """Componentwise clamp onto the square region; idempotent."""
    h = region.half
    return Position(min(max(position.x, -h), h), min(max(position.y, -h), h))


def _probe(
    oracle: MeasurementOracle,
    position: Position,
    mu: float,
    direction: np.ndarray,
    dim_factor: float,
    region: Region | None,
):
    """Two measurements around `position` and the resulting gradient estimate.

    Probe points are clamped into the region when one is given (the antenna
    cannot leave it), but the difference quotient keeps the nominal 2*mu
    spacing, introducing an O(mu) bias only on the boundary.
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    plus = Position(position.x + mu * direction[0], position.y + mu * direction[1])
    minus = Position(position.x - mu * direction[0], position.y - mu * direction[1])
    if region is not None:
        plus = project(plus, region)
        minus = project(minus, region)
    power_plus = abs(oracle.measure(plus)) ** 2
    power_minus = abs(oracle.measure(minus)) ** 2
    gradient = (dim_factor * (power_plus - power_minus) / (2.0 * mu)) * direction
    return gradient, power_plus, power_minus


def zo_gradient(
    oracle: MeasurementOracle,
    position: Position,
    mu: float,
    direction: np.ndarray,
    dim_factor: float,
    region: Region | None = None,
) -> np.ndarray:
    """Two-point gradient estimate of |y(r)|^2 along `direction`:

        (dim_factor / (2*mu)) * (|y(r+mu*u)|^2 - |y(r-mu*u)|^2) * u

    Costs exactly two oracle measurements; the result is supported only on
    the coordinates where `direction` is nonzero.
    """
    gradient, _, _ = _probe(oracle, position, mu, direction, dim_factor, region)
    return gradient


def adamm_step(
    state: OptimizerState,
    gradient: np.ndarray,
    hyper: HyperParams,
    region: Region,
) -> OptimizerState:
    """One adaptive-moment ascent step from a gradient estimate.

    Moments are exponential moving averages of the gradient and its square;
    bias correction divides by (1 - beta^t) with t counting this step as the
    t-th. The position moves by +step_size * m_hat / (sqrt(v_hat) + epsilon)
    per coordinate and is clamped back into the region.
    """
    t = state.t + 1
    m = hyper.beta1 * state.m + (1.0 - hyper.beta1) * gradient
    v = hyper.beta2 * state.v + (1.0 - hyper.beta2) * gradient * gradient
    m_hat = m / (1.0 - hyper.beta1**t)
    v_hat = v / (1.0 - hyper.beta2**t)
    step = hyper.step_size * m_hat / (np.sqrt(v_hat) + hyper.epsilon)
    new_position = project(
        Position(state.position.x + step[0], state.position.y + step[1]), region
    )
    return OptimizerState(new_position, m, v, t)


def _best_candidate(
    oracle: MeasurementOracle, region: Region, num_candidates: int, rng: np.random.Generator
):
    """Measure `num_candidates` uniform random positions once each and return
    (position, |y|^2) of the strongest; ties keep the earliest candidate."""
    if num_candidates < 1:
        raise ValueError(f"num_candidates must be >= 1, got {num_candidates}")
    h = region.half
    coords = rng.uniform(-h, h, size=(num_candidates, 2))
    best_idx = -1
    best_mag = -math.inf
    for i in range(num_candidates):
        y = oracle.measure(Position(coords[i, 0], coords[i, 1]))
        if abs(y) > best_mag:
            best_mag = abs(y)
            best_idx = i
    return Position(coords[best_idx, 0], coords[best_idx, 1]), best_mag**2


def init_position(
    oracle: MeasurementOracle, region: Region, num_candidates: int, rng: np.random.Generator
) -> Position:
    """Starting point: the strongest-measurement candidate among
    `num_candidates` uniform draws (one probe each)."""
    position, _ = _best_candidate(oracle, region, num_candidates, rng)
    return position


def optimize(
    oracle: MeasurementOracle,
    region: Region,
    hyper: HyperParams,
    rng: np.random.Generator,
) -> tuple[Position, Trajectory]:
    """Full run: candidate initialization, then max_iterations two-probe
    adaptive-moment steps with a fresh random coordinate direction each time.

    Returns the final position and the per-iteration trajectory. The oracle
    counter increases by exactly num_init_candidates + 2 * iterations (fewer
    iterations only when early_stop is enabled and triggers).
    """
    init_rng, direction_rng = rng.spawn(2)
    start_count = oracle.measurement_count
    position0, power0 = _best_candidate(oracle, region, hyper.num_init_candidates, init_rng)
    state = OptimizerState.at(position0)
    records: list[IterationRecord] = []
    recent_steps: list[float] = []
    for iteration in range(1, hyper.max_iterations + 1):
        direction_index = int(direction_rng.integers(2))
        direction = _UNIT_DIRECTIONS[direction_index]
        gradient, power_plus, power_minus = _probe(
            oracle, state.position, hyper.mu, direction, hyper.dim_factor, region
        )
        new_state = adamm_step(state, gradient, hyper, region)
        records.append(
            IterationRecord(
                iteration,
                state.position,
                power_plus,
                power_minus,
                direction_index,
                new_state.position,
            )
        )
        step_norm = math.hypot(
            new_state.position.x - state.position.x, new_state.position.y - state.position.y
        )
        state = new_state
        if hyper.early_stop:
            recent_steps.append(step_norm)
            if len(recent_steps) > hyper.early_stop_window:
                recent_steps.pop(0)
            if (
                len(recent_steps) == hyper.early_stop_window
                and max(recent_steps) < hyper.early_stop_tol
            ):
                break
    trajectory = Trajectory(
        position0, power0, records, oracle.measurement_count - start_count
    )
    return state.position, trajectory
