"""Measurement-driven position optimization for a movable receive antenna.

The package simulates a geometric multipath channel over a small planar
region, optimizes the receive-antenna position from noisy magnitude
measurements alone (no channel estimate), and benchmarks that against a
sparse-recovery baseline that first estimates the channel and then
grid-searches its reconstruction. See the `harness` module for the
experiment drivers and `cli` for the command-line surface.
"""

from .channel import (
    ChannelRealization,
    MeasurementOracle,
    PathComponent,
    Position,
    Region,
    channel_power_expansion,
    channel_response,
    field_response,
    path_length_delta,
    receive_snr,
    sample_channel,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .optimizer import (
    HyperParams,
    OptimizerState,
    Trajectory,
    adamm_step,
    init_position,
    optimize,
    project,
    zo_gradient,
)
from .baseline import (
    AngularDictionary,
    BaselineConfig,
    EstimatedChannel,
    collect_training,
    csi_baseline,
    grid_search_optimum,
    omp_recover,
    reconstruct_response,
)
from .harness import (
    ExperimentConfig,
    SweepTable,
    brute_force_max,
    run_budget_sweep,
    run_noise_sweep,
    snr_map,
    write_csv,
)

__version__ = "0.1.0"
