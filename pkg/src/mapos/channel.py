"""Geometric multipath channel model and noisy measurement oracle.

A channel realization is a set of plane-wave paths, each with a complex gain
and an arrival direction. Moving the receive antenna away from the reference
point changes only the per-path propagation length

    rho_l(x, y) = x * cos(elevation_l) * sin(azimuth_l) + y * sin(elevation_l)

so the response at position r is  h(r) = sum_l gain_l * exp(-j*k*rho_l(r))
with k = 2*pi/wavelength. Positions are expressed in wavelength units; the
default wavelength of 1 makes a region side of 4 mean "4 wavelengths".
"""

from __future__ import annotations

import cmath
import collections
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels

HALF_PI = math.pi / 2.0


class Position(collections.namedtuple("Position", ["x", "y"])):
    """Antenna coordinate in wavelength units, relative to the reference point.

    Components are coerced to plain floats so positions serialize cleanly no
    matter what numeric type produced them.
    """

    __slots__ = ()

    def __new__(cls, x: float, y: float) -> "Position":
        return super().__new__(cls, float(x), float(y))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> "Position":
        return cls(arr[0], arr[1])


ORIGIN = Position(0.0, 0.0)


@dataclass(frozen=True)
class PathComponent:
    """One multipath component: complex gain plus arrival angles in radians."""

    gain: complex
    elevation_aoa: float
    azimuth_aoa: float

    def __post_init__(self):
        if not (-HALF_PI <= self.elevation_aoa <= HALF_PI):
            raise ValueError(f"elevation_aoa {self.elevation_aoa} outside [-pi/2, pi/2]")
        if not (-HALF_PI <= self.azimuth_aoa <= HALF_PI):
            raise ValueError(f"azimuth_aoa {self.azimuth_aoa} outside [-pi/2, pi/2]")

    @property
    def magnitude(self) -> float:
        return abs(self.gain)

    @property
    def phase(self) -> float:
        """Gain phase in (-pi, pi]."""
        return cmath.phase(self.gain)


@dataclass(frozen=True)
class ChannelRealization:
    """An ordered set of paths plus the carrier wavelength."""

    paths: tuple[PathComponent, ...]
    wavelength: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))
        if len(self.paths) < 1:
            raise ValueError("a channel needs at least one path")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    # Per-path arrays in declared path order, shared by all evaluation kernels.
    @cached_property
    def gains(self) -> np.ndarray:
        return np.array([p.gain for p in self.paths], dtype=np.complex128)

    @cached_property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.gains)

    @cached_property
    def phases(self) -> np.ndarray:
        return np.angle(self.gains)

    @cached_property
    def dir_x(self) -> np.ndarray:
        """x-coefficient of the path-length change: cos(elevation)*sin(azimuth)."""
        return np.array(
            [math.cos(p.elevation_aoa) * math.sin(p.azimuth_aoa) for p in self.paths]
        )

    @cached_property
    def dir_y(self) -> np.ndarray:
        """y-coefficient of the path-length change: sin(elevation)."""
        return np.array([math.sin(p.elevation_aoa) for p in self.paths])


@dataclass(frozen=True)
class Region:
    """Square feasible set centered on the reference point, side in wavelengths."""

    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError(f"region side must be positive, got {self.side}")

    @property
    def half(self) -> float:
        return self.side / 2.0

    def contains(self, position: Position) -> bool:
        return abs(position.x) <= self.half and abs(position.y) <= self.half


def sample_channel(seed: int, num_paths: int, wavelength: float = 1.0) -> ChannelRealization:
    """Draw a random channel: i.i.d. complex Gaussian gains of per-path
    variance 1/num_paths, arrival angles uniform on [-pi/2, pi/2]."""
    if num_paths < 1:
        raise ValueError(f"num_paths must be >= 1, got {num_paths}")
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    rng = np.random.default_rng(seed)
    scale = math.sqrt(1.0 / (2.0 * num_paths))
    re = rng.standard_normal(num_paths) * scale
    im = rng.standard_normal(num_paths) * scale
    elevations = rng.uniform(-HALF_PI, HALF_PI, num_paths)
    azimuths = rng.uniform(-HALF_PI, HALF_PI, num_paths)
    paths = tuple(
        PathComponent(complex(re[l], im[l]), float(elevations[l]), float(azimuths[l]))
        for l in range(num_paths)
    )
    return ChannelRealization(paths, wavelength)


def path_length_delta(position: Position, elevation_aoa: float, azimuth_aoa: float) -> float:
    """Signed propagation-length change of one path when the antenna moves
    from the reference point to `position`."""
    return position.x * math.cos(elevation_aoa) * math.sin(azimuth_aoa) + position.y * math.sin(
        elevation_aoa
    )


def field_response(channel: ChannelRealization, position: Position) -> np.ndarray:
    """Per-path unit-modulus phase terms exp(+j*k*rho_l) at `position`."""
    rho = channel.dir_x * position.x + channel.dir_y * position.y
    return np.exp(1j * channel.wavenumber * rho)


def response_at(channel: ChannelRealization, xs, ys) -> np.ndarray:
    """Channel response at many positions given as coordinate arrays."""
    return kernels.response_at(
        channel.gains,
        channel.dir_x,
        channel.dir_y,
        channel.wavenumber,
        np.ascontiguousarray(xs, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.float64),
    )


def channel_response(channel: ChannelRealization, position: Position) -> complex:
    """Complex response  h(r) = sum_l gain_l * exp(-j*k*rho_l(r)),
    accumulated in declared path order."""
    out = response_at(channel, np.array([position.x]), np.array([position.y]))
    return complex(out[0])


def channel_power_at(channel: ChannelRealization, xs, ys) -> np.ndarray:
    """Pairwise-expansion |h|^2 at many positions (independent of `response_at`)."""
    return kernels.power_at(
        channel.magnitudes,
        channel.phases,
        channel.dir_x,
        channel.dir_y,
        channel.wavenumber,
        np.ascontiguousarray(xs, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.float64),
    )


def channel_power_expansion(channel: ChannelRealization, position: Position) -> float:
    """|h(r)|^2 via the double sum over path pairs,

        sum_{m,n} a_m a_n cos(k*(rho_m - rho_n) + (phi_n - phi_m)),

    which equals |channel_response(r)|^2 up to floating-point noise."""
    out = channel_power_at(channel, np.array([position.x]), np.array([position.y]))
    return float(out[0])


def receive_snr(
    channel: ChannelRealization,
    position: Position,
    transmit_power: float,
    noise_variance: float,
) -> float:
    """Receive SNR in dB:  10*log10(|h(r)|^2 * P / sigma^2)."""
    if not transmit_power > 0:
        raise ValueError(f"transmit_power must be positive, got {transmit_power}")
    if not noise_variance > 0:
        raise ValueError(f"noise_variance must be positive for an SNR, got {noise_variance}")
    h = channel_response(channel, position)
    return 10.0 * math.log10(abs(h) ** 2 * transmit_power / noise_variance)


@dataclass
class MeasurementOracle:
    """Noisy received-signal sampler; the only gateway to the channel during
    a search. Owns the noise stream and counts every probe."""

    channel: ChannelRealization
    transmit_power: float
    noise_variance: float
    rng: np.random.Generator
    pilot_symbol: complex = 1.0 + 0.0j
    measurement_count: int = field(default=0)

    def __post_init__(self):
        if not self.transmit_power > 0:
            raise ValueError(f"transmit_power must be positive, got {self.transmit_power}")
        if self.noise_variance < 0:
            raise ValueError(f"noise_variance must be >= 0, got {self.noise_variance}")

    def measure(self, position: Position) -> complex:
        """One probe:  y(r) = sqrt(P)*h(r)*s + n,  n ~ CN(0, sigma^2)."""
        h = channel_response(self.channel, position)
        noise_scale = math.sqrt(self.noise_variance / 2.0)
        noise = complex(
            noise_scale * self.rng.standard_normal(),
            noise_scale * self.rng.standard_normal(),
        )
        self.measurement_count += 1
        return math.sqrt(self.transmit_power) * h * self.pilot_symbol + noise
