"""Uniform position grids over the feasible region and argmax selection."""

import numpy as np

from .channel import Position, Region

_FLOOR_EPS = 1e-9  # absorbs binary rounding in side/resolution before flooring
_TIE_REL_TOL = 1e-12


def grid_axis(region: Region, resolution: float) -> np.ndarray:
    """1-D grid coordinates: floor(side/resolution) + 1 points starting at the
    lower edge with the given spacing. When the resolution divides the side the
    grid includes both edges; it never leaves the region."""
    if not resolution > 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    count = int(np.floor(region.side / resolution + _FLOOR_EPS)) + 1
    axis = -region.half + np.arange(count) * resolution
    return np.clip(axis, -region.half, region.half)


def grid_positions(region: Region, resolution: float):
    """Flattened (xs, ys) of the full grid, x-major (x varies slowest)."""
    axis = grid_axis(region, resolution)
    xg, yg = np.meshgrid(axis, axis, indexing="ij")
    return xg.ravel(), yg.ravel()


def argmax_first(values: np.ndarray, rel_tol: float = _TIE_REL_TOL) -> int:
    """Index of the first value tied with the maximum.

    Flat surfaces evaluate with last-ulp jitter, so "tied" means within
    rel_tol of the max; this keeps the first-occurrence tie-break meaningful.
    """
    values = np.asarray(values)
    best = values.max()
    threshold = best - abs(best) * rel_tol
    return int(np.argmax(values >= threshold))


def grid_argmax(values: np.ndarray, region: Region, resolution: float) -> Position:
    """Position of the (first-tie) maximum of values laid out per grid_positions."""
    axis = grid_axis(region, resolution)
    idx = argmax_first(values)
    n = axis.shape[0]
    return Position(float(axis[idx // n]), float(axis[idx % n]))
