"""Convex piecewise-linear link delay cost and network-wide aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# The standard six-segment increasing-cost parameterization; overridable in
# the experiment config.
DEFAULT_BREAKPOINTS = (1 / 3, 2 / 3, 9 / 10, 1.0, 11 / 10)
DEFAULT_SLOPES = (1.0, 3.0, 10.0, 70.0, 500.0, 5000.0)


@dataclass(frozen=True)
class DelayFunction:
    """Convex piecewise-linear cost of link utilization with f(0) = 0.

    ``breakpoints`` are the increasing utilization values where the slope
    changes; ``slopes`` has one more entry and must be strictly increasing.
    The last segment extends beyond the final breakpoint, so overloaded
    links still get a finite (steep) cost.
    """

    breakpoints: tuple[float, ...] = DEFAULT_BREAKPOINTS
    slopes: tuple[float, ...] = DEFAULT_SLOPES

    def __post_init__(self):
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more slope than breakpoints")
        if np.any(np.diff(self.breakpoints) <= 0) or self.breakpoints[0] <= 0:
            raise ValueError("breakpoints must be positive and increasing")
        if np.any(np.diff(self.slopes) <= 0):
            raise ValueError("slopes must be strictly increasing (convexity)")

    def segment_constants(self) -> np.ndarray:
        """Intercept of each segment's affine form, chained for continuity."""
        consts = np.zeros(len(self.slopes))
        for k, b in enumerate(self.breakpoints):
            consts[k + 1] = consts[k] + (self.slopes[k] - self.slopes[k + 1]) * b
        return consts


def eval_delay(f: DelayFunction, utilization: float) -> float:
    """Cost at a single nonnegative utilization value."""
    if utilization < 0:
        raise ValueError(f"negative utilization {utilization}")
    seg = int(np.searchsorted(f.breakpoints, utilization, side="left"))
    return f.slopes[seg] * utilization + f.segment_constants()[seg]


def eval_delay_vec(f: DelayFunction, utilization: np.ndarray) -> np.ndarray:
    u = np.asarray(utilization, dtype=float)
    if np.any(u < 0):
        raise ValueError("negative utilization")
    segs = np.searchsorted(f.breakpoints, u, side="left")
    slopes = np.asarray(f.slopes)
    return slopes[segs] * u + f.segment_constants()[segs]


def total_delay(f: DelayFunction, loads: np.ndarray, capacities: np.ndarray) -> float:
    """Sum of per-link costs at utilization load/capacity."""
    loads = np.asarray(loads, dtype=float)
    capacities = np.asarray(capacities, dtype=float)
    if loads.shape != capacities.shape:
        raise ValueError(f"loads {loads.shape} vs capacities {capacities.shape}")
    return float(np.sum(eval_delay_vec(f, loads / capacities)))


def epigraph_terms(f: DelayFunction, capacity: float) -> list[tuple[float, float]]:
    """Affine forms (a, b) such that cost >= a * load + b per segment.

    Minimizing an auxiliary cost variable subject to these inequalities
    reproduces the exact piecewise-linear cost for any load >= 0.
    """
    consts = f.segment_constants()
    return [(m / capacity, float(c)) for m, c in zip(f.slopes, consts)]
