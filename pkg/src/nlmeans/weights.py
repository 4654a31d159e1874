"""Normalized exponential weights over a search window."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WeightMap:
    """Weights over the ``(2r+1)**2`` window around ``center``, row-major."""

    center: tuple
    radius: int
    weights: np.ndarray

    def __post_init__(self):
        side = 2 * self.radius + 1
        if self.weights.shape != (side, side):
            raise ValueError(f"weights must have shape {(side, side)}")

    def at(self, offset) -> float:
        di, dj = offset
        return float(self.weights[di + self.radius, dj + self.radius])


def exp_weights(dist, H: float) -> np.ndarray:
    """``exp(-dist / H**2)`` normalized to sum 1.

    The minimum distance is subtracted first; the normalized result is
    unchanged and nothing underflows to an all-zero window.
    """
    if not H > 0:
        raise ValueError(f"bandwidth H must be positive, got {H}")
    dist = np.asarray(dist, dtype=np.float64)
    w = np.exp(-(dist - dist.min()) / (H * H))
    return w / w.sum()


def window_offsets(radius: int):
    """Window offsets in row-major order."""
    r = range(-radius, radius + 1)
    return [(di, dj) for di in r for dj in r]


class SoftminSum:
    """Running ``sum exp(-d/H**2) * y`` and ``sum exp(-d/H**2)`` over offsets.

    Both sums are kept relative to the smallest distance seen so far and
    rescaled whenever it drops.  Per pixel the arithmetic only depends on
    the order in which offsets are added.
    """

    def __init__(self, H: float):
        if not H > 0:
            raise ValueError(f"bandwidth H must be positive, got {H}")
        self.inv_h2 = 1.0 / (H * H)
        self.dmin = None
        self.num = None
        self.den = None

    def add(self, dist: np.ndarray, values: np.ndarray) -> None:
        if self.dmin is None:
            self.dmin = np.array(dist, dtype=np.float64)
            self.den = np.ones_like(self.dmin)
            self.num = values * 1.0
            return
        if (dist < self.dmin).any():
            new_min = np.minimum(self.dmin, dist)
            scale = np.exp((new_min - self.dmin) * self.inv_h2)
            self.num = self.num * scale
            self.den = self.den * scale
            self.dmin = new_min
        w = np.exp((self.dmin - dist) * self.inv_h2)
        self.num = self.num + w * values
        self.den = self.den + w

    def result(self) -> np.ndarray:
        return self.num / self.den
