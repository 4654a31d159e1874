"""Seeded additive white Gaussian noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseSpec:
    """Noise level and the seed of the generator stream.

    Noise is drawn with numpy's ``PCG64`` bit generator and
    ``Generator.standard_normal`` (ziggurat method), one draw per pixel in
    row-major order, then scaled by ``sigma``.
    """

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def noise_field(shape, spec: NoiseSpec) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(int(spec.seed)))
    return spec.sigma * rng.standard_normal(shape)


def add_gaussian_noise(img: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """Return ``img + sigma * eps`` with ``eps`` i.i.d. standard normal; not clamped."""
    img = np.asarray(img, dtype=np.float64)
    if spec.sigma == 0:
        return img.copy()
    return img + noise_field(img.shape, spec)
