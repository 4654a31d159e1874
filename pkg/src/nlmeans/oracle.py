"""The oracle filter: weights from point differences of the clean image.

The oracle knows ``f`` and weighs each window pixel by
``exp(-(f(x) - f(x0))**2 / H**2)``.  It cannot be run on real data but
bounds what the adaptive filter can hope to achieve.
"""

from __future__ import annotations

import numpy as np

from .image import as_image, mirror_pad, pixel
from .weights import SoftminSum, WeightMap, exp_weights, window_offsets


def _check_window(window_radius, H):
    if window_radius < 0:
        raise ValueError("window radius must be non-negative")
    if not H > 0:
        raise ValueError(f"bandwidth H must be positive, got {H}")


def oracle_weights(f, x0, window_radius: int, H: float) -> WeightMap:
    _check_window(window_radius, H)
    f0 = pixel(f, *x0)
    r, c = x0
    dist = np.array([(pixel(f, r + di, c + dj) - f0) ** 2 for di, dj in window_offsets(window_radius)])
    side = 2 * window_radius + 1
    return WeightMap(tuple(x0), window_radius, exp_weights(dist, H).reshape(side, side))


def _window_values(img, x0, radius):
    r, c = x0
    side = 2 * radius + 1
    return np.array([pixel(img, r + di, c + dj) for di, dj in window_offsets(radius)]).reshape(side, side)


def oracle_estimate(f, Y, x0, window_radius: int, H: float) -> float:
    if np.shape(f) != np.shape(Y):
        raise ValueError(f"shape mismatch: {np.shape(f)} vs {np.shape(Y)}")
    w = oracle_weights(f, x0, window_radius, H)
    return float(np.sum(w.weights * _window_values(Y, x0, window_radius)))


def oracle_denoise(f, Y, window_radius: int, H: float) -> np.ndarray:
    """Apply the oracle at every pixel.

    ``Y`` may be a stack of noisy realizations with shape ``(..., N, N)``;
    the weights depend on ``f`` only and are shared by all of them.
    """
    _check_window(window_radius, H)
    f = as_image(f)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.shape[-2:] != f.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {Y.shape}")
    s, o = f.shape[0], window_radius
    fp = mirror_pad(f, o)
    yp = mirror_pad(Y, o)
    acc = SoftminSum(H)
    # centre first: its distance 0 is the minimum, so no rescaling happens
    offsets = window_offsets(window_radius)
    offsets.insert(0, offsets.pop(len(offsets) // 2))
    for di, dj in offsets:
        d = (fp[o + di:o + di + s, o + dj:o + dj + s] - f) ** 2
        acc.add(d, yp[..., o + di:o + di + s, o + dj:o + dj + s])
    return acc.result()
