"""Adaptive Non-Local Means and its checkerboard-split variant.

``nlm_denoise`` follows the classic algorithm: kernel-weighted patch
distances, the centre pixel given the largest distance found among its
neighbours, weights ``exp(-d2 / H**2)``.  ``split_denoise`` builds weights
from the odd-parity half of each patch and averages only over the
even-parity half of the window, which keeps weights and averaged
observations independent.  Its centre pixel takes the exact similarity
``rho**2(x0) = 0``: the estimate ``0 - 2 sigma**2`` there would outweigh
every neighbour by ``exp(2 sigma**2 / H**2)`` and turn the filter into
the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .image import as_image, pixel
from .kernels import K0, KernelSpec
from .similarity import OffsetDistances, patch_distance_sq, split_similarity_sq
from .weights import SoftminSum, WeightMap, exp_weights, window_offsets


@dataclass(frozen=True)
class DenoiseParams:
    window_radius: int
    patch_radius: int
    H: float
    kernel: KernelSpec = field(default=K0)
    sigma: Optional[float] = None

    def __post_init__(self):
        if self.window_radius < 1:
            raise ValueError("window_radius must be >= 1")
        if self.patch_radius < 0:
            raise ValueError("patch_radius must be >= 0")
        if not self.H > 0:
            raise ValueError(f"H must be positive, got {self.H}")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    @classmethod
    def from_sides(cls, window_side: int, patch_side: int, H: float, **kw) -> "DenoiseParams":
        """Build from odd window/patch side lengths (13 for a 13x13 window)."""
        for name, side in (("window", window_side), ("patch", patch_side)):
            if side < 1 or side % 2 == 0:
                raise ValueError(f"{name} side must be a positive odd integer, got {side}")
        return cls((window_side - 1) // 2, (patch_side - 1) // 2, H, **kw)

    @property
    def window_side(self) -> int:
        return 2 * self.window_radius + 1

    @property
    def patch_side(self) -> int:
        return 2 * self.patch_radius + 1


def nlm_weights(Y, x0, p: DenoiseParams) -> WeightMap:
    offsets = window_offsets(p.window_radius)
    r, c = x0
    dist = np.array([
        patch_distance_sq(Y, (r + di, c + dj), x0, p.patch_radius, p.kernel) if (di, dj) != (0, 0) else np.nan
        for di, dj in offsets
    ])
    centre = len(offsets) // 2
    dist[centre] = np.nanmax(dist)
    side = p.window_side
    return WeightMap(tuple(x0), p.window_radius, exp_weights(dist, p.H).reshape(side, side))


def nlm_denoise(Y, p: DenoiseParams) -> np.ndarray:
    Y = as_image(Y)
    od = OffsetDistances(Y, p.window_radius, p.patch_radius)
    acc = SoftminSum(p.H)
    dmax = None
    for off in window_offsets(p.window_radius):
        if off == (0, 0):
            continue
        d = od.distance(off, p.kernel)
        dmax = d.copy() if dmax is None else np.maximum(dmax, d)
        acc.add(d, od.values(off))
    acc.add(dmax, Y)
    return acc.result()


def _split_params(p: DenoiseParams):
    if p.sigma is None:
        raise ValueError("split variant needs sigma")
    if p.patch_radius < 1:
        raise ValueError("split variant needs patch_radius >= 1")


def split_weights(Y, x0, p: DenoiseParams) -> WeightMap:
    """Weights over the even-parity half of the window; odd offsets get 0."""
    _split_params(p)
    r, c = x0
    side = p.window_side
    offsets = window_offsets(p.window_radius)
    prime = [(di + dj) % 2 == 0 for di, dj in offsets]
    rho = np.array([
        split_similarity_sq(Y, (r + di, c + dj), x0, p.patch_radius, p.sigma) if (di, dj) != (0, 0) else 0.0
        for (di, dj), keep in zip(offsets, prime) if keep
    ])
    w = np.zeros(len(offsets))
    w[np.array(prime)] = exp_weights(rho, p.H)
    return WeightMap(tuple(x0), p.window_radius, w.reshape(side, side))


def split_denoise(Y, p: DenoiseParams) -> np.ndarray:
    _split_params(p)
    Y = as_image(Y)
    od = OffsetDistances(Y, p.window_radius, p.patch_radius)
    acc = SoftminSum(p.H)
    shift = 2.0 * p.sigma**2
    for off in window_offsets(p.window_radius):
        if (off[0] + off[1]) % 2:
            continue
        if off == (0, 0):
            rho = np.zeros(Y.shape)
        else:
            rho = od.split_distance(off) - shift
        acc.add(rho, od.values(off))
    return acc.result()


def window_estimate(Y, w: WeightMap) -> float:
    """``sum w(x) Y(x)`` over the mirrored window of ``w``."""
    r, c = w.center
    return float(sum(w.at(o) * pixel(Y, r + o[0], c + o[1]) for o in window_offsets(w.radius)))
