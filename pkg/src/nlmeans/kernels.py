"""Patch kernels weighting the squared differences inside a patch distance.

Three kernels are supported:

* ``RECT``: every patch pixel weighs 1.
* ``GAUSSIAN``: ``exp(-(di**2 + dj**2) / (2 * h_g))`` for pixel offset ``(di, dj)``.
* ``K0``: on the ring ``j = max(|di|, |dj|)`` the weight is
  ``sum(1 / (2k + 1)**2 for k in range(max(1, j), p + 1))``.

``K0`` is a sum of box indicators ``sum_k 1[ring <= k] / (2k+1)**2``, i.e. the
plain average of the box means of radius ``1..p``.  :func:`box_terms` exposes
that decomposition so the filters can evaluate it with separable box sums.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Optional

import numpy as np


class KernelKind(enum.Enum):
    RECT = "rect"
    GAUSSIAN = "gauss"
    K0 = "k0"


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind = KernelKind.K0
    bandwidth: Optional[float] = None

    def __post_init__(self):
        if self.kind is KernelKind.GAUSSIAN:
            if self.bandwidth is None or not self.bandwidth > 0:
                raise ValueError("GAUSSIAN kernel needs a positive bandwidth")
        elif self.bandwidth is not None:
            raise ValueError(f"{self.kind.name} kernel takes no bandwidth")

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """Parse ``rect``, ``k0`` or ``gauss:<h_g>``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "rect" and not arg:
            return cls(KernelKind.RECT)
        if name == "k0" and not arg:
            return cls(KernelKind.K0)
        if name in ("gauss", "gaussian"):
            try:
                return cls(KernelKind.GAUSSIAN, float(arg))
            except ValueError:
                raise ValueError(f"bad gaussian bandwidth in {text!r}") from None
        raise ValueError(f"unknown kernel {text!r}")

    def __str__(self):
        if self.kind is KernelKind.GAUSSIAN:
            return f"gauss:{self.bandwidth:g}"
        return self.kind.value


RECT = KernelSpec(KernelKind.RECT)
K0 = KernelSpec(KernelKind.K0)


def gaussian(bandwidth: float) -> KernelSpec:
    return KernelSpec(KernelKind.GAUSSIAN, float(bandwidth))


def kernel_weight(spec: KernelSpec, offset, patch_radius: int) -> float:
    di, dj = offset
    j = max(abs(di), abs(dj))
    if j > patch_radius:
        raise ValueError(f"offset {offset} outside patch of radius {patch_radius}")
    if spec.kind is KernelKind.RECT:
        return 1.0
    if spec.kind is KernelKind.GAUSSIAN:
        return float(np.exp(-(di * di + dj * dj) / (2.0 * spec.bandwidth)))
    if patch_radius == 0:
        return 1.0
    return sum(1.0 / (2 * k + 1) ** 2 for k in range(max(1, j), patch_radius + 1))


@functools.lru_cache(maxsize=64)
def _table(spec: KernelSpec, patch_radius: int) -> np.ndarray:
    r = range(-patch_radius, patch_radius + 1)
    t = np.array([[kernel_weight(spec, (di, dj), patch_radius) for dj in r] for di in r])
    t.setflags(write=False)
    return t


def kernel_table(spec: KernelSpec, patch_radius: int) -> np.ndarray:
    """Read-only ``(2p+1, 2p+1)`` weight table, computed once per ``(spec, p)``."""
    if patch_radius < 0:
        raise ValueError("patch radius must be non-negative")
    return _table(spec, patch_radius)


def box_terms(spec: KernelSpec, patch_radius: int):
    """Express the kernel as ``[(coef, k), ...]``: weight = sum coef * 1[ring <= k].

    Returns ``None`` for kernels without such a form (GAUSSIAN).
    """
    if spec.kind is KernelKind.RECT or (spec.kind is KernelKind.K0 and patch_radius == 0):
        return [(1.0, patch_radius)]
    if spec.kind is KernelKind.K0:
        return [(1.0 / (2 * k + 1) ** 2, k) for k in range(1, patch_radius + 1)]
    return None


def profile_1d(spec: KernelSpec, patch_radius: int) -> np.ndarray:
    """1-D factor of a separable GAUSSIAN kernel: the table is its outer square."""
    if spec.kind is not KernelKind.GAUSSIAN:
        raise ValueError("only the GAUSSIAN kernel is separable in this sense")
    d = np.arange(-patch_radius, patch_radius + 1)
    return np.exp(-(d * d) / (2.0 * spec.bandwidth))
