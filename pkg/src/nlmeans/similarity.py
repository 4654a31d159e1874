"""Patch distances and estimated similarity functions.

Two evaluation routes exist.  The scalar functions (``patch_distance_sq``
and friends) work on one pair of pixels straight from mirrored patches and
the kernel table.  :class:`OffsetDistances` evaluates the same quantity for
every pixel at once, for one fixed search-window offset, which is what the
full-image filters iterate over.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .image import Parity, extract_patch, mirror_pad, parity_mask, pixel
from .kernels import KernelKind, KernelSpec, RECT, box_terms, kernel_table, profile_1d


def patch_distance_sq(Y, x, x0, patch_radius: int, spec: KernelSpec = RECT) -> float:
    """Kernel-weighted mean of ``(Y(x + d) - Y(x0 + d))**2`` over patch offsets ``d``."""
    a = extract_patch(Y, x, patch_radius)
    b = extract_patch(Y, x0, patch_radius)
    k = kernel_table(spec, patch_radius).ravel()
    return float(np.dot(k, (a - b) ** 2) / k.sum())


def estimated_similarity_sq(Y, x, x0, patch_radius: int, spec: KernelSpec, sigma: float) -> float:
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    return patch_distance_sq(Y, x, x0, patch_radius, spec) - 2.0 * sigma**2


def split_similarity_sq(Y, x, x0, patch_radius: int, sigma: float) -> float:
    """Like :func:`estimated_similarity_sq` with RECT weights restricted to the
    odd-parity offsets of the patch (the DOUBLE_PRIME half around ``x0``)."""
    if patch_radius < 1:
        raise ValueError("split similarity needs patch_radius >= 1")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    mask = parity_mask(patch_radius, Parity.DOUBLE_PRIME).ravel()
    a = extract_patch(Y, x, patch_radius)[mask]
    b = extract_patch(Y, x0, patch_radius)[mask]
    return float(np.mean((a - b) ** 2)) - 2.0 * sigma**2


def true_similarity_sq(f, x, x0) -> float:
    """``(f(x) - f(x0))**2`` from the clean image."""
    return (pixel(f, *x) - pixel(f, *x0)) ** 2


class OffsetDistances:
    """Distance fields ``x0 -> d2(x0 + offset, x0)`` over a whole image.

    The image is mirror-padded once by ``window_radius + patch_radius``.
    For every offset the squared-difference image is formed on the grid
    grown by ``patch_radius`` and then smoothed by the patch kernel, written
    as box sums (RECT, K0), a separable product (GAUSSIAN) or a parity
    restricted box sum (the split variant).
    """

    def __init__(self, Y: np.ndarray, window_radius: int, patch_radius: int):
        if window_radius < 0 or patch_radius < 0:
            raise ValueError("radii must be non-negative")
        self.side = Y.shape[-1]
        self.w = window_radius
        self.p = patch_radius
        self.pad = window_radius + patch_radius
        self.padded = mirror_pad(np.asarray(Y, dtype=np.float64), self.pad)
        n = self.side + 2 * self.p
        idx = np.arange(n)
        self._checker = np.where((idx[:, None] + idx[None, :]) % 2 == 0, 1.0, -1.0)

    def values(self, offset) -> np.ndarray:
        """``Y(x0 + offset)`` for every ``x0`` (mirrored)."""
        di, dj = offset
        s, o = self.side, self.pad
        return self.padded[o + di:o + di + s, o + dj:o + dj + s]

    def sq_diff(self, offset) -> np.ndarray:
        """``(Y(y + offset) - Y(y))**2`` on the grid grown by ``patch_radius``."""
        di, dj = offset
        n = self.side + 2 * self.p
        lo = self.w
        base = self.padded[lo:lo + n, lo:lo + n]
        moved = self.padded[lo + di:lo + di + n, lo + dj:lo + dj + n]
        return (moved - base) ** 2

    def _crop(self, a):
        p, s = self.p, self.side
        return a[p:p + s, p:p + s]

    def _box_mean(self, a, k):
        if k == 0:
            return self._crop(a)
        return self._crop(ndimage.uniform_filter(a, size=2 * k + 1, mode="constant"))

    def distance(self, offset, spec: KernelSpec) -> np.ndarray:
        """Kernel-weighted patch distance field for ``offset``."""
        D = self.sq_diff(offset)
        terms = box_terms(spec, self.p)
        if terms is not None:
            # coef * (2k+1)**2 is the box's share of the kernel mass
            total = 0.0
            mass = 0.0
            for coef, k in terms:
                m = coef * (2 * k + 1) ** 2
                total = total + m * self._box_mean(D, k)
                mass += m
            return total / mass
        if spec.kind is KernelKind.GAUSSIAN:
            g = profile_1d(spec, self.p)
            out = ndimage.correlate1d(D, g, axis=0, mode="constant")
            out = ndimage.correlate1d(out, g, axis=1, mode="constant")
            return self._crop(out) / g.sum() ** 2
        raise ValueError(f"unsupported kernel {spec}")

    def split_distance(self, offset) -> np.ndarray:
        """Unweighted mean over the odd-parity patch offsets only.

        With ``c = (-1)**(row+col)`` the parity-signed box sum around ``x0``
        is ``c(x0) * box(c * D)(x0)``; the odd half is then
        ``(box(D) - signed) / 2``.
        """
        if self.p < 1:
            raise ValueError("split distance needs patch_radius >= 1")
        D = self.sq_diff(offset)
        size = 2 * self.p + 1
        full = self._box_mean(D, self.p)
        signed = self._crop(self._checker) * self._box_mean(self._checker * D, self.p)
        count = 2 * self.p * (self.p + 1)
        return (full - signed) * (size * size / 2.0) / count
