"""Mean squared error and PSNR on unclamped real-valued images."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PEAK = 255.0


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float
    pixel_count: int


def mse(f, fhat) -> float:
    f = np.asarray(f, dtype=np.float64)
    fhat = np.asarray(fhat, dtype=np.float64)
    if f.shape != fhat.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {fhat.shape}")
    return float(np.mean((f - fhat) ** 2))


def psnr(f, fhat) -> float:
    """``10 log10(255**2 / MSE)``; ``math.inf`` for identical images."""
    err = mse(f, fhat)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(PEAK**2 / err)


def quality(f, fhat) -> QualityReport:
    err = mse(f, fhat)
    return QualityReport(err, math.inf if err == 0 else 10.0 * math.log10(PEAK**2 / err), int(np.size(f)))
