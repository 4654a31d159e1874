"""Bandwidth and risk formulas for Hölder-smooth images, and the practical
parameter rules for natural images."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import K0
from .nlm import DenoiseParams


@dataclass(frozen=True)
class HolderClass:
    """``|f(x) - f(y)| <= L * ||x - y||_inf ** beta`` on the unit square."""

    beta: float
    L: float

    def __post_init__(self):
        if not (self.beta > 0 and self.L > 0):
            raise ValueError("beta and L must be positive")


def _check(sigma, n):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")


def theoretical_bandwidth(sigma: float, hc: HolderClass, n: int) -> float:
    """Search-window half-width ``h`` in unit-square coordinates.

    ``h = (sigma**2 / (4 beta L**2)) ** (1/(2beta+2)) * n ** (-1/(2beta+2))``;
    multiply by ``N = sqrt(n)`` for a radius in pixels.
    """
    _check(sigma, n)
    e = 1.0 / (2 * hc.beta + 2)
    return (sigma**2 / (4 * hc.beta * hc.L**2)) ** e * n ** (-e)


def theoretical_mse_bound(sigma: float, hc: HolderClass, n: int) -> float:
    """Upper bound on the oracle's pointwise risk at the bandwidth above."""
    _check(sigma, n)
    b = hc.beta
    d = 2 * b + 2
    return (
        2 ** ((2 * b + 6) / d)
        * sigma ** (4 * b / d)
        * hc.L ** (4 / d)
        / b ** (2 * b / d)
        * n ** (-2 * b / d)
    )


def oracle_min_H(hc: HolderClass, h: float) -> float:
    """Lower limit ``sqrt(2) L h**beta`` the oracle bandwidth must exceed."""
    return math.sqrt(2) * hc.L * h**hc.beta


def odd_ceil(x: float) -> int:
    """Smallest odd integer >= ``x``."""
    k = math.ceil(x)
    return k if k % 2 else k + 1


def practical_H(sigma: float) -> float:
    return 0.4 * sigma + 2


def practical_window_side(sigma: float) -> int:
    return max(3, odd_ceil(1.5 * math.sqrt(sigma) + 4.5))


def practical_patch_side(sigma: float) -> int:
    # only sigma = 10, 20, 30 are documented; switch half way
    return 17 if sigma < 15 else 21


def practical_params(sigma: float) -> DenoiseParams:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return DenoiseParams.from_sides(
        practical_window_side(sigma),
        practical_patch_side(sigma),
        practical_H(sigma),
        kernel=K0,
        sigma=float(sigma),
    )
