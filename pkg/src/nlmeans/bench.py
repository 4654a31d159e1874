"""Benchmark sweeps and Monte Carlo convergence-rate checks.

Every sweep is deterministic given its seed.  Noise is drawn once per noise
group (one sigma of an oracle sweep, one image/sigma pair of a table run)
with seed ``seed + group index``; the seed used is stored in each row.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .kernels import K0, RECT, KernelSpec
from .metrics import mse
from .nlm import DenoiseParams, nlm_denoise, split_denoise
from .noise import NoiseSpec, add_gaussian_noise, noise_field
from .oracle import oracle_denoise
from .similarity import estimated_similarity_sq, true_similarity_sq
from .parameters import (
    HolderClass,
    practical_H,
    practical_patch_side,
    theoretical_bandwidth,
)


@dataclass
class BenchRow:
    image_id: str
    side: int
    sigma: float
    window_side: int
    patch_side: int
    H: float
    kernel: str
    variant: str
    seed: int
    mse: float
    psnr_db: float
    wall_ms: int = 0


@dataclass
class RateResult:
    beta: float
    sides: List[int]
    mean_mse_per_side: List[float]
    fitted_slope: float
    window_radii: List[int] = dataclasses.field(default_factory=list)
    variant: str = "oracle"


def table_oracle_H(sigma: float) -> float:
    """Oracle bandwidth used for the window-size table.

    The bandwidth behind the reference window-size table is not given; this
    linear rule reproduces its columns at sigma = 10, 20, 30 (see README).
    """
    return 0.04 * sigma + 2


def _row(image_id, clean, out, sigma, window_side, patch_side, H, kernel, variant, seed, t0, timing):
    err = mse(clean, out)
    return BenchRow(
        image_id=image_id,
        side=clean.shape[0],
        sigma=float(sigma),
        window_side=window_side,
        patch_side=patch_side,
        H=float(H),
        kernel=kernel,
        variant=variant,
        seed=int(seed),
        mse=err,
        psnr_db=psnr_from_mse(err),
        wall_ms=int(round((time.perf_counter() - t0) * 1000)) if timing else 0,
    )


def psnr_from_mse(err: float) -> float:
    return math.inf if err == 0 else 10.0 * math.log10(255.0**2 / err)


def bench_oracle_sweep(
    clean,
    sigmas: Sequence[float],
    window_sides: Sequence[int],
    seed: int = 0,
    H: Optional[Callable[[float], float]] = None,
    image_id: str = "image",
    timing: bool = False,
) -> List[BenchRow]:
    """Oracle PSNR for every (sigma, window side); one noise draw per sigma."""
    for s in window_sides:
        if s < 3 or s % 2 == 0:
            raise ValueError(f"window sides must be odd and >= 3, got {s}")
    H = H or table_oracle_H
    rows = []
    for gi, sigma in enumerate(sigmas):
        noisy = add_gaussian_noise(clean, NoiseSpec(sigma, seed + gi))
        for ws in window_sides:
            t0 = time.perf_counter()
            out = oracle_denoise(clean, noisy, (ws - 1) // 2, H(sigma))
            rows.append(_row(image_id, clean, out, sigma, ws, 1, H(sigma), "-", "oracle", seed + gi, t0, timing))
    return rows


def bench_patch_sweep(
    clean,
    sigma: float,
    window_side: int,
    H: float,
    patch_sides: Sequence[int],
    seed: int = 0,
    kernel: KernelSpec = K0,
    image_id: str = "image",
    timing: bool = False,
) -> List[BenchRow]:
    """NLM PSNR against patch side on a single noisy realization."""
    for s in patch_sides:
        if s < 3 or s % 2 == 0:
            raise ValueError(f"patch sides must be odd and >= 3, got {s}")
    noisy = add_gaussian_noise(clean, NoiseSpec(sigma, seed))
    rows = []
    for ps in patch_sides:
        t0 = time.perf_counter()
        p = DenoiseParams.from_sides(window_side, ps, H, kernel=kernel)
        out = nlm_denoise(noisy, p)
        rows.append(_row(image_id, clean, out, sigma, window_side, ps, H, str(kernel), "nlm", seed, t0, timing))
    return rows


# baseline settings of the classic filter: 21x21 window, 9x9 patches
BASELINE_WINDOW_SIDE = 21
BASELINE_PATCH_SIDE = 9


def bench_table2(
    images: dict,
    sigmas: Sequence[float],
    seed: int = 0,
    timing: bool = False,
) -> List[BenchRow]:
    """Practical-rule NLM ("ours") against the 21x21/9x9 baseline.

    Both use ``H = 0.4 sigma + 2`` and the K0 kernel; they see the same noisy
    image.  Rows come in (baseline, ours) pairs per image and sigma.
    """
    from .parameters import practical_params

    rows = []
    gi = 0
    for image_id, clean in images.items():
        for sigma in sigmas:
            noisy = add_gaussian_noise(clean, NoiseSpec(sigma, seed + gi))
            H = practical_H(sigma)
            base = DenoiseParams.from_sides(BASELINE_WINDOW_SIDE, BASELINE_PATCH_SIDE, H)
            ours = practical_params(sigma)
            for variant, p in (("baseline", base), ("nlm", ours)):
                t0 = time.perf_counter()
                out = nlm_denoise(noisy, p)
                rows.append(_row(image_id, clean, out, sigma, p.window_side, p.patch_side, H,
                                 str(p.kernel), variant, seed + gi, t0, timing))
            gi += 1
    return rows


def delta_psnr(rows: Sequence[BenchRow]):
    """``{(image_id, sigma): psnr(nlm) - psnr(baseline)}`` from table rows."""
    by = {(r.image_id, r.sigma, r.variant): r.psnr_db for r in rows}
    return {
        (img, s): by[(img, s, "nlm")] - by[(img, s, "baseline")]
        for (img, s, v) in by
        if v == "nlm" and (img, s, "baseline") in by
    }


def write_csv(rows, fh) -> None:
    """Write rows (dataclass instances) with a header; LF line endings."""
    rows = list(rows)
    if not rows:
        return
    names = [f.name for f in dataclasses.fields(rows[0])]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(names)
    for r in rows:
        w.writerow([_fmt(getattr(r, n)) for n in names])


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def format_table(rows: Sequence[BenchRow]) -> str:
    lines = ["image     side sigma window patch      H variant   PSNR(dB)"]
    for r in rows:
        lines.append(
            f"{r.image_id:<9} {r.side:>4} {r.sigma:>5g} {r.window_side:>6} {r.patch_side:>5} "
            f"{r.H:>6.2f} {r.variant:<9} {r.psnr_db:>8.2f}"
        )
    return "\n".join(lines)


# -- convergence rate ------------------------------------------------------

def holder_image(side: int, L: float, beta: float = 1.0) -> np.ndarray:
    """Synthetic image on the grid ``k/side`` with Hölder constant ``L``.

    For ``beta == 1``: ``127.5 + A (sin 2pi u + sin 2pi v) / 2`` whose
    sup-norm Lipschitz constant is ``2 pi A``.  ``A = L / (2 pi)`` as long as
    that stays within [0, 255]; larger ``L`` raises the frequency instead.
    For ``0 < beta < 1``: ``127.5 + (L/2)(|u - c|**beta + |v - c|**beta)``
    with a cusp at the grid centre, Hölder-``beta`` with constant ``L``.
    """
    u = np.arange(1, side + 1) / side
    if beta == 1:
        A = L / (2 * math.pi)
        freq = 1.0
        if A > 127.5:
            freq, A = A / 127.5, 127.5
        g = np.sin(2 * math.pi * freq * u)
        return 127.5 + A / 2 * (g[:, None] + g[None, :])
    if 0 < beta < 1:
        c = u[(side - 1) // 2]
        g = np.abs(u - c) ** beta
        return 127.5 + L / 2 * (g[:, None] + g[None, :])
    raise ValueError("synthetic images exist for 0 < beta <= 1 only")


def fit_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns)."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(np.unique(ns)) < 2:
        raise ValueError("need at least two distinct sizes to fit a slope")
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def rate_window_radius(sigma: float, hc: HolderClass, side: int) -> int:
    """Pixel radius ``round(h N)`` of the theoretical window, at least 1."""
    if sigma == 0:
        return 1
    return max(1, round(theoretical_bandwidth(sigma, hc, side * side) * side))


def rate_H(hc: HolderClass, radius: int, side: int) -> float:
    """Oracle bandwidth ``2 L h**beta``, above the ``sqrt(2) L h**beta`` floor."""
    return 2.0 * hc.L * (radius / side) ** hc.beta


def _interior_mse(est, f, margin):
    """Squared error averaged over pixels whose neighbourhood stays on the grid."""
    s = f.shape[0]
    if 2 * margin >= s:
        raise ValueError(f"no interior pixels at side {s} with margin {margin}")
    sl = slice(margin, s - margin)
    return float(np.mean((est[..., sl, sl] - f[sl, sl]) ** 2))


def rate_check(
    beta: float,
    L: float,
    sigma: float,
    sides: Sequence[int],
    reps: int = 20,
    variant: str = "oracle",
    seed: int = 0,
    patch_side: Optional[int] = None,
    workers: int = 1,
) -> RateResult:
    """Empirical MSE against ``n = side**2`` at the theoretical window size.

    For each side a Hölder image is synthesized, ``reps`` noisy copies are
    denoised (noise seeds ``seed + rep``) and the squared error is averaged
    over the copies and over the interior pixels, those whose window (and
    patches) need no mirroring; mirrored borders reuse noise samples and
    would bias the small sides.  ``oracle`` uses ``H = 2 L h**beta``;
    ``split`` uses the practical ``H = 0.4 sigma + 2`` and a fixed patch side
    (practical rule unless given); its margin also covers the patches.
    """
    if reps < 10:
        raise ValueError(f"need at least 10 repetitions, got {reps}")
    if len(set(sides)) < 2:
        raise ValueError("need at least two distinct sides")
    if variant not in ("oracle", "split"):
        raise ValueError(f"unknown variant {variant!r}")
    hc = HolderClass(beta, L)
    radii, mses = [], []
    for side in sides:
        f = holder_image(side, L, beta)
        k = rate_window_radius(sigma, hc, side)
        radii.append(k)
        if variant == "oracle":
            H = rate_H(hc, k, side)
            Y = np.stack([f + noise_field(f.shape, NoiseSpec(sigma, seed + r)) for r in range(reps)])
            err = _interior_mse(oracle_denoise(f, Y, k, H), f, k)
        else:
            ps = patch_side or practical_patch_side(sigma)
            p = DenoiseParams(k, (ps - 1) // 2, practical_H(sigma), sigma=float(sigma))

            def one(r):
                Y = f + noise_field(f.shape, NoiseSpec(sigma, seed + r))
                return _interior_mse(split_denoise(Y, p), f, k + p.patch_radius)

            with ThreadPoolExecutor(max_workers=max(1, workers)) as ex:
                err = float(np.mean(list(ex.map(one, range(reps)))))
        mses.append(err)
    slope = fit_slope([s * s for s in sides], mses)
    return RateResult(beta, list(sides), mses, slope, radii, variant)


def rate_rows(res: RateResult, L: float, sigma: float, reps: int):
    """Flat records of a rate check, one per side, for CSV output."""
    return [
        RateRow(res.variant, res.beta, L, sigma, side, side * side, k, reps, m, res.fitted_slope)
        for side, k, m in zip(res.sides, res.window_radii, res.mean_mse_per_side)
    ]


@dataclass
class RateRow:
    variant: str
    beta: float
    L: float
    sigma: float
    side: int
    n: int
    window_radius: int
    reps: int
    mean_mse: float
    fitted_slope: float


def similarity_concentration(
    sigma: float,
    L: float,
    side: int,
    patch_sides: Sequence[int],
    seeds: int = 20,
    seed: int = 0,
) -> List[float]:
    """Median over noise seeds of ``max_x |rho_hat**2(x) - rho**2(x)|``.

    The maximum runs over the theoretical search window around the grid
    centre of the ``beta = 1`` synthetic image, excluding the centre itself
    (there ``rho_hat**2 = -2 sigma**2`` whatever the patch).  Distances use
    the rectangular kernel.  One value per patch side.
    """
    hc = HolderClass(1.0, L)
    f = holder_image(side, L, 1.0)
    k = rate_window_radius(sigma, hc, side)
    x0 = (side // 2, side // 2)
    offsets = [(di, dj) for di in range(-k, k + 1) for dj in range(-k, k + 1) if (di, dj) != (0, 0)]
    noisy = [f + noise_field(f.shape, NoiseSpec(sigma, seed + s)) for s in range(seeds)]
    out = []
    for ps in patch_sides:
        if ps < 1 or ps % 2 == 0:
            raise ValueError(f"patch sides must be odd, got {ps}")
        worst = []
        for Y in noisy:
            errs = []
            for di, dj in offsets:
                x = (x0[0] + di, x0[1] + dj)
                est = estimated_similarity_sq(Y, x, x0, (ps - 1) // 2, RECT, sigma)
                errs.append(abs(est - true_similarity_sq(f, x, x0)))
            worst.append(max(errs))
        out.append(float(np.median(worst)))
    return out
