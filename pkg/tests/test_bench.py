import io
import math

import numpy as np
import pytest
from scipy import ndimage

from nlmeans.bench import (
    BenchRow,
    bench_oracle_sweep,
    bench_patch_sweep,
    bench_table2,
    csv_text,
    delta_psnr,
    fit_slope,
    format_table,
    holder_image,
    psnr_from_mse,
    rate_check,
    rate_rows,
    rate_window_radius,
    similarity_concentration,
    table_oracle_H,
    write_csv,
)
from nlmeans.metrics import psnr
from nlmeans.noise import NoiseSpec, add_gaussian_noise
from nlmeans.parameters import HolderClass


@pytest.fixture
def small(rng):
    return ndimage.gaussian_filter(rng.uniform(0, 255, size=(24, 24)), 2)


def test_oracle_sweep_rows_and_seeds(small):
    rows = bench_oracle_sweep(small, [10, 20], [3, 5], seed=7)
    assert [(r.sigma, r.window_side, r.seed) for r in rows] == [(10, 3, 7), (10, 5, 7), (20, 3, 8), (20, 5, 8)]
    assert all(r.H == table_oracle_H(r.sigma) and r.variant == "oracle" and r.wall_ms == 0 for r in rows)


def test_oracle_sweep_on_constant_image_is_box_mean():
    clean = np.full((16, 16), 100.0)
    rows = bench_oracle_sweep(clean, [20], [5], seed=3)
    noisy = add_gaussian_noise(clean, NoiseSpec(20, 3))
    box = ndimage.uniform_filter(noisy, 5, mode="mirror")
    assert rows[0].psnr_db == pytest.approx(psnr(clean, box), rel=1e-12)


@pytest.mark.parametrize("sides", [[4], [1], [2, 3]])
def test_sweeps_reject_bad_sides(small, sides):
    with pytest.raises(ValueError):
        bench_oracle_sweep(small, [10], sides)
    with pytest.raises(ValueError):
        bench_patch_sweep(small, 10, 5, 6.0, sides)


def test_patch_sweep_shares_one_noise_draw(small):
    rows = bench_patch_sweep(small, 20, 5, 10.0, [3, 5], seed=4)
    assert [r.patch_side for r in rows] == [3, 5]
    assert {r.seed for r in rows} == {4}
    assert all(r.kernel == "k0" and r.variant == "nlm" for r in rows)


def test_table2_pairs(small):
    rows = bench_table2({"a": small, "b": small[::-1]}, [20, 30], seed=0)
    assert [(r.image_id, r.sigma, r.variant) for r in rows] == [
        ("a", 20, "baseline"), ("a", 20, "nlm"), ("a", 30, "baseline"), ("a", 30, "nlm"),
        ("b", 20, "baseline"), ("b", 20, "nlm"), ("b", 30, "baseline"), ("b", 30, "nlm"),
    ]
    assert [r.seed for r in rows] == [0, 0, 1, 1, 2, 2, 3, 3]
    base, ours = rows[0], rows[1]
    assert (base.window_side, base.patch_side, ours.window_side, ours.patch_side) == (21, 9, 13, 21)
    assert base.H == ours.H == 10.0
    d = delta_psnr(rows)
    assert set(d) == {("a", 20), ("a", 30), ("b", 20), ("b", 30)}
    assert d[("a", 20)] == pytest.approx(ours.psnr_db - base.psnr_db)


def test_rows_psnr_consistent_with_mse(small):
    for r in bench_oracle_sweep(small, [10, 30], [3, 5, 7]) + bench_patch_sweep(small, 15, 5, 8.0, [3, 5]):
        assert r.psnr_db == pytest.approx(10 * math.log10(255**2 / r.mse), rel=1e-9)


def test_psnr_from_mse():
    assert psnr_from_mse(0.0) == math.inf
    assert psnr_from_mse(255.0**2) == 0.0


def test_csv_is_deterministic_and_lf_only(small):
    a = csv_text(bench_oracle_sweep(small, [10], [3, 5], seed=1))
    b = csv_text(bench_oracle_sweep(small, [10], [3, 5], seed=1))
    assert a == b
    assert "\r" not in a
    lines = a.splitlines()
    assert lines[0] == "image_id,side,sigma,window_side,patch_side,H,kernel,variant,seed,mse,psnr_db,wall_ms"
    assert len(lines) == 3


def test_csv_floats_round_trip():
    row = BenchRow("x", 8, 20.0, 13, 21, 10.0, "k0", "nlm", 0, 1 / 3, psnr_from_mse(1 / 3))
    buf = io.StringIO()
    write_csv([row], buf)
    fields = buf.getvalue().splitlines()[1].split(",")
    assert float(fields[9]) == 1 / 3
    assert write_csv([], io.StringIO()) is None


def test_timing_fills_wall_ms(small):
    rows = bench_oracle_sweep(small, [10], [3], timing=True)
    assert rows[0].wall_ms >= 0


def test_format_table(small):
    text = format_table(bench_oracle_sweep(small, [10], [3]))
    assert text.splitlines()[1].split()[:3] == ["image", "24", "10"]


# -- synthetic images and rates ---------------------------------------------------------

@pytest.mark.parametrize("side,L", [(64, 15.0), (128, 300.0), (256, 2000.0)])
def test_holder_image_lipschitz_constant(side, L):
    f = holder_image(side, L, 1.0)
    assert f.min() >= 0 and f.max() <= 255
    # the largest sup-norm slope between grid neighbours approaches L from below
    step = 1.0 / side
    slopes = np.abs(np.diff(f, axis=0)).max() / step
    diag = np.abs(f[1:, 1:] - f[:-1, :-1]).max() / step
    assert max(slopes, diag) <= L * (1 + 1e-12)
    assert max(slopes, diag) >= 0.9 * L


def test_holder_image_fractional_beta():
    f = holder_image(33, 40.0, 0.5)
    u = np.arange(1, 34) / 33
    i, j = 3, 20
    assert abs(f[16, i] - f[16, j]) <= 40.0 * abs(u[i] - u[j]) ** 0.5 + 1e-9
    with pytest.raises(ValueError):
        holder_image(8, 1.0, 1.5)


def test_fit_slope():
    ns = np.array([10.0, 100.0, 1000.0])
    assert fit_slope(ns, 3 * ns**-0.5) == pytest.approx(-0.5)
    with pytest.raises(ValueError):
        fit_slope([5, 5], [1, 2])


def test_window_radius_rule():
    hc = HolderClass(1.0, 15.0)
    assert [rate_window_radius(30, hc, s) for s in (64, 128, 256, 512)] == [8, 11, 16, 23]
    assert rate_window_radius(0, hc, 64) == 1


def test_rate_check_argument_errors():
    with pytest.raises(ValueError):
        rate_check(1.0, 15, 30, [64], reps=10)
    with pytest.raises(ValueError):
        rate_check(1.0, 15, 30, [64, 64], reps=10)
    with pytest.raises(ValueError):
        rate_check(1.0, 15, 30, [32, 64], reps=5)
    with pytest.raises(ValueError):
        rate_check(1.0, 15, 30, [32, 64], reps=10, variant="bm3d")


def test_noise_free_rate_is_steeper():
    # without noise only the bias of a one-pixel window is left, which falls faster than n^(-1/2)
    res = rate_check(1.0, 400.0, 0.0, [32, 64, 128], reps=10)
    assert res.fitted_slope < -0.5
    rows = rate_rows(res, 400.0, 0.0, 10)
    assert [r.side for r in rows] == [32, 64, 128]
    assert rows[0].n == 1024 and rows[0].fitted_slope == res.fitted_slope


def test_rate_check_is_deterministic():
    a = rate_check(1.0, 15.0, 30.0, [32, 48], reps=10, seed=3)
    b = rate_check(1.0, 15.0, 30.0, [32, 48], reps=10, seed=3)
    assert a == b


def test_concentration_shrinks_with_patch():
    med = similarity_concentration(30.0, 15.0, 64, [3, 21], seeds=5)
    assert med[1] < med[0]
