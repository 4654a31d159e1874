"""Command-line interface: noise injection, denoising and the benchmark sweeps.

Run ``nlmeans --help`` (or ``python -m nlmeans --help``) for the subcommands.
Every failure is reported as one line on stderr with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import List, Optional

from . import bench
from .image import FormatError, load_pgm, save_pgm
from .kernels import KernelSpec
from .metrics import psnr
from .nlm import DenoiseParams, nlm_denoise, split_denoise
from .noise import NoiseSpec, add_gaussian_noise
from .oracle import oracle_denoise
from .parameters import practical_H, practical_params

PROG = "nlmeans"


class CliError(Exception):
    """A user-facing error; reported without a traceback."""


def _int_list(text: str) -> List[int]:
    """``"3,5,7"`` or an inclusive odd range ``"3:21"`` (step 2)."""
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
            return list(range(lo, hi + 1, 2))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 3,5,7 or 3:21, got {text!r}") from None


def _float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers like 10,20,30, got {text!r}") from None


def _auto_or(kind):
    def parse(text):
        if text == "auto":
            return "auto"
        try:
            return kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None
    return parse


def _kernel(text):
    try:
        return KernelSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path):
    if not os.path.isfile(path):
        raise CliError(f"no such file: {path}")
    try:
        return load_pgm(path)
    except FormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _image_id(path):
    return os.path.splitext(os.path.basename(path))[0]


def _emit_rows(rows, args):
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            bench.write_csv(rows, fh)
    else:
        print(bench.format_table(rows))


# -- subcommands -------------------------------------------------------------

def cmd_add_noise(args):
    img = _load(args.input)
    save_pgm(args.output, add_gaussian_noise(img, NoiseSpec(args.sigma, args.seed)))
    return 0


def resolve_params(sigma, window="auto", patch="auto", H="auto", kernel=None, variant="nlm") -> DenoiseParams:
    """Fill every ``"auto"`` field from the practical rules for ``sigma``."""
    if "auto" in (window, patch, H):
        if not sigma > 0:
            raise CliError("'auto' parameters need --sigma > 0")
        auto = practical_params(sigma)
    ws = auto.window_side if window == "auto" else window
    ps = auto.patch_side if patch == "auto" else patch
    h = auto.H if H == "auto" else H
    kw = {"sigma": float(sigma)}
    if kernel is not None:
        kw["kernel"] = kernel
    try:
        p = DenoiseParams.from_sides(ws, ps, h, **kw)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if variant == "split" and p.patch_radius < 1:
        raise CliError("the split variant needs a patch side of at least 3")
    return p


def cmd_denoise(args):
    img = _load(args.input)
    p = resolve_params(args.sigma, args.window, args.patch, args.H, args.kernel, args.variant)
    t0 = time.perf_counter()
    out = (split_denoise if args.variant == "split" else nlm_denoise)(img, p)
    elapsed = time.perf_counter() - t0
    save_pgm(args.output, out)
    msg = (f"variant={args.variant} window={p.window_side} patch={p.patch_side} "
           f"H={p.H:g} kernel={p.kernel} time={elapsed:.2f}s")
    if args.clean:
        clean = _load(args.clean)
        if clean.shape != out.shape:
            raise CliError("clean and noisy images differ in size")
        msg += f" psnr={psnr(clean, out):.2f}"
    print(msg)
    return 0


def cmd_oracle(args):
    clean = _load(args.clean)
    noisy = _load(args.noisy)
    if clean.shape != noisy.shape:
        raise CliError("clean and noisy images differ in size")
    if args.window < 1 or args.window % 2 == 0:
        raise CliError(f"window side must be a positive odd integer, got {args.window}")
    out = oracle_denoise(clean, noisy, (args.window - 1) // 2, args.H)
    save_pgm(args.output, out)
    print(f"window={args.window} H={args.H:g} psnr={psnr(clean, out):.2f}")
    return 0


def cmd_params(args):
    p = resolve_params(args.sigma)
    print(f"H={p.H:g}")
    print(f"window={p.window_side}")
    print(f"patch={p.patch_side}")
    print(f"kernel={p.kernel}")
    print(f"sigma={p.sigma:g}")
    return 0


def _oracle_H_rule(text):
    if text == "table":
        return bench.table_oracle_H
    if text == "practical":
        return practical_H
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'table', 'practical' or a number, got {text!r}") from None
    return lambda sigma: value


def cmd_bench(args):
    if args.sweep == "oracle":
        clean = _load(args.clean)
        rows = bench.bench_oracle_sweep(clean, args.sigmas, args.windows, seed=args.seed, H=args.H,
                                        image_id=_image_id(args.clean), timing=args.timing)
    elif args.sweep == "patch":
        clean = _load(args.clean)
        H = practical_H(args.sigma) if args.H == "auto" else args.H
        rows = bench.bench_patch_sweep(clean, args.sigma, args.window, H, args.patches, seed=args.seed,
                                       kernel=args.kernel, image_id=_image_id(args.clean), timing=args.timing)
    else:
        images = {}
        for path in args.clean:
            key = _image_id(path)
            if key in images:
                raise CliError(f"duplicate image id {key!r}")
            images[key] = _load(path)
        rows = bench.bench_table2(images, args.sigmas, seed=args.seed, timing=args.timing)
    _emit_rows(rows, args)
    if args.sweep == "table2":
        for (img, s), d in bench.delta_psnr(rows).items():
            print(f"delta_psnr image={img} sigma={s:g} {d:+.2f}")
    return 0


def cmd_rate_check(args):
    res = bench.rate_check(args.beta, args.L, args.sigma, args.sides, reps=args.reps, variant=args.variant,
                           seed=args.seed, patch_side=args.patch, workers=args.workers)
    rows = bench.rate_rows(res, args.L, args.sigma, args.reps)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            bench.write_csv(rows, fh)
    for side, k, m in zip(res.sides, res.window_radii, res.mean_mse_per_side):
        print(f"side={side} radius={k} mse={m:.6g}")
    print(f"slope={res.fitted_slope:.4f} expected={-2 * args.beta / (2 * args.beta + 2):.4f}")
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog=PROG, description="Non-local means denoising and benchmarks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add-noise", help="add seeded Gaussian noise to a PGM image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_add_noise)

    p = sub.add_parser("denoise", help="denoise a PGM image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--sigma", type=float, required=True, help="noise level (drives the 'auto' rules)")
    p.add_argument("--window", type=_auto_or(int), default="auto", help="search window side or 'auto'")
    p.add_argument("--patch", type=_auto_or(int), default="auto", help="patch side or 'auto'")
    p.add_argument("--H", type=_auto_or(float), default="auto", help="filtering bandwidth or 'auto'")
    p.add_argument("--kernel", type=_kernel, default=None, help="rect, k0 (default) or gauss:<h_g>")
    p.add_argument("--variant", choices=("nlm", "split"), default="nlm")
    p.add_argument("--clean", help="optional clean image; prints the PSNR of the result")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("oracle", help="oracle filter with weights from the clean image")
    p.add_argument("--clean", required=True)
    p.add_argument("--noisy", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--H", type=float, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("params", help="print the practical parameters for a noise level")
    p.add_argument("--sigma", type=float, required=True)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("bench", help="benchmark sweeps (CSV output)")
    bsub = p.add_subparsers(dest="sweep", required=True)

    def common(b):
        b.add_argument("--csv", help="write rows here instead of printing a table")
        b.add_argument("--seed", type=int, default=0)
        b.add_argument("--timing", action="store_true", help="record wall_ms (makes the CSV nondeterministic)")
        b.set_defaults(func=cmd_bench)

    b = bsub.add_parser("oracle", help="oracle PSNR over window sides")
    b.add_argument("--clean", required=True)
    b.add_argument("--sigmas", type=_float_list, default=[10.0, 20.0, 30.0])
    b.add_argument("--windows", type=_int_list, default=list(range(9, 22, 2)))
    b.add_argument("--H", type=_oracle_H_rule, default=bench.table_oracle_H,
                   help="'table' (0.04 sigma + 2, default), 'practical' (0.4 sigma + 2) or a number")
    common(b)

    b = bsub.add_parser("patch", help="NLM PSNR over patch sides")
    b.add_argument("--clean", required=True)
    b.add_argument("--sigma", type=float, required=True)
    b.add_argument("--window", type=int, default=13)
    b.add_argument("--H", type=_auto_or(float), default="auto")
    b.add_argument("--patches", type=_int_list, default=list(range(3, 22, 2)))
    b.add_argument("--kernel", type=_kernel, default=KernelSpec.parse("k0"))
    common(b)

    b = bsub.add_parser("table2", help="practical rules against the 21x21/9x9 baseline")
    b.add_argument("--clean", required=True, nargs="+")
    b.add_argument("--sigmas", type=_float_list, default=[10.0, 20.0, 30.0])
    common(b)

    p = sub.add_parser("rate-check", help="Monte Carlo convergence rate on synthetic images")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--L", type=float, default=15.0)
    p.add_argument("--sigma", type=float, default=30.0)
    p.add_argument("--sides", type=_int_list, default=[64, 128, 256, 512])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--variant", choices=("oracle", "split"), default="oracle")
    p.add_argument("--patch", type=int, default=None, help="patch side for the split variant")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_rate_check)
    return ap


def cli_main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
    except (ValueError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
    return 1


def main() -> None:
    sys.exit(cli_main())
