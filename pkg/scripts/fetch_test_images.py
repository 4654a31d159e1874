"""Download grayscale test images and store them as 8-bit PGM files.

The standard 512x512 "Lena" and "ascent" images are taken from the
``scipy/misc`` data files of the scipy 0.16.1 source distribution on PyPI;
"camera" comes from the locally installed scikit-image, when present.

    python scripts/fetch_test_images.py [outdir] [--sdist scipy-0.16.1.tar.gz]

``outdir`` defaults to ``test_images/``.  ``--sdist`` reads an already
downloaded tarball instead of fetching it.
"""

import argparse
import io
import pickle
import sys
import tarfile
import urllib.request
from pathlib import Path

import numpy as np

SCIPY_SDIST = (
    "https://files.pythonhosted.org/packages/7b/e1/"
    "ecc1820874c396a094e6df30d4d3aa8119d4987c5ff0b9caec73db362849/scipy-0.16.1.tar.gz"
)
MEMBERS = {"lena": "scipy-0.16.1/scipy/misc/lena.dat", "ascent": "scipy-0.16.1/scipy/misc/ascent.dat"}


def write_pgm(path, arr):
    arr = np.asarray(arr, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (arr.shape[1], arr.shape[0]) + arr.tobytes())


def _fetch(url, tries=3):
    for attempt in range(tries):
        try:
            with urllib.request.urlopen(url, timeout=300) as resp:
                return resp.read()
        except OSError as exc:
            print(f"attempt {attempt + 1} failed: {exc}")
    raise SystemExit(f"could not download {url}")


def main(argv):
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir", nargs="?", default="test_images")
    ap.add_argument("--sdist", help="local copy of the scipy 0.16.1 sdist")
    args = ap.parse_args(argv[1:])
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    missing = {k: v for k, v in MEMBERS.items() if not (out / f"{k}.pgm").exists()}
    if missing:
        if args.sdist:
            blob = Path(args.sdist).read_bytes()
        else:
            print(f"downloading {SCIPY_SDIST}")
            blob = _fetch(SCIPY_SDIST)
        with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
            for name, member in missing.items():
                data = pickle.load(tar.extractfile(member), encoding="latin1")
                write_pgm(out / f"{name}.pgm", np.array(data))
                print(f"wrote {out / name}.pgm")
    try:
        from skimage import data
    except ImportError:
        pass
    else:
        if not (out / "camera.pgm").exists():
            write_pgm(out / "camera.pgm", data.camera())
            print(f"wrote {out / 'camera'}.pgm")


if __name__ == "__main__":
    main(sys.argv)
