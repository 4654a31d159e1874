"""Pixel grids, mirrored patch access, checkerboard parity and PGM I/O.

Images are plain square 2-D ``float64`` numpy arrays.  Coordinates are
integer ``(row, col)`` pairs; outside the grid the image is extended by
reflection about the border pixel (index ``-k`` maps to ``k``, the border
pixel itself is not repeated).
"""

from __future__ import annotations

import enum
import re

import numpy as np


class FormatError(ValueError):
    """Raised for malformed or unsupported PGM data."""


class Parity(enum.Enum):
    PRIME = "prime"
    DOUBLE_PRIME = "double_prime"


def as_image(values) -> np.ndarray:
    """Validate ``values`` as a square, finite grid and return a float64 copy."""
    img = np.array(values, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] != img.shape[1] or img.shape[0] < 1:
        raise ValueError(f"expected a square 2-D grid, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return img


def reflect_index(i: int, side: int) -> int:
    """Map ``i`` onto ``[0, side)`` by reflection about the border pixels.

    ``-k`` maps to ``k`` and ``side - 1 + k`` to ``side - 1 - k``.  Indices
    that a single reflection would throw past the opposite border (possible
    on tiny grids) keep folding, with period ``2 (side - 1)``.
    """
    if side < 2:
        raise ValueError("side must be at least 2")
    if abs(i) >= 2 * side:
        raise ValueError(f"index {i} is too far outside a grid of side {side}")
    i %= 2 * (side - 1)
    return 2 * (side - 1) - i if i >= side else i


def mirror_pad(img: np.ndarray, pad: int) -> np.ndarray:
    """Extend ``img`` by ``pad`` pixels on each side with the reflection convention.

    Agrees with :func:`reflect_index` wherever that is defined; larger pads
    fold repeatedly.  Leading axes of a stack of images are left alone.
    """
    if pad == 0:
        return img
    widths = [(0, 0)] * (img.ndim - 2) + [(pad, pad)] * 2
    return np.pad(img, widths, mode="reflect")


def pixel(img: np.ndarray, row: int, col: int) -> float:
    """Value of the mirrored extension at ``(row, col)``, which may lie off-grid."""
    side = img.shape[0]
    return float(img[reflect_index(row, side), reflect_index(col, side)])


def extract_patch(img: np.ndarray, center, radius: int) -> np.ndarray:
    """Return the ``(2r+1)**2`` mirrored values around ``center`` in row-major order.

    ``center`` may itself lie in the mirrored extension (window pixels near
    the border do), as long as every patch coordinate needs one reflection at
    most.
    """
    if radius < 0:
        raise ValueError("patch radius must be non-negative")
    side = img.shape[0]
    r0, c0 = center
    offsets = np.arange(-radius, radius + 1)
    rows = [reflect_index(r0 + d, side) for d in offsets]
    cols = [reflect_index(c0 + d, side) for d in offsets]
    return img[np.ix_(rows, cols)].ravel()


def checkerboard_split(x0, x) -> Parity:
    """PRIME when the offset from ``x0`` to ``x`` has an even coordinate sum."""
    if ((x[0] - x0[0]) + (x[1] - x0[1])) % 2 == 0:
        return Parity.PRIME
    return Parity.DOUBLE_PRIME


def parity_mask(radius: int, parity: Parity) -> np.ndarray:
    """Boolean ``(2r+1, 2r+1)`` mask of the offsets belonging to ``parity``."""
    d = np.arange(-radius, radius + 1)
    even = (d[:, None] + d[None, :]) % 2 == 0
    return even if parity is Parity.PRIME else ~even


# -- PGM -------------------------------------------------------------------

_TOKEN = re.compile(rb"#[^\n\r]*|\S+")


def _header_tokens(data: bytes, count: int):
    """Return the first ``count`` header tokens and the offset after the last one."""
    tokens = []
    pos = 0
    for m in _TOKEN.finditer(data):
        if m.group().startswith(b"#"):
            continue
        tokens.append(m.group())
        pos = m.end()
        if len(tokens) == count:
            break
    if len(tokens) < count:
        raise FormatError("truncated PGM header")
    return tokens, pos


def read_pgm(data: bytes) -> np.ndarray:
    """Decode a square 8-bit P5 (binary) or P2 (ASCII) PGM into a float grid."""
    if data[:2] not in (b"P5", b"P2"):
        raise FormatError("not a P5/P2 PGM file")
    tokens, end = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise FormatError(f"bad PGM header: {exc}") from None
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval}")
    if width != height or width < 1:
        raise FormatError(f"image must be square, got {width}x{height}")
    n = width * height
    if tokens[0] == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        raster = data[end + 1:end + 1 + n]
        if len(raster) != n:
            raise FormatError("truncated P5 raster")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        # comments are legal only in the header, but tolerate them here too
        body = re.sub(rb"#[^\n\r]*", b"", data[end:])
        try:
            values = np.array(body.split(), dtype=np.int64)
        except ValueError:
            raise FormatError("non-numeric P2 raster") from None
        if values.size != n:
            raise FormatError(f"expected {n} samples, found {values.size}")
        if values.min(initial=0) < 0 or values.max(initial=0) > 255:
            raise FormatError("sample outside 0..255")
    return values.reshape(height, width).astype(np.float64)


def quantize(img: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half up to 8-bit integers."""
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)


def write_pgm(img: np.ndarray) -> bytes:
    img = as_image(img)
    side = img.shape[0]
    return b"P5\n%d %d\n255\n" % (side, side) + quantize(img).tobytes()


def load_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, img: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))
