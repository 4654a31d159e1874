import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from nlmeans.image import (
    FormatError,
    Parity,
    as_image,
    checkerboard_split,
    extract_patch,
    mirror_pad,
    parity_mask,
    pixel,
    quantize,
    read_pgm,
    reflect_index,
    write_pgm,
)


def brute_mirror(side, pad):
    """Indices of a mirrored line built by hand: ... 2 1 | 0 1 ... s-1 | s-2 s-3 ..."""
    line = list(range(side))
    left = [line[k] for k in range(pad, 0, -1)]
    right = [line[side - 1 - k] for k in range(1, pad + 1)]
    return left + line + right


# -- reflect_index -------------------------------------------------------------

def test_reflect_in_range_identity():
    assert reflect_index(3, 8) == 3


def test_reflect_negative():
    assert reflect_index(-1, 8) == 1


def test_reflect_past_end():
    assert reflect_index(9, 8) == 5


@given(st.integers(2, 40), st.data())
def test_reflect_matches_hand_built_mirror(side, data):
    i = data.draw(st.integers(-(side - 1), 2 * side - 2))
    ext = brute_mirror(side, side - 1)
    assert reflect_index(i, side) == ext[i + side - 1]


@given(st.integers(2, 40), st.data())
def test_reflect_matches_numpy_reflect_padding(side, data):
    i = data.draw(st.integers(-2 * side + 1, 2 * side - 1))
    ext = np.pad(np.arange(side), 2 * side, mode="reflect")
    assert reflect_index(i, side) == ext[i + 2 * side]


def test_reflect_folds_twice_on_tiny_grids():
    assert reflect_index(-2, 2) == 0
    assert reflect_index(3, 2) == 1


@given(st.integers(2, 40), st.data())
def test_reflect_lands_in_range_and_is_idempotent(side, data):
    i = data.draw(st.integers(-2 * side + 1, 2 * side - 1))
    j = reflect_index(i, side)
    assert 0 <= j < side
    assert reflect_index(j, side) == j


@pytest.mark.parametrize("i,side", [(16, 8), (-16, 8), (0, 1)])
def test_reflect_out_of_contract(i, side):
    with pytest.raises(ValueError):
        reflect_index(i, side)


def test_mirror_pad_agrees_with_reflect_index(rng):
    img = rng.normal(size=(6, 6))
    padded = mirror_pad(img, 4)
    for r in range(-4, 10):
        for c in range(-4, 10):
            assert padded[r + 4, c + 4] == pixel(img, r, c)


def test_mirror_pad_leaves_stack_axis_alone(rng):
    stack = rng.normal(size=(3, 5, 5))
    padded = mirror_pad(stack, 2)
    assert padded.shape == (3, 9, 9)
    for k in range(3):
        np.testing.assert_array_equal(padded[k], mirror_pad(stack[k], 2))


# -- extract_patch ---------------------------------------------------------------

def test_patch_of_constant_image():
    img = np.full((5, 5), 7.0)
    np.testing.assert_array_equal(extract_patch(img, (2, 3), 1), np.full(9, 7.0))


def test_patch_radius_zero_is_the_pixel(rng):
    img = rng.normal(size=(5, 5))
    assert extract_patch(img, (1, 4), 0).tolist() == [img[1, 4]]


def test_corner_patch_against_premirrored_array():
    img = np.arange(16.0).reshape(4, 4)
    idx = brute_mirror(4, 1)
    padded = img[np.ix_(idx, idx)]
    expected = padded[0:3, 0:3].ravel()
    np.testing.assert_array_equal(extract_patch(img, (0, 0), 1), expected)
    # written out: rows 1,0,1 and cols 1,0,1 of the original
    assert expected.tolist() == [5, 4, 5, 1, 0, 1, 5, 4, 5]


def test_patch_negative_radius():
    with pytest.raises(ValueError):
        extract_patch(np.zeros((3, 3)), (1, 1), -1)


@given(st.integers(1, 3), st.data())
def test_interior_patch_is_raw_subarray(radius, data):
    side = data.draw(st.integers(2 * radius + 1, 12))
    img = data.draw(arrays(np.float64, (side, side), elements=st.floats(-1e3, 1e3)))
    r = data.draw(st.integers(radius, side - 1 - radius))
    c = data.draw(st.integers(radius, side - 1 - radius))
    sub = img[r - radius:r + radius + 1, c - radius:c + radius + 1].ravel()
    np.testing.assert_array_equal(extract_patch(img, (r, c), radius), sub)


# -- checkerboard ------------------------------------------------------------------

def test_centre_is_prime():
    assert checkerboard_split((3, 4), (3, 4)) is Parity.PRIME


def test_unit_offset_is_double_prime():
    assert checkerboard_split((3, 4), (4, 4)) is Parity.DOUBLE_PRIME


def test_diagonal_offset_is_prime():
    assert checkerboard_split((3, 4), (4, 5)) is Parity.PRIME


@given(st.integers(0, 6), st.integers(-50, 50), st.integers(-50, 50))
def test_parity_partitions_the_window(radius, r0, c0):
    prime = parity_mask(radius, Parity.PRIME)
    dprime = parity_mask(radius, Parity.DOUBLE_PRIME)
    assert not np.any(prime & dprime)
    assert np.all(prime | dprime)
    assert prime[radius, radius]
    d = range(-radius, radius + 1)
    for i, di in enumerate(d):
        for j, dj in enumerate(d):
            tag = checkerboard_split((r0, c0), (r0 + di, c0 + dj))
            assert (tag is Parity.PRIME) == prime[i, j]


# -- PGM ----------------------------------------------------------------------------

def test_decode_p5():
    data = b"P5\n2 2\n255\n" + bytes([0, 10, 20, 255])
    np.testing.assert_array_equal(read_pgm(data), [[0, 10], [20, 255]])


def test_decode_p2_with_comments():
    data = b"P2\n# made by hand\n2 2\n# max\n255\n0 10\n20 255\n"
    np.testing.assert_array_equal(read_pgm(data), [[0, 10], [20, 255]])


def test_write_clamps_and_rounds_half_up():
    img = np.array([[255.7, -3.0], [1.5, 2.49]])
    raster = write_pgm(img)[-4:]
    assert list(raster) == [255, 0, 2, 2]


def test_quantize_half_up():
    assert quantize(np.array([[0.5, 1.5], [2.5, 253.5]])).tolist() == [[1, 2], [3, 254]]


def test_header_layout():
    assert write_pgm(np.zeros((3, 3))).startswith(b"P5\n3 3\n255\n")


@pytest.mark.parametrize("data", [
    b"P6\n2 2\n255\n" + bytes(12),
    b"P5\n2 3\n255\n" + bytes(6),
    b"P5\n2 2\n65535\n" + bytes(8),
    b"P5\n2 2\n255\n" + bytes(3),
    b"P5\n2 2\n",
    b"P5\nx 2\n255\n" + bytes(4),
    b"P2\n2 2\n255\n1 2 3\n",
    b"P2\n2 2\n255\n1 2 3 999\n",
])
def test_malformed_pgm(data):
    with pytest.raises(FormatError):
        read_pgm(data)


@given(st.integers(1, 16), st.data())
def test_pgm_round_trip(side, data):
    img = data.draw(arrays(np.uint8, (side, side))).astype(np.float64)
    encoded = write_pgm(img)
    np.testing.assert_array_equal(read_pgm(encoded), img)
    assert write_pgm(read_pgm(encoded)) == encoded


def test_as_image_rejects_bad_grids():
    with pytest.raises(ValueError):
        as_image(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        as_image(np.array([[0.0, np.nan], [0.0, 0.0]]))
