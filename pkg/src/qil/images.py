"""Square power-of-two grayscale and binary images with PGM (P2/P5) I/O."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


def _side_exponent(shape) -> int:
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"image must be square, got shape {shape}")
    side = shape[0]
    n = int(round(math.log2(side))) if side > 0 else -1
    if n < 0 or 2**n != side:
        raise ValueError(f"image side {side} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class GrayImage:
    """2^n x 2^n grid of q-bit gray values."""

    pixels: np.ndarray
    q: int

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.int64)
        _side_exponent(arr.shape)
        if self.q < 1:
            raise ValueError("bit depth q must be at least 1")
        if arr.min() < 0 or arr.max() > 2**self.q - 1:
            raise ValueError(f"pixels out of range [0, {2**self.q - 1}]")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def n(self) -> int:
        return _side_exponent(self.pixels.shape)

    @property
    def side(self) -> int:
        return self.pixels.shape[0]

    @property
    def max_value(self) -> int:
        return 2**self.q - 1


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """2^n x 2^n grid of bits."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.array(self.bits, dtype=np.int64)
        _side_exponent(arr.shape)
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("binary image values must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def n(self) -> int:
        return _side_exponent(self.bits.shape)

    def to_gray(self) -> GrayImage:
        return GrayImage(pixels=self.bits, q=1)


def bit_plane(img: GrayImage, plane: int) -> BinaryImage:
    """Extract one bit plane; plane q-1 is the most significant bit."""
    if not 0 <= plane <= img.q - 1:
        raise ValueError(f"plane must lie in [0, {img.q - 1}], got {plane}")
    return BinaryImage(bits=(img.pixels >> plane) & 1)


def add_classical_noise(img: GrayImage, magnitude: float, seed: int) -> GrayImage:
    """Seeded zero-mean gaussian pixel noise with std = magnitude * (2^q - 1)."""
    if magnitude == 0.0:
        return img
    rng = np.random.default_rng(seed)
    jitter = rng.normal(0.0, magnitude * img.max_value, size=img.pixels.shape)
    noisy = np.clip(np.rint(img.pixels + jitter), 0, img.max_value).astype(np.int64)
    return GrayImage(pixels=noisy, q=img.q)


# ---------------------------------------------------------------------------
# PGM


def _bit_depth_for(maxval: int) -> int:
    q = max(1, int(math.ceil(math.log2(maxval + 1))))
    return q


def read_pgm(path) -> GrayImage:
    """Read a plain (P2) or binary (P5) PGM file; bit depth comes from maxval."""
    data = Path(path).read_bytes()
    tokens, pos = [], 0
    # header: magic, width, height, maxval; '#' starts a comment
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"truncated PGM header in {path}")
        tokens.append(data[start:pos])
    magic = tokens[0].decode("ascii")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if magic == "P2":
        values = np.array(data[pos:].split(), dtype=np.int64)
    elif magic == "P5":
        pos += 1  # single whitespace byte after maxval
        raw = data[pos:]
        if maxval < 256:
            values = np.frombuffer(raw[: width * height], dtype=np.uint8).astype(np.int64)
        else:
            values = np.frombuffer(raw[: 2 * width * height], dtype=">u2").astype(np.int64)
    else:
        raise ValueError(f"unsupported PGM magic {magic!r} in {path}")
    if values.size != width * height:
        raise ValueError(f"PGM payload has {values.size} samples, expected {width * height}")
    return GrayImage(pixels=values.reshape(height, width), q=_bit_depth_for(maxval))


def write_pgm(img: GrayImage, path, binary: bool = True) -> None:
    """Write a GrayImage as P5 (default) or P2 with maxval 2^q - 1."""
    header = f"{'P5' if binary else 'P2'}\n{img.side} {img.side}\n{img.max_value}\n"
    path = Path(path)
    if binary:
        if img.max_value < 256:
            payload = img.pixels.astype(np.uint8).tobytes()
        else:
            payload = img.pixels.astype(">u2").tobytes()
        path.write_bytes(header.encode("ascii") + payload)
    else:
        rows = "\n".join(" ".join(str(v) for v in row) for row in img.pixels)
        path.write_text(header + rows + "\n")


def write_binary_pgm(bimg: BinaryImage, path) -> None:
    """Write a BinaryImage as an 8-bit PGM using values {0, 255}."""
    write_pgm(GrayImage(pixels=bimg.bits * 255, q=8), path)
