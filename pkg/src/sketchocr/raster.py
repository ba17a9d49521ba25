"""Binary raster substrate: images, Netpbm codecs, binarization, centroid, geometry.

Pixel convention: ``True`` is Black (foreground, ink), ``False`` is White.
This follows PBM, where a stored ``1`` means black, which is the opposite of
the usual "1 = bright" display intuition. Coordinates are ``x = column`` and
``y = row`` with the origin at the top-left pixel.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .exceptions import DimensionError, EmptyForegroundError, FormatError

__all__ = [
    "BinaryImage",
    "GrayImage",
    "Centroid",
    "load_pnm",
    "save_pnm",
    "save_pgm",
    "read_image",
    "binarize",
    "centroid",
    "normalize",
    "translate",
    "round_half_away",
]


def round_half_away(value) -> int:
    """Round to the nearest integer, ties away from zero.

    Works exactly on ``int``, ``Fraction`` and ``float`` inputs.
    """
    q = Fraction(value)
    magnitude = (abs(q) + Fraction(1, 2)).__floor__()
    return int(magnitude) if q >= 0 else -int(magnitude)


def _frozen(array: np.ndarray, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Immutable black/white raster.

    Parameters
    ----------
    pixels : array-like of bool, shape (height, width)
        ``True`` marks a Black pixel.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionError(f"BinaryImage needs a non-empty 2-D array, got shape {arr.shape}")
        if arr.dtype != bool:
            if not np.isin(arr, (0, 1)).all():
                raise ValueError("BinaryImage pixels must be 0/1 or boolean")
        object.__setattr__(self, "pixels", _frozen(arr, bool))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        """``(height, width)``, numpy order."""
        return self.pixels.shape

    @property
    def extent(self) -> tuple[int, int]:
        """``(width, height)``."""
        return (self.width, self.height)

    @property
    def black_count(self) -> int:
        return int(self.pixels.sum())

    def is_black(self, x: int, y: int) -> bool:
        return bool(self.pixels[y, x])

    @classmethod
    def blank(cls, width: int, height: int) -> "BinaryImage":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def from_rows(cls, rows: Sequence[str], black: str = "#") -> "BinaryImage":
        """Build an image from text rows; ``black`` characters are ink, anything else is paper."""
        if not rows or len({len(r) for r in rows}) != 1:
            raise DimensionError("rows must be non-empty and of equal length")
        return cls(np.array([[ch in black for ch in row] for row in rows], dtype=bool))

    @classmethod
    def from_points(cls, width: int, height: int, points: Iterable[tuple[int, int]]) -> "BinaryImage":
        arr = np.zeros((height, width), dtype=bool)
        for x, y in points:
            arr[y, x] = True
        return cls(arr)

    def to_rows(self, black: str = "#", white: str = ".") -> list[str]:
        return ["".join(black if v else white for v in row) for row in self.pixels]

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self):
        return hash((self.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"BinaryImage({self.width}x{self.height}, black={self.black_count})"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable 8-bit grayscale raster, samples in 0..255 (0 = black)."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionError(f"GrayImage needs a non-empty 2-D array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("GrayImage samples must lie in [0, 255]")
        object.__setattr__(self, "samples", _frozen(arr, np.uint8))

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.samples.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.samples, other.samples))

    def __hash__(self):
        return hash((self.shape, self.samples.tobytes()))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True)
class Centroid:
    """Center of gravity of the Black pixels, held as exact fractions."""

    cx: Fraction
    cy: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cx", Fraction(self.cx))
        object.__setattr__(self, "cy", Fraction(self.cy))

    def as_floats(self) -> tuple[float, float]:
        return float(self.cx), float(self.cy)

    def __iter__(self):
        return iter((self.cx, self.cy))


# --------------------------------------------------------------------------
# Netpbm codecs
# --------------------------------------------------------------------------

_WS = b" \t\r\n\v\f"


class _Reader:
    """Token reader over a PNM byte stream that skips ``#`` comments."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in _WS:
                self.pos += 1
            elif c == ord("#"):
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                break

    def token(self, what: str) -> bytes:
        self._skip()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos] not in _WS and self.data[self.pos] != ord("#"):
            self.pos += 1
        if start == self.pos:
            raise FormatError(f"truncated PNM stream: missing {what}")
        return self.data[start:self.pos]

    def integer(self, what: str) -> int:
        tok = self.token(what)
        if not tok.isdigit():
            raise FormatError(f"invalid {what}: {tok!r}")
        return int(tok)

    def bit(self) -> int:
        # plain PBM allows samples without separating whitespace
        self._skip()
        if self.pos >= len(self.data):
            raise FormatError("truncated PBM raster")
        c = self.data[self.pos]
        if c not in b"01":
            raise FormatError(f"invalid PBM sample {bytes([c])!r}")
        self.pos += 1
        return c - ord("0")

    def raster(self) -> bytes:
        # exactly one whitespace byte separates the header from binary data
        if self.pos >= len(self.data) or self.data[self.pos] not in _WS:
            raise FormatError("missing whitespace before binary raster")
        return self.data[self.pos + 1:]


def _dimensions(reader: _Reader) -> tuple[int, int]:
    width = reader.integer("width")
    height = reader.integer("height")
    if width <= 0 or height <= 0:
        raise FormatError(f"invalid dimensions {width}x{height}")
    return width, height


def _scale_to_byte(values: np.ndarray, maxval: int) -> np.ndarray:
    if maxval == 255:
        return values.astype(np.uint8)
    if np.any(values > maxval):
        raise FormatError("sample exceeds maxval")
    return ((values.astype(np.int64) * 255 + maxval // 2) // maxval).astype(np.uint8)


def load_pnm(data: Union[bytes, str]) -> Union[BinaryImage, GrayImage]:
    """Decode a PBM (P1/P4) or PGM (P2/P5) stream.

    PBM yields a :class:`BinaryImage` (stored 1 -> Black); PGM yields a
    :class:`GrayImage` rescaled to 0..255 when its maxval differs.

    Raises
    ------
    FormatError
        Bad magic number, malformed header, or truncated payload.
    """
    if isinstance(data, str):
        data = data.encode("ascii")
    if len(data) < 2 or data[:1] != b"P" or data[1:2] not in b"1245":
        raise FormatError(f"unsupported or missing PNM magic: {data[:2]!r}")
    kind = data[1:2]
    reader = _Reader(data)
    reader.pos = 2
    width, height = _dimensions(reader)
    n = width * height

    if kind == b"1":
        bits = [reader.bit() for _ in range(n)]
        return BinaryImage(np.array(bits, dtype=bool).reshape(height, width))

    if kind == b"4":
        payload = reader.raster()
        row_bytes = (width + 7) // 8
        if len(payload) < row_bytes * height:
            raise FormatError("truncated PBM raster")
        packed = np.frombuffer(payload[:row_bytes * height], dtype=np.uint8).reshape(height, row_bytes)
        bits = np.unpackbits(packed, axis=1)[:, :width]
        return BinaryImage(bits.astype(bool))

    maxval = reader.integer("maxval")
    if not 0 < maxval < 65536:
        raise FormatError(f"invalid maxval {maxval}")
    if kind == b"2":
        values = np.array([reader.integer("sample") for _ in range(n)], dtype=np.int64)
    else:
        payload = reader.raster()
        depth = 1 if maxval < 256 else 2
        if len(payload) < n * depth:
            raise FormatError("truncated PGM raster")
        dtype = np.uint8 if depth == 1 else np.dtype(">u2")
        values = np.frombuffer(payload[:n * depth], dtype=dtype).astype(np.int64)
    return GrayImage(_scale_to_byte(values.reshape(height, width), maxval))


def save_pnm(img: BinaryImage) -> bytes:
    """Encode as canonical plain PBM: single spaces, one row per line, LF endings."""
    lines = [f"P1\n{img.width} {img.height}\n"]
    for row in img.pixels:
        lines.append(" ".join("1" if v else "0" for v in row) + "\n")
    return "".join(lines).encode("ascii")


def save_pgm(img: GrayImage) -> bytes:
    """Encode as plain PGM (P2), maxval 255, one row per line."""
    lines = [f"P2\n{img.width} {img.height}\n255\n"]
    for row in img.samples:
        lines.append(" ".join(str(int(v)) for v in row) + "\n")
    return "".join(lines).encode("ascii")


def binarize(gray: GrayImage, threshold: int = 128) -> BinaryImage:
    """Samples strictly below ``threshold`` become Black."""
    if not 0 <= threshold <= 255:
        raise ValueError(f"threshold must be in 0..255, got {threshold}")
    return BinaryImage(gray.samples < threshold)


def read_image(path, threshold: int = 128) -> BinaryImage:
    """Load a PBM or PGM file as a binary image, thresholding grayscale input."""
    with open(path, "rb") as fh:
        img = load_pnm(fh.read())
    if isinstance(img, GrayImage):
        img = binarize(img, threshold)
    return img


# --------------------------------------------------------------------------
# Geometry
# --------------------------------------------------------------------------


def centroid(img: BinaryImage) -> Centroid:
    """Mean (x, y) over Black pixels, computed exactly."""
    ys, xs = np.nonzero(img.pixels)
    count = xs.size
    if count == 0:
        raise EmptyForegroundError("centroid of an image with no Black pixels")
    return Centroid(Fraction(int(xs.sum()), count), Fraction(int(ys.sum()), count))


def bounding_box(img: BinaryImage) -> tuple[int, int, int, int]:
    """``(x0, y0, x1, y1)`` inclusive bounds of the Black pixels."""
    ys, xs = np.nonzero(img.pixels)
    if xs.size == 0:
        raise EmptyForegroundError("bounding box of an image with no Black pixels")
    return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())


def normalize(img: BinaryImage, canvas: tuple[int, int] = (64, 64), margin: int = 4) -> BinaryImage:
    """Crop to the ink bounding box, rescale to fit inside the margins, center.

    Scaling is nearest-neighbor with factor
    ``s = min((W - 2m) / bb_w, (H - 2m) / bb_h)`` so the result stays binary.
    """
    cw, ch = canvas
    if cw <= 2 * margin or ch <= 2 * margin:
        raise ValueError(f"canvas {cw}x{ch} too small for margin {margin}")
    x0, y0, x1, y1 = bounding_box(img)
    crop = img.pixels[y0:y1 + 1, x0:x1 + 1]
    bh, bw = crop.shape
    s = min(Fraction(cw - 2 * margin, bw), Fraction(ch - 2 * margin, bh))
    out_w = min(cw - 2 * margin, max(1, round_half_away(bw * s)))
    out_h = min(ch - 2 * margin, max(1, round_half_away(bh * s)))
    # sample the source at the pixel that contains each output pixel's center
    src_x = np.minimum(((2 * np.arange(out_w) + 1) * bw) // (2 * out_w), bw - 1)
    src_y = np.minimum(((2 * np.arange(out_h) + 1) * bh) // (2 * out_h), bh - 1)
    scaled = crop[np.ix_(src_y, src_x)]
    out = np.zeros((ch, cw), dtype=bool)
    ox, oy = (cw - out_w) // 2, (ch - out_h) // 2
    out[oy:oy + out_h, ox:ox + out_w] = scaled
    return BinaryImage(out)


def translate(img: BinaryImage, dx: int, dy: int) -> BinaryImage:
    """Shift content by ``(dx, dy)``; pixels leaving the frame are lost."""
    h, w = img.shape
    out = np.zeros((h, w), dtype=bool)
    if abs(dx) < w and abs(dy) < h:
        out[max(dy, 0):h + min(dy, 0), max(dx, 0):w + min(dx, 0)] = \
            img.pixels[max(-dy, 0):h - max(dy, 0), max(-dx, 0):w - max(dx, 0)]
    return BinaryImage(out)


def require_same_extent(a: BinaryImage, b: BinaryImage, what: str = "images") -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{what} differ in size: {a.width}x{a.height} vs {b.width}x{b.height}")


def parse_canvas(text: str) -> tuple[int, int]:
    """Parse ``"WxH"`` into ``(W, H)``."""
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise ValueError(f"canvas must look like 64x64, got {text!r}")
    return int(m.group(1)), int(m.group(2))
