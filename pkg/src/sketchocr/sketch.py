"""Sketch extraction: reduce every black/white run to a bias-scaled core segment.

Along each row (horizontal passes) and each column (vertical passes) the
maximal runs of one color are located; each run is replaced by a segment of
width ``max(1, round(bias * length))`` centered on the run's median pixel.
The union of the black segments and the union of the white segments form
the sketch.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .exceptions import ConfigurationError
from .raster import BinaryImage, GrayImage, round_half_away

__all__ = [
    "Color",
    "Orientation",
    "Direction",
    "ALL_DIRECTIONS",
    "DEFAULT_BIAS",
    "Run",
    "Sketch",
    "check_bias",
    "parse_directions",
    "find_runs",
    "line_runs",
    "run_to_segment",
    "extract_sketch",
    "render_sketch",
]

DEFAULT_BIAS = 0.4

GRAY_BACKGROUND = 128


class Color(enum.Enum):
    BLACK = "black"
    WHITE = "white"


class Orientation(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class Direction(enum.Enum):
    """One scan pass: orientation plus the color of the runs it collects."""

    HORIZONTAL_BLACK = "hb"
    HORIZONTAL_WHITE = "hw"
    VERTICAL_BLACK = "vb"
    VERTICAL_WHITE = "vw"

    @property
    def orientation(self) -> Orientation:
        return Orientation.HORIZONTAL if self.value[0] == "h" else Orientation.VERTICAL

    @property
    def color(self) -> Color:
        return Color.BLACK if self.value[1] == "b" else Color.WHITE


ALL_DIRECTIONS = frozenset(Direction)


def check_bias(bias) -> float:
    """Validate ``0 < bias <= 1`` and return it as a float."""
    try:
        value = float(bias)
    except (TypeError, ValueError):
        raise ConfigurationError(f"bias must be a number, got {bias!r}") from None
    if not 0.0 < value <= 1.0:
        raise ConfigurationError(f"bias must satisfy 0 < bias ≤ 1, got {bias!r}")
    return value


def parse_directions(spec: Union[str, Iterable, None]) -> frozenset:
    """Accept ``None`` (all four), a ``"hb,hw,vb,vw"`` string, or Direction members."""
    if spec is None:
        return ALL_DIRECTIONS
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = set()
    for item in items:
        if isinstance(item, Direction):
            out.add(item)
            continue
        key = str(item).strip().lower()
        try:
            out.add(Direction(key))
        except ValueError:
            raise ConfigurationError(f"unknown direction {item!r}; use hb, hw, vb, vw") from None
    if not out:
        raise ConfigurationError("at least one direction is required")
    return frozenset(out)


class Run(NamedTuple):
    line_index: int
    start: int
    end: int
    orientation: Orientation
    color: Color

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def find_runs(line: Sequence, color: Color) -> list[tuple[int, int]]:
    """Inclusive ``(start, end)`` spans of maximal runs of ``color`` in ``line``.

    Black runs touching the ends of the line are kept. White runs are kept
    only when bounded by Black on both sides; frame-touching white is
    background.
    """
    line = np.asarray(line, dtype=bool)
    n = line.size
    if n == 0:
        raise ValueError("find_runs needs a non-empty line")
    mask = line if color is Color.BLACK else ~line
    edges = np.diff(np.concatenate(([0], mask.view(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    if color is Color.WHITE:
        keep = (starts > 0) & (ends < n - 1)
        starts, ends = starts[keep], ends[keep]
    return [(int(s), int(e)) for s, e in zip(starts, ends)]


def line_runs(img: BinaryImage, direction: Direction) -> list[Run]:
    """All runs collected by one scan pass, in line then position order."""
    lines = img.pixels if direction.orientation is Orientation.HORIZONTAL else img.pixels.T
    return [
        Run(i, s, e, direction.orientation, direction.color)
        for i, line in enumerate(lines)
        for s, e in find_runs(line, direction.color)
    ]


def run_to_segment(start: int, end: int, bias: float) -> tuple[int, int]:
    """Core segment of the run ``[start, end]`` at the given bias.

    >>> run_to_segment(2, 6, 0.2)
    (4, 4)
    >>> run_to_segment(0, 3, 1.0)
    (0, 3)
    """
    length = end - start + 1
    median = (start + end) // 2
    width = max(1, round_half_away(bias * length))
    lo = median - (width - 1) // 2
    hi = median + width // 2
    return max(lo, start), min(hi, end)


@dataclass(frozen=True, eq=False)
class Sketch:
    """Black and white representative points of an image.

    Stored as two boolean masks of the source shape; ``black_points`` and
    ``white_points`` give the equivalent ``(x, y)`` sets.
    """

    black: np.ndarray
    white: np.ndarray
    bias: float

    def __post_init__(self):
        black = np.array(self.black, dtype=bool)
        white = np.array(self.white, dtype=bool)
        if black.shape != white.shape or black.ndim != 2:
            raise ValueError("black and white masks must share a 2-D shape")
        if np.any(black & white):
            raise ValueError("black and white sketch points must be disjoint")
        black.setflags(write=False)
        white.setflags(write=False)
        object.__setattr__(self, "black", black)
        object.__setattr__(self, "white", white)

    @property
    def extent(self) -> tuple[int, int]:
        """``(width, height)`` of the source image."""
        return (self.black.shape[1], self.black.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.black.shape

    @cached_property
    def black_coords(self) -> tuple[np.ndarray, np.ndarray]:
        ys, xs = np.nonzero(self.black)
        return xs, ys

    @cached_property
    def white_coords(self) -> tuple[np.ndarray, np.ndarray]:
        ys, xs = np.nonzero(self.white)
        return xs, ys

    @property
    def black_points(self) -> frozenset:
        xs, ys = self.black_coords
        return frozenset(zip(xs.tolist(), ys.tolist()))

    @property
    def white_points(self) -> frozenset:
        xs, ys = self.white_coords
        return frozenset(zip(xs.tolist(), ys.tolist()))

    @property
    def n_black(self) -> int:
        return int(self.black_coords[0].size)

    @property
    def n_white(self) -> int:
        return int(self.white_coords[0].size)

    def __eq__(self, other):
        if not isinstance(other, Sketch):
            return NotImplemented
        return (
            self.bias == other.bias
            and self.shape == other.shape
            and bool(np.array_equal(self.black, other.black))
            and bool(np.array_equal(self.white, other.white))
        )

    def __hash__(self):
        return hash((self.bias, self.shape, self.black.tobytes(), self.white.tobytes()))

    def __repr__(self):
        w, h = self.extent
        return f"Sketch({w}x{h}, bias={self.bias}, N_b={self.n_black}, N_w={self.n_white})"


def extract_sketch(img: BinaryImage, bias: float = DEFAULT_BIAS, directions=None) -> Sketch:
    """Sketch of ``img``: merged core segments from the selected scan passes.

    Parameters
    ----------
    img : BinaryImage
    bias : float, default 0.4
        Fraction of each run kept, ``0 < bias <= 1``.
    directions : iterable of Direction or str, optional
        Subset of ``{"hb", "hw", "vb", "vw"}``; all four by default.
    """
    bias = check_bias(bias)
    directions = parse_directions(directions)
    masks = {Color.BLACK: np.zeros(img.shape, dtype=bool), Color.WHITE: np.zeros(img.shape, dtype=bool)}
    for direction in sorted(directions, key=lambda d: d.value):
        horizontal = direction.orientation is Orientation.HORIZONTAL
        mask = masks[direction.color]
        target = mask if horizontal else mask.T
        lines = img.pixels if horizontal else img.pixels.T
        for i, line in enumerate(lines):
            for start, end in find_runs(line, direction.color):
                lo, hi = run_to_segment(start, end, bias)
                target[i, lo:hi + 1] = True
    return Sketch(masks[Color.BLACK], masks[Color.WHITE], bias)


def render_sketch(sketch: Sketch) -> GrayImage:
    """Gray (128) canvas with black points at 0 and white points at 255."""
    out = np.full(sketch.shape, GRAY_BACKGROUND, dtype=np.uint8)
    out[sketch.black] = 0
    out[sketch.white] = 255
    return GrayImage(out)
