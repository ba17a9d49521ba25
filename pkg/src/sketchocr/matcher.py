"""Gravity-shift alignment and sketch-versus-image scoring."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, NamedTuple, Optional

import numpy as np

from .exceptions import ConfigurationError, DimensionError
from .raster import BinaryImage, Centroid, centroid
from .sketch import Sketch

if TYPE_CHECKING:
    from .templates import TemplateSet

__all__ = ["Shift", "MatchScore", "Ranking", "accuracy", "gravity_shift", "match_score", "classify"]


class Shift(NamedTuple):
    dx: int
    dy: int


def accuracy(w: int, n_w: int, b: int, n_b: int) -> float:
    """Mean of the white and black hit rates, as a percentage.

    A term whose denominator is zero is dropped and the other takes its
    weight; with no points at all the accuracy is 0.
    """
    if n_w and n_b:
        return 0.5 * (w / n_w + b / n_b) * 100
    if n_b:
        return b / n_b * 100
    if n_w:
        return w / n_w * 100
    return 0.0


@dataclass(frozen=True)
class MatchScore:
    w: int
    n_w: int
    b: int
    n_b: int

    def __post_init__(self):
        if not (0 <= self.w <= self.n_w and 0 <= self.b <= self.n_b):
            raise ValueError(f"inconsistent match counts {self}")

    @property
    def accuracy(self) -> float:
        return accuracy(self.w, self.n_w, self.b, self.n_b)


def _round_half_up(q: Fraction) -> int:
    # floor(q + 1/2) commutes with integer translation; ties-away-from-zero does not
    return math.floor(q + Fraction(1, 2))


def gravity_shift(target_centroid: Centroid, source_centroid: Centroid) -> Shift:
    """Integer offset ``target - source`` per axis, rounded half up (exact)."""
    target = Centroid(*target_centroid)
    source = Centroid(*source_centroid)
    return Shift(_round_half_up(target.cx - source.cx), _round_half_up(target.cy - source.cy))


def _count_hits(xs, ys, target: np.ndarray, want_black: bool) -> int:
    h, w = target.shape
    inside = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    hits = target[ys[inside], xs[inside]]
    if want_black:
        return int(np.count_nonzero(hits))
    # off-frame samples read as White
    return int(hits.size - np.count_nonzero(hits)) + int(inside.size - np.count_nonzero(inside))


def match_score(
    sketch: Sketch,
    sketch_source_centroid: Centroid,
    target: BinaryImage,
    *,
    gravity: bool = True,
    target_centroid: Optional[Centroid] = None,
) -> MatchScore:
    """Score a sketch against a target image after centroid alignment.

    Each sketch point ``p`` is compared with the target pixel at ``p + d``
    where ``d = gravity_shift(centroid(target), sketch_source_centroid)``;
    this lines the two centers of gravity up. ``gravity=False`` forces
    ``d = (0, 0)``. ``target_centroid`` may be passed to skip recomputation.
    """
    if sketch.shape != target.shape:
        w, h = sketch.extent
        raise DimensionError(f"sketch extent {w}x{h} does not match target {target.width}x{target.height}")
    if target_centroid is None:
        target_centroid = centroid(target)
    dx, dy = gravity_shift(target_centroid, sketch_source_centroid) if gravity else (0, 0)
    bx, by = sketch.black_coords
    wx, wy = sketch.white_coords
    b = _count_hits(bx + dx, by + dy, target.pixels, True)
    w = _count_hits(wx + dx, wy + dy, target.pixels, False)
    return MatchScore(w=w, n_w=wx.size, b=b, n_b=bx.size)


class Ranking(list):
    """``(label, MatchScore)`` pairs, best accuracy first, ties by ascending label."""

    @property
    def best(self) -> str:
        return self[0][0]

    def lines(self) -> list[str]:
        return [f"{label}\t{score.accuracy:.4f}" for label, score in self]


def classify(query: BinaryImage, templates: "TemplateSet", *, gravity: bool = True) -> Ranking:
    """Rank every template of ``templates`` against ``query``."""
    if not templates.entries:
        raise ConfigurationError(f"template set {templates.name!r} is empty")
    cw, ch = templates.canvas
    if query.extent != (cw, ch):
        raise DimensionError(f"query is {query.width}x{query.height}, template canvas is {cw}x{ch}")
    query_centroid = centroid(query)
    scored = [
        (entry.label, match_score(entry.sketch, entry.centroid, query,
                                  gravity=gravity, target_centroid=query_centroid))
        for entry in templates.entries
    ]
    scored.sort(key=lambda item: (-item[1].accuracy, item[0]))
    return Ranking(scored)
