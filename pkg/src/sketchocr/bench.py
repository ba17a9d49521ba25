"""Distorted sample corpora and recognizer-font evaluation reports."""
from __future__ import annotations

import csv
import io
import os
import re
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .exceptions import ConfigurationError, DimensionError, FormatError
from .matcher import classify
from .raster import BinaryImage, centroid, read_image, round_half_away, save_pnm, translate
from .templates import TemplateSet

__all__ = [
    "SplitMix64",
    "splitmix64_stream",
    "Translate",
    "Scale",
    "Thicken",
    "Thin",
    "Noise",
    "Elongate",
    "parse_distortion",
    "parse_recipe",
    "distort",
    "CorpusItem",
    "generate_corpus",
    "save_corpus",
    "load_corpus",
    "ReportRow",
    "Report",
    "evaluate",
    "write_report",
]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    """Reference scalar splitmix64 generator."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK64
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK64
        return z ^ (z >> 31)


def splitmix64_stream(seed: int, n: int) -> np.ndarray:
    """First ``n`` splitmix64 outputs for ``seed`` as a uint64 array (vectorized)."""
    k = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK64) + k * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


def _unit_floats(seed: int, n: int) -> np.ndarray:
    # top 53 bits -> uniform in [0, 1)
    return (splitmix64_stream(seed, n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


# --------------------------------------------------------------------------
# Distortions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Translate:
    dx: int
    dy: int

    def apply(self, img: BinaryImage, seed: int) -> BinaryImage:
        return translate(img, self.dx, self.dy)

    def __str__(self):
        return f"translate:{self.dx}:{self.dy}"


@dataclass(frozen=True)
class Scale:
    factor: float

    def __post_init__(self):
        if not self.factor > 0:
            raise ConfigurationError(f"scale factor must be > 0, got {self.factor}")

    def apply(self, img: BinaryImage, seed: int) -> BinaryImage:
        if img.black_count == 0:
            return img
        cx, cy = centroid(img).as_floats()
        h, w = img.shape
        # inverse map each output pixel to its nearest source pixel
        src_x = np.floor(cx + (np.arange(w) - cx) / self.factor + 0.5).astype(np.int64)
        src_y = np.floor(cy + (np.arange(h) - cy) / self.factor + 0.5).astype(np.int64)
        ok_x = (src_x >= 0) & (src_x < w)
        ok_y = (src_y >= 0) & (src_y < h)
        sampled = img.pixels[np.ix_(np.clip(src_y, 0, h - 1), np.clip(src_x, 0, w - 1))]
        return BinaryImage(sampled & np.outer(ok_y, ok_x))

    def __str__(self):
        return f"scale:{self.factor!r}"


def _cross_neighbors(px: np.ndarray, fill: bool) -> list[np.ndarray]:
    padded = np.pad(px, 1, constant_values=fill)
    return [padded[1:-1, 1:-1], padded[:-2, 1:-1], padded[2:, 1:-1], padded[1:-1, :-2], padded[1:-1, 2:]]


@dataclass(frozen=True)
class Thicken:
    """One dilation pass with a 3x3 cross."""

    def apply(self, img: BinaryImage, seed: int) -> BinaryImage:
        return BinaryImage(np.logical_or.reduce(_cross_neighbors(img.pixels, False)))

    def __str__(self):
        return "thicken"


@dataclass(frozen=True)
class Thin:
    """One erosion pass with a 3x3 cross; off-frame counts as White."""

    def apply(self, img: BinaryImage, seed: int) -> BinaryImage:
        return BinaryImage(np.logical_and.reduce(_cross_neighbors(img.pixels, False)))

    def __str__(self):
        return "thin"


@dataclass(frozen=True)
class Noise:
    """Flip each pixel independently with probability ``p`` (row-major draw order)."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"noise probability must be in [0, 1], got {self.p}")

    def apply(self, img: BinaryImage, seed: int) -> BinaryImage:
        if self.p == 0:
            return img
        flips = (_unit_floats(seed, img.pixels.size) < self.p).reshape(img.shape)
        return BinaryImage(img.pixels ^ flips)

    def __str__(self):
        return f"noise:{self.p!r}"


@dataclass(frozen=True)
class Elongate:
    """Serif-like extension of the outermost runs on the top and bottom ink rows."""

    e: int

    def __post_init__(self):
        if self.e < 0:
            raise ConfigurationError(f"elongation must be >= 0, got {self.e}")

    def apply(self, img: BinaryImage, seed: int) -> BinaryImage:
        rows = np.flatnonzero(img.pixels.any(axis=1))
        if rows.size == 0 or self.e == 0:
            return img
        out = img.pixels.copy()
        w = img.width
        for y in sorted({int(rows[0]), int(rows[-1])}):
            cols = np.flatnonzero(img.pixels[y])
            left, right = int(cols[0]), int(cols[-1])
            out[y, max(0, left - self.e):left] = True
            out[y, right + 1:min(w, right + 1 + self.e)] = True
        return BinaryImage(out)

    def __str__(self):
        return f"elongate:{self.e}"


Distortion = Union[Translate, Scale, Thicken, Thin, Noise, Elongate]


def distort(img: BinaryImage, d: Distortion, seed: int = 0) -> BinaryImage:
    """Apply one distortion; ``seed`` only matters for :class:`Noise`."""
    return d.apply(img, seed)


def parse_distortion(text: str) -> Distortion:
    """Parse ``translate:DX:DY``, ``scale:F``, ``thicken``, ``thin``, ``noise:P`` or ``elongate:E``."""
    parts = text.strip().lower().split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "translate" and len(args) == 2:
            return Translate(int(args[0]), int(args[1]))
        if kind == "scale" and len(args) == 1:
            return Scale(float(args[0]))
        if kind == "thicken" and not args:
            return Thicken()
        if kind == "thin" and not args:
            return Thin()
        if kind == "noise" and len(args) == 1:
            return Noise(float(args[0]))
        if kind == "elongate" and len(args) == 1:
            return Elongate(int(args[0]))
    except ValueError:
        pass
    raise ConfigurationError(f"cannot parse distortion {text!r}")


def parse_recipe(text: str) -> list[tuple[tuple[Distortion, ...], int]]:
    """Parse ``"noise:0.02+translate:2:1*5; thicken*2"`` into recipe steps.

    Steps are separated by ``;``; distortions within a step are joined by
    ``+`` and applied in order; ``*N`` sets the repetition count (default 1).
    """
    recipe = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = re.fullmatch(r"(.*?)(?:\*\s*(\d+))?", chunk)
        body, count = m.group(1), int(m.group(2) or 1)
        chain = tuple(parse_distortion(t) for t in body.split("+") if t.strip())
        recipe.append((chain, count))
    if not recipe:
        raise ConfigurationError("empty recipe")
    return recipe


def format_chain(chain: Sequence[Distortion]) -> str:
    return "+".join(str(d) for d in chain) or "none"


# --------------------------------------------------------------------------
# Corpus
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusItem:
    true_label: str
    image: BinaryImage
    source: str
    distortions: tuple
    seed: int


def _chain_seeds(item_seed: int, n: int) -> list[int]:
    # the first distortion sees the item seed itself, later ones draw from its stream
    if n == 0:
        return []
    rng = SplitMix64(item_seed)
    return [item_seed] + [rng.next() for _ in range(n - 1)]


def generate_corpus(base: TemplateSet, recipe, master_seed: int = 42) -> list[CorpusItem]:
    """Deterministic corpus over ``base``.

    Iteration order is recipe step, then label, then repetition; item ``i``
    uses seed ``master_seed ^ i``.
    """
    if not base.entries:
        raise ConfigurationError(f"template set {base.name!r} is empty")
    if isinstance(recipe, str):
        recipe = parse_recipe(recipe)
    if not recipe:
        raise ConfigurationError("empty recipe")
    items = []
    for chain, count in recipe:
        chain = tuple(chain) if isinstance(chain, (list, tuple)) else (chain,)
        for entry in base.entries:
            for _ in range(count):
                seed = (master_seed ^ len(items)) & _MASK64
                img = entry.image
                for d, s in zip(chain, _chain_seeds(seed, len(chain))):
                    img = distort(img, d, s)
                items.append(CorpusItem(entry.label, img, base.name, chain, seed))
    return items


CORPUS_FILE = "corpus.tsv"


def save_corpus(items: Sequence[CorpusItem], directory) -> Path:
    """Write items as ``NNNNN.pbm`` plus a ``corpus.tsv`` index."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = ["#CORPUS v1\tfile\ttrue_label\tsource\tdistortions\tseed"]
    for i, item in enumerate(items):
        name = f"{i:05d}.pbm"
        (directory / name).write_bytes(save_pnm(item.image))
        lines.append(f"{name}\t{item.true_label}\t{item.source}\t{format_chain(item.distortions)}\t{item.seed}")
    _write_atomic(directory / CORPUS_FILE, ("\n".join(lines) + "\n").encode("utf-8"))
    return directory


def load_corpus(directory) -> list[CorpusItem]:
    directory = Path(directory)
    path = directory / CORPUS_FILE
    items = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#CORPUS v1"):
            raise FormatError(f"{path}: missing '#CORPUS v1' header")
        for lineno, raw in enumerate(fh, 2):
            line = raw.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise FormatError(f"{path}:{lineno}: expected 5 fields")
            name, label, source, chain, seed = parts
            distortions = () if chain == "none" else tuple(parse_distortion(t) for t in chain.split("+"))
            items.append(CorpusItem(label, read_image(directory / name), source, distortions, int(seed)))
    return items


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def percent(correct: int, samples: int) -> float:
    """``100 * correct / samples`` rounded half away from zero to one decimal."""
    if samples == 0:
        return 0.0
    return round_half_away(Fraction(1000 * correct, samples)) / 10


@dataclass(frozen=True)
class ReportRow:
    recognizer: str
    samples: int
    correct: int
    percent: float


@dataclass
class Report:
    rows: list = field(default_factory=list)
    confusion: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def row(self, recognizer: str) -> ReportRow:
        for r in self.rows:
            if r.recognizer == recognizer:
                return r
        raise KeyError(recognizer)

    def format_table(self) -> str:
        width = max([len("recognizer")] + [len(r.recognizer) for r in self.rows])
        out = [f"{'recognizer':<{width}}  samples  correct  percent"]
        for r in self.rows:
            out.append(f"{r.recognizer:<{width}}  {r.samples:>7}  {r.correct:>7}  {r.percent:>7.1f}")
        return "\n".join(out)


def evaluate(corpus: Sequence[CorpusItem], recognizers: Sequence[TemplateSet], *,
             gravity: bool = True, params: Optional[dict] = None) -> Report:
    """Classify every corpus item with every recognizer; top-1 must equal the true label."""
    if not corpus:
        raise ConfigurationError("empty corpus")
    if not recognizers:
        raise ConfigurationError("no recognizer sets given")
    for tset in recognizers:
        for item in corpus:
            if item.image.extent != tset.canvas:
                raise DimensionError(f"corpus item is {item.image.width}x{item.image.height}, "
                                     f"recognizer {tset.name!r} canvas is {tset.canvas[0]}x{tset.canvas[1]}")
    report = Report(params=dict(params or {}))
    for tset in recognizers:
        confusion = Counter()
        correct = 0
        for item in corpus:
            predicted = classify(item.image, tset, gravity=gravity).best
            confusion[(item.true_label, predicted)] += 1
            correct += predicted == item.true_label
        report.rows.append(ReportRow(tset.name, len(corpus), correct, percent(correct, len(corpus))))
        report.confusion[tset.name] = confusion
    return report


def _write_atomic(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_bytes(header: Sequence[str], rows: Iterable[Sequence]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def confusion_path(path, recognizer: str) -> Path:
    path = Path(path)
    safe = re.sub(r"[^\w.-]", "_", recognizer) or "_"
    return path.with_name(f"{path.stem}.{safe}.confusion.csv")


def write_report(report: Report, path) -> list[Path]:
    """Write the summary CSV and one ``<stem>.<recognizer>.confusion.csv`` per row.

    Returns the paths written, summary first.
    """
    path = Path(path)
    summary = _csv_bytes(
        ["recognizer", "samples", "correct", "percent"],
        [(r.recognizer, r.samples, r.correct, f"{r.percent:.1f}") for r in report.rows],
    )
    outputs = [(path, summary)]
    for r in report.rows:
        counts = report.confusion.get(r.recognizer, {})
        rows = [(t, p, n) for (t, p), n in sorted(counts.items())]
        outputs.append((confusion_path(path, r.recognizer), _csv_bytes(["true", "predicted", "count"], rows)))
    for target, data in outputs:
        _write_atomic(target, data)
    return [target for target, _ in outputs]
