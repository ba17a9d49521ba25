"""Recognizer fonts: labeled glyph sets with precomputed sketches and centroids.

On disk a set is a directory holding ``set.tsv`` and one canonical P1 PBM per
glyph::

    #SKETCHSET v1<TAB>name<TAB>canvas_w<TAB>canvas_h<TAB>bias<TAB>margin
    A<TAB>U+0041.pbm
    B<TAB>U+0042.pbm

Sketches and centroids are not stored; they are recomputed on load.
"""
from __future__ import annotations

import logging
import os
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .exceptions import ConfigurationError, DimensionError, EmptyForegroundError, FormatError
from .raster import BinaryImage, Centroid, centroid, normalize, read_image, save_pnm
from .sketch import DEFAULT_BIAS, Sketch, check_bias, extract_sketch

__all__ = ["TemplateEntry", "TemplateSet", "build_set", "ingest", "save_set", "load_set",
           "read_manifest", "SET_FILE", "FORMAT_VERSION"]

log = logging.getLogger(__name__)

SET_FILE = "set.tsv"
FORMAT_TAG = "#SKETCHSET"
FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class TemplateEntry:
    label: str
    image: BinaryImage
    sketch: Sketch
    centroid: Centroid

    @classmethod
    def from_image(cls, label: str, image: BinaryImage, bias: float) -> "TemplateEntry":
        return cls(label, image, extract_sketch(image, bias), centroid(image))


@dataclass(frozen=True)
class TemplateSet:
    name: str
    canvas: tuple[int, int]
    bias: float
    margin: int
    entries: tuple[TemplateEntry, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "canvas", tuple(int(v) for v in self.canvas))
        object.__setattr__(self, "entries", tuple(self.entries))
        labels = [e.label for e in self.entries]
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        if dupes:
            raise ConfigurationError(f"duplicate label(s) in template set: {', '.join(dupes)}")
        for e in self.entries:
            if e.image.extent != self.canvas:
                raise DimensionError(f"entry {e.label!r} is {e.image.width}x{e.image.height}, "
                                     f"canvas is {self.canvas[0]}x{self.canvas[1]}")

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, label: str) -> TemplateEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def _check_label(label: str) -> None:
    if len(label) != 1:
        raise ConfigurationError(f"labels must be a single character, got {label!r}")


def build_set(name: str, glyphs: Mapping[str, BinaryImage], bias: float = DEFAULT_BIAS,
              canvas=(64, 64), margin: int = 4, normalized: bool = False) -> TemplateSet:
    """Build a set from in-memory glyphs; pass ``normalized=True`` if they already sit on the canvas."""
    bias = check_bias(bias)
    entries = []
    for label in sorted(glyphs):
        _check_label(label)
        img = glyphs[label] if normalized else normalize(glyphs[label], canvas, margin)
        entries.append(TemplateEntry.from_image(label, img, bias))
    return TemplateSet(name, canvas, bias, margin, tuple(entries))


def read_manifest(path) -> list[tuple[str, str]]:
    """``label<TAB>filename`` rows; blank lines and ``#`` lines are skipped."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'label<TAB>file', got {line!r}")
            rows.append((parts[0], parts[1]))
    return rows


def ingest(manifest_path, bias: float = DEFAULT_BIAS, canvas=(64, 64), margin: int = 4,
           threshold: int = 128, name: Optional[str] = None) -> TemplateSet:
    """Load every glyph listed in a manifest, normalize it onto the canvas and sketch it.

    Image paths are relative to the manifest's directory. Glyphs without ink
    are skipped with a warning.
    """
    bias = check_bias(bias)
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    rows = read_manifest(manifest_path)
    seen = set()
    for label, _ in rows:
        _check_label(label)
        if label in seen:
            raise ConfigurationError(f"duplicate label {label!r} in {manifest_path}")
        seen.add(label)
    glyphs, skipped = {}, []
    for label, filename in rows:
        img = read_image(base / filename, threshold)
        try:
            glyphs[label] = normalize(img, canvas, margin)
        except EmptyForegroundError:
            skipped.append(label)
    if skipped:
        msg = f"skipped blank glyph(s) {', '.join(skipped)} in {manifest_path}"
        log.warning(msg)
        warnings.warn(msg, stacklevel=2)
    if name is None:
        name = base.resolve().name
    return build_set(name, glyphs, bias, canvas, margin, normalized=True)


def _glyph_filename(label: str) -> str:
    return f"U+{ord(label):04X}.pbm"


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def set_manifest_bytes(tset: TemplateSet) -> bytes:
    cw, ch = tset.canvas
    if "\t" in tset.name or "\n" in tset.name:
        raise ConfigurationError("set name may not contain tabs or newlines")
    lines = [f"{FORMAT_TAG} {FORMAT_VERSION}\t{tset.name}\t{cw}\t{ch}\t{tset.bias!r}\t{tset.margin}"]
    lines += [f"{e.label}\t{_glyph_filename(e.label)}" for e in tset.entries]
    return ("\n".join(lines) + "\n").encode("utf-8")


def save_set(tset: TemplateSet, directory) -> Path:
    """Write ``set.tsv`` and the normalized glyph images; the manifest goes last."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = set_manifest_bytes(tset)
    for e in tset.entries:
        _atomic_write(directory / _glyph_filename(e.label), save_pnm(e.image))
    _atomic_write(directory / SET_FILE, manifest)
    return directory


def _parse_header(line: str, path) -> tuple[str, tuple[int, int], float, int]:
    fields = line.rstrip("\r\n").split("\t")
    tag = fields[0].split(" ")
    if tag[0] != FORMAT_TAG or len(tag) != 2:
        raise FormatError(f"{path}: missing {FORMAT_TAG} header")
    if tag[1] != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {tag[1]!r}")
    if len(fields) != 6:
        raise FormatError(f"{path}: header needs 6 tab-separated fields, got {len(fields)}")
    try:
        canvas = (int(fields[2]), int(fields[3]))
        bias = check_bias(float(fields[4]))
        margin = int(fields[5])
    except (ValueError, ConfigurationError) as exc:
        raise FormatError(f"{path}: bad header value: {exc}") from None
    return fields[1], canvas, bias, margin


def load_set(directory) -> TemplateSet:
    """Reload a directory written by :func:`save_set`, recomputing sketches."""
    directory = Path(directory)
    path = directory / SET_FILE
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
    name, canvas, bias, margin = _parse_header(header, path)
    entries = []
    for label, filename in read_manifest(path):
        _check_label(label)
        img = read_image(directory / filename)
        if img.extent != canvas:
            raise DimensionError(f"entry {label!r} ({filename}) is {img.width}x{img.height}, "
                                 f"expected {canvas[0]}x{canvas[1]}")
        entries.append(TemplateEntry.from_image(label, img, bias))
    entries.sort(key=lambda e: e.label)
    return TemplateSet(name, canvas, bias, margin, tuple(entries))
