"""Bundled recognizer-font fixtures (two hand-drawn 26-glyph uppercase styles, 64x64)."""
from importlib import resources
from pathlib import Path

from ..exceptions import ConfigurationError

STYLES = ("block", "serif")


def fixture_dir(style: str) -> Path:
    """Directory of a bundled template set, loadable with :func:`sketchocr.templates.load_set`."""
    if style not in STYLES:
        raise ConfigurationError(f"unknown fixture style {style!r}; choose from {', '.join(STYLES)}")
    return Path(str(resources.files(__name__).joinpath(style)))


def load_fixture(style: str):
    from ..templates import load_set

    return load_set(fixture_dir(style))
