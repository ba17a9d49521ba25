"""Exception types shared across the package."""


class SketchOCRError(Exception):
    """Base class for errors raised by sketchocr."""


class FormatError(SketchOCRError, ValueError):
    """Malformed input file or unsupported persisted-format version."""


class DimensionError(SketchOCRError, ValueError):
    """Image extents do not agree (sketch vs target, query vs template canvas)."""


class EmptyForegroundError(SketchOCRError, ValueError):
    """The operation needs at least one Black pixel and found none."""


class ConfigurationError(SketchOCRError, ValueError):
    """Invalid parameters or template-set contents (empty set, duplicate label)."""
