"""Language-free single-character recognition from run-midpoint sketches."""
from .exceptions import (
    ConfigurationError, DimensionError, EmptyForegroundError, FormatError, SketchOCRError,
)
from .matcher import MatchScore, Ranking, Shift, accuracy, classify, gravity_shift, match_score
from .raster import (
    BinaryImage, Centroid, GrayImage, binarize, centroid, load_pnm, normalize, read_image, save_pnm, translate,
)
from .sketch import Direction, Sketch, extract_sketch, find_runs, render_sketch, run_to_segment
from .templates import TemplateEntry, TemplateSet, build_set, ingest, load_set, save_set

__version__ = "0.1.0"
