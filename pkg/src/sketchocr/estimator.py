"""scikit-learn wrappers so the sketch matcher composes with pipelines.

Images enter as arrays of shape ``(n_samples, height, width)`` or flattened
``(n_samples, height * width)``; any non-zero value is ink (Black). Flat
input needs ``image_shape`` unless the images are square.
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DimensionError
from .matcher import match_score
from .raster import BinaryImage, centroid, normalize
from .sketch import check_bias, extract_sketch, parse_directions

__all__ = ["check_images", "CanvasNormalizer", "SketchTransformer", "SketchClassifier"]


def check_images(X, image_shape=None) -> np.ndarray:
    """Validate ``X`` and return a boolean ``(n, h, w)`` array."""
    X = check_array(X, allow_nd=True, dtype=None, ensure_2d=True)
    if X.ndim == 3:
        images = X
    elif X.ndim == 2:
        if image_shape is None:
            side = math.isqrt(X.shape[1])
            if side * side != X.shape[1]:
                raise DimensionError(f"cannot infer image shape from {X.shape[1]} features; set image_shape")
            image_shape = (side, side)
        h, w = image_shape
        if h * w != X.shape[1]:
            raise DimensionError(f"image_shape {image_shape} does not match {X.shape[1]} features")
        images = X.reshape(X.shape[0], h, w)
    else:
        raise DimensionError(f"expected 2-D or 3-D input, got {X.ndim}-D")
    return images != 0


class CanvasNormalizer(TransformerMixin, BaseEstimator):
    """Crop, rescale and center each glyph on a fixed canvas.

    Parameters
    ----------
    canvas : (width, height), default (64, 64)
    margin : int, default 4
    image_shape : (height, width), optional
        Shape of flat input rows.

    Output is flattened to ``(n_samples, height * width)`` of 0/1 values.
    """

    def __init__(self, canvas=(64, 64), margin=4, image_shape=None):
        self.canvas = canvas
        self.margin = margin
        self.image_shape = image_shape

    def fit(self, X, y=None):
        images = check_images(X, self.image_shape)
        self.n_features_in_ = int(np.prod(images.shape[1:]))
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        images = check_images(X, self.image_shape)
        out = [normalize(BinaryImage(img), tuple(self.canvas), self.margin).pixels for img in images]
        return np.stack(out).reshape(len(out), -1).astype(np.uint8)


class SketchTransformer(TransformerMixin, BaseEstimator):
    """Encode each image as its sketch: +1 black point, -1 white point, 0 elsewhere."""

    def __init__(self, bias=0.4, directions=None, image_shape=None):
        self.bias = bias
        self.directions = directions
        self.image_shape = image_shape

    def fit(self, X, y=None):
        check_bias(self.bias)
        parse_directions(self.directions)
        images = check_images(X, self.image_shape)
        self.n_features_in_ = int(np.prod(images.shape[1:]))
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        images = check_images(X, self.image_shape)
        out = np.zeros((images.shape[0], images.shape[1] * images.shape[2]), dtype=np.int8)
        for i, img in enumerate(images):
            sk = extract_sketch(BinaryImage(img), self.bias, self.directions)
            out[i, sk.black.ravel()] = 1
            out[i, sk.white.ravel()] = -1
        return out


class SketchClassifier(ClassifierMixin, BaseEstimator):
    """Nearest-template classifier scoring template sketches against queries.

    Every training image becomes a template. ``decision_function`` gives,
    per class, the best match accuracy (0..100) among that class's
    templates; ``predict`` takes the arg-max, ties going to the smallest
    class label.

    Parameters
    ----------
    bias : float, default 0.4
    directions : str or iterable, optional
        Scan passes used for the template sketches (``"hb,hw,vb,vw"``).
    gravity : bool, default True
        Align centers of gravity before sampling.
    image_shape : (height, width), optional
    """

    def __init__(self, bias=0.4, directions=None, gravity=True, image_shape=None):
        self.bias = bias
        self.directions = directions
        self.gravity = gravity
        self.image_shape = image_shape

    def fit(self, X, y):
        bias = check_bias(self.bias)
        images = check_images(X, self.image_shape)
        y = np.asarray(y)
        if y.ndim != 1 or y.shape[0] != images.shape[0]:
            raise ValueError(f"y must be 1-D with {images.shape[0]} labels")
        self.classes_, self.template_classes_ = np.unique(y, return_inverse=True)
        self.templates_ = []
        for img in images:
            glyph = BinaryImage(img)
            self.templates_.append((extract_sketch(glyph, bias, self.directions), centroid(glyph)))
        self.image_shape_ = images.shape[1:]
        self.n_features_in_ = int(np.prod(self.image_shape_))
        return self

    @classmethod
    def from_template_set(cls, tset, gravity=True):
        """Fitted classifier reproducing :func:`sketchocr.matcher.classify` on ``tset``."""
        clf = cls(bias=tset.bias, gravity=gravity, image_shape=(tset.canvas[1], tset.canvas[0]))
        X = np.stack([e.image.pixels for e in tset.entries])
        return clf.fit(X, np.array(tset.labels))

    def decision_function(self, X):
        check_is_fitted(self, "templates_")
        images = check_images(X, self.image_shape or self.image_shape_)
        if images.shape[1:] != self.image_shape_:
            raise DimensionError(f"expected images of shape {self.image_shape_}, got {images.shape[1:]}")
        scores = np.zeros((images.shape[0], self.classes_.size))
        for i, img in enumerate(images):
            query = BinaryImage(img)
            qc = centroid(query)
            for (sk, c), k in zip(self.templates_, self.template_classes_):
                acc = match_score(sk, c, query, gravity=self.gravity, target_centroid=qc).accuracy
                scores[i, k] = max(scores[i, k], acc)
        return scores

    def predict(self, X):
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]
