"""Glyph matching: 2-D correlation coefficient and best-template selection."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .image import BinaryImage
from .templates import TemplateSet

__all__ = ["DEFAULT_THRESHOLD", "MatchScore", "Classification", "corr2", "GlyphClassifier", "classify_glyph"]

DEFAULT_THRESHOLD = 0.4


@dataclass(frozen=True)
class MatchScore:
    """Score of one template in canonical-order position ``template_index``."""

    template_index: int
    score: float


@dataclass(frozen=True)
class Classification:
    """Best-match outcome for one character crop.

    ``label``/``font`` are None when the crop was rejected (best defined
    score below the threshold, or no score defined at all). ``score`` is the
    best defined correlation, or None when every score was undefined.
    """

    label: str | None
    font: str | None
    score: float | None
    threshold: float
    template_index: int | None = None

    @property
    def rejected(self) -> bool:
        return self.label is None


def corr2(a: BinaryImage, b: BinaryImage) -> float | None:
    """Correlation coefficient of two equal-size images over all pixels.

    Both images are reduced by their element means; the result is the
    normalized cross product in [-1, 1]. If either image is constant the
    denominator vanishes and None is returned (undefined, not an error).
    """
    if (a.height, a.width) != (b.height, b.width):
        raise ValidationError(f"corr2 dimensions differ: {a.height}x{a.width} vs {b.height}x{b.width}")
    da = a.bits.astype(np.float64).ravel()
    db = b.bits.astype(np.float64).ravel()
    da -= da.mean()
    db -= db.mean()
    denom = np.sqrt(np.dot(da, da) * np.dot(db, db))
    if denom == 0.0:
        return None
    # Rounding can push a perfect match a few ulp past 1; keep the contract.
    return float(np.clip(np.dot(da, db) / denom, -1.0, 1.0))


class GlyphClassifier:
    """Scans a template set with per-template deviations precomputed.

    Caching the zero-mean rows and their norms changes no observable result;
    it only avoids redoing the template-side arithmetic for every crop.
    """

    def __init__(self, templates: TemplateSet):
        self.templates = templates
        flat = templates.stacked().reshape(len(templates), -1)
        dev = flat - flat.mean(axis=1, keepdims=True)
        self._dev = dev
        self._norms = np.sqrt(np.einsum("ij,ij->i", dev, dev))

    def scores(self, crop: BinaryImage) -> np.ndarray:
        """Correlation against every template, NaN where undefined."""
        if self._dev.shape[1] != crop.height * crop.width:
            raise ValidationError(f"crop is {crop.height}x{crop.width}, expected template-sized input")
        flat = crop.bits.astype(np.float64).ravel()
        dev = flat - flat.mean()
        norm = np.sqrt(np.dot(dev, dev))
        if norm == 0.0:
            return np.full(len(self.templates), np.nan)
        return np.clip((self._dev @ dev) / (self._norms * norm), -1.0, 1.0)

    def classify(self, crop: BinaryImage, threshold: float = DEFAULT_THRESHOLD) -> Classification:
        """Pick the maximum-scoring template; reject weak or undefined matches.

        Ties break to the lowest canonical template index. A best defined
        score strictly below ``threshold`` is rejected (a score equal to the
        threshold is accepted).
        """
        if not -1.0 <= threshold <= 1.0:
            raise ValidationError(f"rejection threshold must lie in [-1, 1], got {threshold}")
        scores = self.scores(crop)
        if np.isnan(scores).all():
            return Classification(None, None, None, threshold)
        best = int(np.nanargmax(scores))
        score = float(scores[best])
        if score < threshold:
            return Classification(None, None, score, threshold)
        glyph = self.templates[best]
        return Classification(glyph.label, glyph.font, score, threshold, template_index=best)


def classify_glyph(crop: BinaryImage, templates: TemplateSet, threshold: float = DEFAULT_THRESHOLD) -> Classification:
    return GlyphClassifier(templates).classify(crop, threshold)
