"""Noise-injection evaluation harness: synthetic corpora, noise, success metrics."""

import os
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .image import GrayImage
from .recognize import recognize_document
from .segment import SegmentationParams, resize_binary
from .templates import FONT_DISPLAY, TemplateSet

__all__ = [
    "NOISE_KINDS",
    "NoiseSpec",
    "CorpusSpec",
    "EvalOutcome",
    "EvalRow",
    "render_corpus",
    "add_noise",
    "evaluate",
    "evaluate_row",
    "run_grid",
    "emit_csv",
    "CSV_HEADER",
]

NOISE_KINDS = ("salt_pepper", "gaussian", "speckle")

CSV_HEADER = "font,size,total,detected_unfiltered,success_unfiltered,detected_filtered,success_filtered"

# Page geometry for rendered corpora. The inter-glyph gap stays below the
# word-space cutoff so rendered pages contain no space markers.
_GLYPHS_PER_LINE = 20
_LINES_PER_PAGE = 10
_GAP_X = 5
_GAP_Y = 12
_MARGIN = 10


@dataclass(frozen=True)
class NoiseSpec:
    """One noise model plus its deterministic seed.

    ``density`` applies to salt_pepper, ``sigma`` (intensity std-dev on the
    0..255 scale) to gaussian, ``variance`` to the multiplicative speckle
    factor.
    """

    kind: str = "salt_pepper"
    density: float = 0.05
    sigma: float = 25.5
    variance: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValidationError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if not 0.0 <= self.density <= 1.0:
            raise ValidationError(f"density must lie in [0, 1], got {self.density}")
        if self.sigma < 0 or self.variance < 0:
            raise ValidationError("sigma and variance must be >= 0")


@dataclass(frozen=True)
class CorpusSpec:
    """A synthetic test page set: one font, one size scale, seeded glyph draw."""

    font: str
    size_scale: float = 1.0
    char_count: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.char_count < 1:
            raise ValidationError(f"char_count must be >= 1, got {self.char_count}")
        if not 0.0 < self.size_scale <= 2.0:
            raise ValidationError(f"size_scale must lie in (0, 2], got {self.size_scale}")


@dataclass(frozen=True)
class EvalOutcome:
    """Detection count for one (corpus, noise, filtering) configuration."""

    total: int
    detected: int
    success: float


@dataclass(frozen=True)
class EvalRow:
    """One results-table row: both filtering configurations side by side."""

    font: str
    size: int
    total: int
    detected_unfiltered: int
    success_unfiltered: float
    detected_filtered: int
    success_filtered: float


def render_corpus(spec: CorpusSpec, templates: TemplateSet) -> tuple[list[GrayImage], list[str]]:
    """Render seeded random glyph pages; returns the pages and per-page truth.

    Glyphs are drawn uniformly from the template alphabet, scaled by
    ``size_scale`` (bilinear + threshold), and pasted black-on-white with
    fixed gaps. At scale 1.0 the pasted bitmaps equal the templates exactly.
    Ground truth comes back one string per page with ``\\n`` between the
    rendered text lines.
    """
    font_base = templates.index(spec.font, templates.alphabet[0])
    rows = max(1, round(spec.size_scale * templates[0].bits.height))
    cols = max(1, round(spec.size_scale * templates[0].bits.width))
    scaled = {}
    for offset, label in enumerate(templates.alphabet):
        bits = templates[font_base + offset].bits
        scaled[label] = resize_binary(bits, rows, cols).bits if (rows, cols) != bits.bits.shape else bits.bits

    rng = np.random.default_rng(spec.seed)
    labels = [templates.alphabet[i] for i in rng.integers(0, len(templates.alphabet), spec.char_count)]

    per_page = _GLYPHS_PER_LINE * _LINES_PER_PAGE
    width = 2 * _MARGIN + _GLYPHS_PER_LINE * cols + (_GLYPHS_PER_LINE - 1) * _GAP_X
    pages, truths = [], []
    for start in range(0, len(labels), per_page):
        chunk = labels[start : start + per_page]
        n_lines = (len(chunk) + _GLYPHS_PER_LINE - 1) // _GLYPHS_PER_LINE
        height = 2 * _MARGIN + n_lines * rows + (n_lines - 1) * _GAP_Y
        canvas = np.full((height, width), 255, dtype=np.uint8)
        for i, label in enumerate(chunk):
            r0 = _MARGIN + (i // _GLYPHS_PER_LINE) * (rows + _GAP_Y)
            c0 = _MARGIN + (i % _GLYPHS_PER_LINE) * (cols + _GAP_X)
            canvas[r0 : r0 + rows, c0 : c0 + cols][scaled[label] == 1] = 0
        pages.append(GrayImage(canvas))
        truths.append(
            "\n".join(
                "".join(chunk[k : k + _GLYPHS_PER_LINE])
                for k in range(0, len(chunk), _GLYPHS_PER_LINE)
            )
        )
    return pages, truths


def add_noise(image: GrayImage, spec: NoiseSpec) -> GrayImage:
    """Corrupt a grayscale image with the seeded noise model."""
    rng = np.random.default_rng(spec.seed)
    pixels = image.pixels.astype(np.float64)
    if spec.kind == "salt_pepper":
        hit = rng.random(pixels.shape) < spec.density
        salt = rng.random(pixels.shape) < 0.5
        out = np.where(hit, np.where(salt, 255.0, 0.0), pixels)
    elif spec.kind == "gaussian":
        out = pixels + rng.normal(0.0, spec.sigma, pixels.shape)
    else:  # speckle
        out = pixels * (1.0 + rng.normal(0.0, np.sqrt(spec.variance), pixels.shape))
    return GrayImage(np.clip(np.floor(out + 0.5), 0, 255))


def _page_noise(noise: NoiseSpec | None, page_index: int) -> NoiseSpec | None:
    if noise is None:
        return None
    return replace(noise, seed=noise.seed + page_index)


def evaluate(
    corpus: CorpusSpec,
    noise: NoiseSpec | None,
    templates: TemplateSet,
    filtering: bool,
) -> EvalOutcome:
    """Score recognition of a noisy rendered corpus under one filter setting.

    With ``filtering`` on, the recognizer runs the median prefilter and the
    small-component removal; off disables both (segmentation itself stays).
    The rejection threshold is matcher behavior and applies either way.
    Detection is positional, line by line: position i of a recovered line
    counts when it equals the ground truth there; rejections, slipped
    alignments, and whole missing or merged lines all miss.
    """
    pages, truths = render_corpus(corpus, templates)
    params = SegmentationParams(min_component_area=25 if filtering else 1)
    detected = 0
    for i, (page, truth) in enumerate(zip(pages, truths)):
        noisy = page if noise is None else add_noise(page, _page_noise(noise, i))
        result = recognize_document(noisy, templates, params, prefilter=filtering)
        for got, want in zip(result.lines, truth.split("\n")):
            detected += sum(a == b for a, b in zip(got.replace(" ", ""), want))
    total = corpus.char_count
    return EvalOutcome(total, detected, round(100.0 * detected / total, 2))


def evaluate_row(corpus: CorpusSpec, noise: NoiseSpec | None, templates: TemplateSet) -> EvalRow:
    """Run both filter settings on identical noisy pages and pair the results."""
    unfiltered = evaluate(corpus, noise, templates, filtering=False)
    filtered = evaluate(corpus, noise, templates, filtering=True)
    return EvalRow(
        font=corpus.font,
        size=round(10 * corpus.size_scale),
        total=corpus.char_count,
        detected_unfiltered=unfiltered.detected,
        success_unfiltered=unfiltered.success,
        detected_filtered=filtered.detected,
        success_filtered=filtered.success,
    )


def run_grid(
    templates: TemplateSet,
    fonts=None,
    scales=(0.6, 0.8, 1.0),
    char_count: int = 200,
    corpus_seed: int = 0,
    noise: NoiseSpec | None = None,
    repeats: int = 1,
) -> list[EvalRow]:
    """Evaluate every (font, scale) cell, aggregating counts over ``repeats`` seeds."""
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    if noise is None:
        noise = NoiseSpec()
    rows = []
    for font in fonts or templates.fonts:
        for scale in scales:
            total = unf = fil = 0
            for r in range(repeats):
                corpus = CorpusSpec(font, scale, char_count, seed=corpus_seed + r)
                shifted = replace(noise, seed=noise.seed + 1_000_003 * r)
                row = evaluate_row(corpus, shifted, templates)
                total += row.total
                unf += row.detected_unfiltered
                fil += row.detected_filtered
            rows.append(
                EvalRow(
                    font=font,
                    size=round(10 * scale),
                    total=total,
                    detected_unfiltered=unf,
                    success_unfiltered=round(100.0 * unf / total, 2),
                    detected_filtered=fil,
                    success_filtered=round(100.0 * fil / total, 2),
                )
            )
    return rows


def emit_csv(rows: list[EvalRow], path):
    """Write the results table; percentages carry exactly two decimals."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            f"{FONT_DISPLAY.get(row.font, row.font)},{row.size},{row.total},"
            f"{row.detected_unfiltered},{row.success_unfiltered:.2f},"
            f"{row.detected_filtered},{row.success_filtered:.2f}"
        )
    data = ("\n".join(lines) + "\n").encode("utf-8")
    tmp = f"{path}.tmp{os.getpid()}"
    Path(tmp).write_bytes(data)
    os.replace(tmp, path)
