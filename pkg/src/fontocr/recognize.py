"""Full-page recognition: segmentation, template scan, font vote, reports."""

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .image import (
    BinaryImage,
    ColorImage,
    GrayImage,
    binarize,
    median_filter_3x3,
    otsu_threshold,
    to_grayscale,
)
from .match import DEFAULT_THRESHOLD, Classification, GlyphClassifier
from .segment import (
    BoundingBox,
    SegmentationParams,
    crop,
    remove_small_components,
    resize_to_template,
    segment_page,
)
from .templates import FONT_DISPLAY, TemplateSet

__all__ = [
    "FontTally",
    "GlyphResult",
    "DocumentResult",
    "recognize_document",
    "decide_font",
    "write_report",
    "write_structured",
    "read_structured",
]

REJECTED_MARK = "."


@dataclass(frozen=True)
class FontTally:
    """Accepted-glyph counts per font, in canonical font order."""

    counts: dict[str, int]

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class GlyphResult:
    """Per-glyph outcome: best match (or rejection) plus page location."""

    label: str | None
    font: str | None
    score: float | None
    rejected: bool
    box: BoundingBox


@dataclass(frozen=True)
class DocumentResult:
    font: str | None
    lines: tuple[str, ...]
    glyphs: tuple[GlyphResult, ...]
    tally: FontTally


def decide_font(tally: FontTally) -> str | None:
    """Majority font; ties break to canonical order; all-zero tally -> None."""
    best_font, best_count = None, 0
    for font, count in tally.counts.items():
        if count > best_count:
            best_font, best_count = font, count
    return best_font


def recognize_document(
    image: GrayImage | ColorImage | BinaryImage,
    templates: TemplateSet,
    params: SegmentationParams | None = None,
    *,
    threshold: float = DEFAULT_THRESHOLD,
    binarize_threshold: float | None = 0.5,
    prefilter: bool = False,
) -> DocumentResult:
    """Run the whole pipeline on one page.

    Color input is converted to grayscale; an optional median prefilter runs
    before binarization (``binarize_threshold=None`` picks the threshold with
    Otsu's method); small components are erased; the page is split into lines
    and character boxes; every crop is resized to the template grid and
    classified. Glyphs come back in reading order, rejected ones marked '.'
    in the recovered text.
    """
    params = params or SegmentationParams()
    if isinstance(image, ColorImage):
        image = to_grayscale(image)
    if isinstance(image, GrayImage):
        if prefilter:
            image = median_filter_3x3(image)
        if binarize_threshold is None:
            binarize_threshold = otsu_threshold(image)
        image = binarize(image, binarize_threshold)
    bits = remove_small_components(image, params.min_component_area)
    layout = segment_page(bits, params)

    classifier = GlyphClassifier(templates)
    counts = {font: 0 for font in templates.fonts}
    glyphs: list[GlyphResult] = []
    lines: list[str] = []
    for line in layout.lines:
        chars: list[str] = []
        for i, box in enumerate(line.boxes):
            cls: Classification = classifier.classify(resize_to_template(crop(bits, box)), threshold)
            glyphs.append(GlyphResult(cls.label, cls.font, cls.score, cls.rejected, box))
            chars.append(REJECTED_MARK if cls.rejected else cls.label)
            if not cls.rejected:
                counts[cls.font] += 1
            if i < len(line.space_after) and line.space_after[i]:
                chars.append(" ")
        lines.append("".join(chars))
    tally = FontTally(counts)
    return DocumentResult(decide_font(tally), tuple(lines), tuple(glyphs), tally)


def _display_font(font: str | None) -> str:
    if font is None:
        return "none"
    return FONT_DISPLAY.get(font, font)


def _write_bytes(path, data: bytes):
    tmp = f"{path}.tmp{os.getpid()}"
    Path(tmp).write_bytes(data)
    os.replace(tmp, path)


def write_report(result: DocumentResult, path):
    """Write the plain-text report: a font header line, then the text lines."""
    out = [f"The font is {_display_font(result.font)} and the text is:"]
    out.extend(result.lines)
    _write_bytes(path, ("\n".join(out) + "\n").encode("utf-8"))


def write_structured(result: DocumentResult, path):
    """Write the machine-readable report; :func:`read_structured` inverts it."""
    glyph_records = []
    for g in result.glyphs:
        record: dict = {"rejected": g.rejected, "score": g.score}
        if not g.rejected:
            record["label"] = g.label
            record["font"] = g.font
        record["box"] = [g.box.top, g.box.left, g.box.bottom, g.box.right]
        glyph_records.append(record)
    doc = {
        "format": "fontocr-document",
        "version": 1,
        "font": result.font,
        "lines": list(result.lines),
        "tally": result.tally.counts,
        "glyphs": glyph_records,
    }
    _write_bytes(path, (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8"))


def read_structured(path) -> DocumentResult:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    glyphs = tuple(
        GlyphResult(
            record.get("label"),
            record.get("font"),
            record["score"],
            record["rejected"],
            BoundingBox(*record["box"]),
        )
        for record in doc["glyphs"]
    )
    return DocumentResult(doc["font"], tuple(doc["lines"]), glyphs, FontTally(doc["tally"]))
