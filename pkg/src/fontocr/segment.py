"""Page segmentation: component filtering, gap-based line/character splits, resize."""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .image import BinaryImage

__all__ = [
    "TEMPLATE_ROWS",
    "TEMPLATE_COLS",
    "BoundingBox",
    "SegmentationParams",
    "TextLine",
    "PageLayout",
    "remove_small_components",
    "split_lines",
    "split_chars",
    "segment_page",
    "crop",
    "resize_binary",
    "resize_to_template",
]

TEMPLATE_ROWS = 46
TEMPLATE_COLS = 26

# 8-connectivity: diagonal strokes count as one component.
_EIGHT = np.ones((3, 3), dtype=np.uint8)


@dataclass(frozen=True)
class BoundingBox:
    """Inclusive pixel-index rectangle."""

    top: int
    left: int
    bottom: int
    right: int

    def __post_init__(self):
        if self.top > self.bottom or self.left > self.right:
            raise ValidationError(f"degenerate bounding box {self}")

    @property
    def height(self) -> int:
        return self.bottom - self.top + 1

    @property
    def width(self) -> int:
        return self.right - self.left + 1

    def shifted(self, dy: int, dx: int) -> "BoundingBox":
        return BoundingBox(self.top + dy, self.left + dx, self.bottom + dy, self.right + dx)


@dataclass(frozen=True)
class SegmentationParams:
    """Gap and noise-area settings for page segmentation.

    ``line_gap``/``char_gap`` are the blank-run lengths that split lines and
    characters; ``space_gap`` is the blank-column run that additionally emits
    a word space; ``min_component_area`` is the small-component cutoff.
    """

    min_component_area: int = 25
    line_gap: int = 1
    char_gap: int = 1
    space_gap: int = 13

    def __post_init__(self):
        for name in ("min_component_area", "line_gap", "char_gap", "space_gap"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.space_gap < self.char_gap:
            raise ValidationError("space_gap must be >= char_gap")


@dataclass(frozen=True)
class TextLine:
    """One text line: its row interval, character boxes, and space markers.

    ``space_after[i]`` is True when a word space separates ``boxes[i]`` from
    ``boxes[i + 1]``; it has ``len(boxes) - 1`` entries.
    """

    row_span: tuple[int, int]
    boxes: tuple[BoundingBox, ...]
    space_after: tuple[bool, ...]


@dataclass(frozen=True)
class PageLayout:
    lines: tuple[TextLine, ...]

    @property
    def glyph_count(self) -> int:
        return sum(len(line.boxes) for line in self.lines)


def remove_small_components(image: BinaryImage, min_area: int) -> BinaryImage:
    """Erase every 8-connected ink component smaller than ``min_area`` pixels."""
    if min_area < 1:
        raise ValidationError(f"min_area must be >= 1, got {min_area}")
    labels, count = ndimage.label(image.bits, structure=_EIGHT)
    if count == 0:
        return image
    sizes = np.bincount(labels.ravel())
    keep = sizes >= min_area
    keep[0] = False
    return BinaryImage(np.where(keep[labels], 1, 0))


def _ink_intervals(mask: np.ndarray, gap: int) -> list[tuple[int, int]]:
    """Maximal inclusive intervals of True positions, bridging blank runs < gap."""
    positions = np.flatnonzero(mask)
    if positions.size == 0:
        return []
    # A blank run of length (diff - 1) splits only when it reaches `gap`.
    breaks = np.flatnonzero(np.diff(positions) > gap)
    starts = np.concatenate(([positions[0]], positions[breaks + 1]))
    ends = np.concatenate((positions[breaks], [positions[-1]]))
    return [(int(s), int(e)) for s, e in zip(starts, ends)]


def split_lines(image: BinaryImage, params: SegmentationParams) -> list[tuple[int, int]]:
    """Row intervals containing ink, separated by >= line_gap blank rows."""
    return _ink_intervals(image.bits.any(axis=1), params.line_gap)


def split_chars(image: BinaryImage, line: tuple[int, int], params: SegmentationParams) -> TextLine:
    """Split one line band into character boxes and word-space markers.

    Boxes are maximal column intervals containing ink (blank-column runs
    shorter than ``char_gap`` are bridged), tightened vertically to their ink
    extent within the band.
    """
    top0, bottom0 = line
    band = image.bits[top0 : bottom0 + 1]
    spans = _ink_intervals(band.any(axis=0), params.char_gap)
    boxes = []
    for left, right in spans:
        rows = np.flatnonzero(band[:, left : right + 1].any(axis=1))
        boxes.append(BoundingBox(top0 + int(rows[0]), left, top0 + int(rows[-1]), right))
    spaces = tuple(
        boxes[i + 1].left - boxes[i].right - 1 >= params.space_gap for i in range(len(boxes) - 1)
    )
    return TextLine((top0, bottom0), tuple(boxes), spaces)


def segment_page(image: BinaryImage, params: SegmentationParams) -> PageLayout:
    """Noise-filtered image -> ordered lines of character boxes."""
    lines = [split_chars(image, span, params) for span in split_lines(image, params)]
    return PageLayout(tuple(lines))


def crop(image: BinaryImage, box: BoundingBox) -> BinaryImage:
    return BinaryImage(image.bits[box.top : box.bottom + 1, box.left : box.right + 1])


def _sample_axis(n_in: int, n_out: int):
    # Half-pixel-center sampling; degenerates to the identity when sizes match.
    x = np.clip((np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5, 0.0, n_in - 1.0)
    lo = np.floor(x).astype(np.intp)
    hi = np.minimum(lo + 1, n_in - 1)
    return lo, hi, x - lo


def resize_binary(image: BinaryImage, rows: int, cols: int) -> BinaryImage:
    """Bilinear resize of the {0,1} field, re-thresholded at 0.5 (ties -> ink)."""
    if rows < 1 or cols < 1:
        raise ValidationError(f"target size must be positive, got {rows}x{cols}")
    field = image.bits.astype(np.float64)
    c_lo, c_hi, c_w = _sample_axis(image.width, cols)
    tmp = field[:, c_lo] * (1.0 - c_w) + field[:, c_hi] * c_w
    r_lo, r_hi, r_w = _sample_axis(image.height, rows)
    out = tmp[r_lo, :] * (1.0 - r_w)[:, None] + tmp[r_hi, :] * r_w[:, None]
    return BinaryImage(np.where(out >= 0.5, 1, 0))


def resize_to_template(image: BinaryImage) -> BinaryImage:
    """Rescale a character crop to the 46x26 template grid."""
    return resize_binary(image, TEMPLATE_ROWS, TEMPLATE_COLS)
