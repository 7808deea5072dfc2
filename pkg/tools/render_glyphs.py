"""Regenerate the glyph assets under assets/glyphs/.

Renders each (font, label) pair from locally installed TrueType faces,
normalizes to the 46x26 template grid through the package's own binarize
and resize, validates the whole set, and writes plain PBM files plus the
manifest. The three commercial font names are stood in for by DejaVu faces
with matching roles (sans / casual-oblique / serif).

Run from the repository root: python tools/render_glyphs.py
"""

import sys
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw, ImageFont
from scipy import ndimage

from fontocr.image import BinaryImage, GrayImage, binarize, median_filter_3x3
from fontocr.match import GlyphClassifier
from fontocr.netpbm import save_image
from fontocr.segment import (
    TEMPLATE_COLS,
    TEMPLATE_ROWS,
    SegmentationParams,
    crop,
    remove_small_components,
    resize_binary,
    resize_to_template,
    segment_page,
)
from fontocr.templates import ALPHABET, FONTS, GlyphTemplate, TemplateSet

FONT_DIRS = [
    Path("/usr/share/fonts/truetype/dejavu"),
]
try:
    import matplotlib

    FONT_DIRS.append(Path(matplotlib.get_data_path()) / "fonts" / "ttf")
except ImportError:
    pass

# Stand-in faces with a per-face outline width (render pixels), in
# preference order per font label. A bare-stem sans 'I' tightens to a solid
# rectangle (constant template), so the sans role uses the mono face, whose
# 'I' carries crossbars. The outline keeps every stroke several pixels wide
# after the drop to 46x26 (the median prefilter and sub-unit size scales
# both need that) while leaving counters open enough that near-twins like
# B/8 stay separable.
FACES = {
    "Arial": (["DejaVuSansMono.ttf"], 3),
    "ComicSansMS": (["DejaVuSans-BoldOblique.ttf", "DejaVuSansMono-BoldOblique.ttf"], 2),
    "TimesNewRoman": (["DejaVuSerif-Bold.ttf"], 4),
}

RENDER_PX = 330
CANVAS = RENDER_PX + RENDER_PX // 2


def find_face(names: list[str]) -> Path:
    for name in names:
        for directory in FONT_DIRS:
            candidate = directory / name
            if candidate.exists():
                return candidate
    raise SystemExit(f"none of {names} found under {[str(d) for d in FONT_DIRS]}")


def tighten(bits: np.ndarray) -> np.ndarray:
    rows = np.flatnonzero(bits.any(axis=1))
    cols = np.flatnonzero(bits.any(axis=0))
    return bits[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1]


def render_glyph(char: str, face: ImageFont.FreeTypeFont, stroke: int) -> BinaryImage:
    canvas = Image.new("L", (CANVAS, CANVAS), 255)
    ImageDraw.Draw(canvas).text(
        (RENDER_PX // 6, RENDER_PX // 6), char, font=face, fill=0,
        stroke_width=stroke, stroke_fill=0,
    )
    bits = binarize(GrayImage(np.asarray(canvas)), 0.5).bits
    if not bits.any():
        raise SystemExit(f"glyph {char!r} rendered empty")
    template = resize_binary(BinaryImage(tighten(bits)), TEMPLATE_ROWS, TEMPLATE_COLS)
    # Resizing can shave edge ink; re-tighten and resize until stable so the
    # template spans the full 46x26 grid (exact self-recognition needs that).
    for _ in range(4):
        tightened = tighten(template.bits)
        if tightened.shape == template.bits.shape:
            return template
        template = resize_binary(BinaryImage(tightened), TEMPLATE_ROWS, TEMPLATE_COLS)
    raise SystemExit(f"glyph {char!r} did not stabilize to the full template grid")


def validate(templates: dict[tuple[str, str], BinaryImage]):
    problems = []
    seen: dict[bytes, tuple[str, str]] = {}
    for (font, label), template in templates.items():
        bits = template.bits
        name = f"{font}/{label}"
        if not (0 < bits.sum() < bits.size):
            problems.append(f"{name}: constant bitmap")
        if not bits.any(axis=0).all():
            problems.append(f"{name}: blank interior column (glyph would split)")
        if not (bits[0].any() and bits[-1].any() and bits[:, 0].any() and bits[:, -1].any()):
            problems.append(f"{name}: does not span the full grid")
        labels, count = ndimage.label(bits, structure=np.ones((3, 3)))
        sizes = np.bincount(labels.ravel())[1:]
        if count and sizes.min() < 25:
            problems.append(f"{name}: component of {sizes.min()} px would be erased as noise")
        key = bits.tobytes()
        if key in seen:
            problems.append(f"{name}: identical bitmap to {seen[key]}")
        seen[key] = (font, label)
    if problems:
        raise SystemExit("validation failed:\n  " + "\n  ".join(problems))
    _check_median_survival(templates)


def _check_median_survival(templates: dict[tuple[str, str], BinaryImage]):
    # Every glyph, pasted on a page and run through the median prefilter and
    # the 25 px component cutoff, must still classify as itself.
    tset = TemplateSet(
        tuple(GlyphTemplate(f, c, templates[(f, c)]) for f in FONTS for c in ALPHABET)
    )
    classifier = GlyphClassifier(tset)
    problems = []
    for (font, label), template in templates.items():
        canvas = np.full((TEMPLATE_ROWS + 20, TEMPLATE_COLS + 20), 255, np.uint8)
        canvas[10:-10, 10:-10][template.bits == 1] = 0
        page = remove_small_components(binarize(median_filter_3x3(GrayImage(canvas)), 0.5), 25)
        boxes = [box for line in segment_page(page, SegmentationParams()).lines for box in line.boxes]
        if len(boxes) != 1:
            problems.append(f"{font}/{label}: splits into {len(boxes)} boxes after median filtering")
            continue
        got = classifier.classify(resize_to_template(crop(page, boxes[0])))
        if (got.font, got.label) != (font, label):
            problems.append(
                f"{font}/{label}: classifies as {got.font}/{got.label} "
                f"(score {got.score:.3f}) after median filtering"
            )
    if problems:
        raise SystemExit("median-survival check failed:\n  " + "\n  ".join(problems))


def main():
    out_dir = Path(__file__).resolve().parent.parent / "assets" / "glyphs"
    templates = {}
    for font in FONTS:
        names, stroke = FACES[font]
        face = ImageFont.truetype(str(find_face(names)), RENDER_PX)
        for label in ALPHABET:
            templates[(font, label)] = render_glyph(label, face, stroke)
    validate(templates)

    manifest_lines = ["# font<TAB>label<TAB>relative path"]
    for (font, label), template in templates.items():
        subdir = font.lower()
        (out_dir / subdir).mkdir(parents=True, exist_ok=True)
        rel = f"{subdir}/{label}.pbm"
        save_image(template, out_dir / rel, plain=True)
        manifest_lines.append(f"{font}\t{label}\t{rel}")
    (out_dir / "manifest.tsv").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    print(f"wrote {len(templates)} glyphs + manifest to {out_dir}")


if __name__ == "__main__":
    sys.exit(main())
