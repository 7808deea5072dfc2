"""Segmentation step by step
=========================

Shows how a page falls apart into lines and character boxes: component
filtering, blank-row line splits, blank-column character splits, and the
resize onto the 46x26 template grid.
"""

from pathlib import Path

import numpy as np

from fontocr import (
    GrayImage,
    binarize,
    build_template_set,
    remove_small_components,
    resize_to_template,
    segment_page,
)
from fontocr.segment import SegmentationParams, crop
from fontocr.match import GlyphClassifier

ROOT = Path(__file__).resolve().parent.parent
GLYPHS = ROOT / "assets" / "glyphs"

tset = build_template_set(GLYPHS, GLYPHS / "manifest.tsv")

# Two lines pasted from Comic Sans MS templates plus a 20 px speck of dirt.
canvas = np.full((150, 200), 255, dtype=np.uint8)
for row, text in enumerate(["FOX", "JUMPS"]):
    for col, ch in enumerate(text):
        bits = tset[tset.index("ComicSansMS", ch)].bits.bits
        r0, c0 = 10 + row * 60, 10 + col * 32
        canvas[r0 : r0 + 46, c0 : c0 + 26][bits == 1] = 0
canvas[125:130, 180:184] = 0  # 5x4 = 20 px blob
page = GrayImage(canvas)

bits = binarize(page, 0.5)
print(f"ink pixels after binarization: {bits.ink_count}")

filtered = remove_small_components(bits, 25)
print(f"ink pixels after the 25 px component cutoff: {filtered.ink_count} (speck gone)")

layout = segment_page(filtered, SegmentationParams())
classifier = GlyphClassifier(tset)
for i, line in enumerate(layout.lines):
    print(f"line {i}: rows {line.row_span}")
    for box in line.boxes:
        tile = resize_to_template(crop(filtered, box))
        cls = classifier.classify(tile)
        print(f"  cols {box.left:>3}-{box.right:<3} -> {cls.label} ({cls.font}, corr {cls.score:.3f})")
