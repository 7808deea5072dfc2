"""Recognizing a document page
==============================

Composes a page by pasting Times New Roman templates, runs the full
pipeline, and writes the two report formats.
"""

from pathlib import Path

import numpy as np

from fontocr import (
    GrayImage,
    build_template_set,
    recognize_document,
    write_report,
    write_structured,
)
from fontocr.segment import TEMPLATE_COLS, TEMPLATE_ROWS

ROOT = Path(__file__).resolve().parent.parent
GLYPHS = ROOT / "assets" / "glyphs"

tset = build_template_set(GLYPHS, GLYPHS / "manifest.tsv")

# Paste "TEMPLATE MATCHING" as black-on-white. A 20 px inter-word gap is
# wider than the 13 px space cutoff, so it comes back as a space.
lines = ["TEMPLATE MATCHING", "OCR DEMO 2024"]
gap_x, gap_y, margin = 5, 14, 12
width = 2 * margin + max(len(l) for l in lines) * (TEMPLATE_COLS + gap_x)
height = 2 * margin + len(lines) * (TEMPLATE_ROWS + gap_y)
canvas = np.full((height, width), 255, dtype=np.uint8)
for row, line in enumerate(lines):
    col = margin
    for ch in line:
        if ch == " ":
            col += 20
            continue
        bits = tset[tset.index("TimesNewRoman", ch)].bits.bits
        r0 = margin + row * (TEMPLATE_ROWS + gap_y)
        canvas[r0 : r0 + TEMPLATE_ROWS, col : col + TEMPLATE_COLS][bits == 1] = 0
        col += TEMPLATE_COLS + gap_x
page = GrayImage(canvas)

result = recognize_document(page, tset)
print(f"font vote: {result.tally.counts} -> {result.font}")
for line in result.lines:
    print(f"  {line}")
print(f"glyph scores: min {min(g.score for g in result.glyphs):.4f}")

write_report(result, ROOT / "demos" / "DSP.txt")
write_structured(result, ROOT / "demos" / "DSP.json")
print("wrote demos/DSP.txt and demos/DSP.json")
