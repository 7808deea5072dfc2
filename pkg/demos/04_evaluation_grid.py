"""The font x size evaluation grid
==================================

Runs the 3 fonts x 3 sizes grid under default salt & pepper noise and
prints the results table (same layout the CSV export uses).
"""

from pathlib import Path

from fontocr import NoiseSpec, build_template_set, emit_csv, run_grid
from fontocr.templates import FONT_DISPLAY

ROOT = Path(__file__).resolve().parent.parent
GLYPHS = ROOT / "assets" / "glyphs"

tset = build_template_set(GLYPHS, GLYPHS / "manifest.tsv")

rows = run_grid(tset, char_count=300, corpus_seed=0, noise=NoiseSpec(seed=0), repeats=2)

print(f"{'font':<16} {'size':>4} {'total':>6} {'D unf':>6} {'S% unf':>7} {'D fil':>6} {'S% fil':>7}")
for r in rows:
    print(
        f"{FONT_DISPLAY[r.font]:<16} {r.size:>4} {r.total:>6} "
        f"{r.detected_unfiltered:>6} {r.success_unfiltered:>7.2f} "
        f"{r.detected_filtered:>6} {r.success_filtered:>7.2f}"
    )

emit_csv(rows, ROOT / "demos" / "results.csv")
print("\nwrote demos/results.csv")
