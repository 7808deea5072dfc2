"""Building and saving a glyph template set
===========================================

Assembles the 108-glyph reference set (3 fonts x 36 labels) from the PBM
images under assets/glyphs/, persists it, and peeks inside.
"""

from pathlib import Path

from fontocr import build_template_set, describe_template_set, save_template_set

ROOT = Path(__file__).resolve().parent.parent
GLYPHS = ROOT / "assets" / "glyphs"

tset = build_template_set(GLYPHS, GLYPHS / "manifest.tsv")
print(f"built {len(tset)} templates for fonts {', '.join(tset.fonts)}")

out = ROOT / "demos" / "default.ftset"
save_template_set(tset, out)
print(f"saved to {out} ({out.stat().st_size} bytes)")

info = describe_template_set(out)
print(f"header says: {info['count']} glyphs at {info['rows']}x{info['cols']}, alphabet {info['alphabet']}")

# Render one template as ASCII art.
glyph = tset[tset.index("Arial", "A")]
print(f"\n{glyph.font}/{glyph.label}:")
for row in glyph.bits.bits[::2]:
    print("".join("#" if bit else "." for bit in row))
