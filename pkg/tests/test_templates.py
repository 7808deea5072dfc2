import numpy as np
import pytest

from fontocr import (
    ALPHABET,
    FONTS,
    BinaryImage,
    FormatError,
    GlyphTemplate,
    TemplateSet,
    ValidationError,
    build_template_set,
    corr2,
    describe_template_set,
    load_template_set,
    save_image,
    save_template_set,
)


def glyph_bits(seed: int) -> BinaryImage:
    rng = np.random.default_rng(seed)
    bits = (rng.random((46, 26)) < 0.4).astype(np.uint8)
    bits[0, 0] = 1
    bits[-1, -1] = 0
    return BinaryImage(bits)


def make_set(fonts=("FontA", "FontB"), alphabet="XY") -> TemplateSet:
    glyphs = tuple(
        GlyphTemplate(f, c, glyph_bits(hash((f, c)) % 2**32))
        for f in fonts
        for c in alphabet
    )
    return TemplateSet(glyphs, fonts, alphabet)


def write_glyph_tree(tmp_path, fonts, alphabet, skip=(), duplicate=None, constant=()):
    lines = []
    for font in fonts:
        for label in alphabet:
            if (font, label) in skip:
                continue
            rel = f"{font}_{label}.pbm"
            image = (
                BinaryImage(np.ones((46, 26), dtype=np.uint8))
                if (font, label) in constant
                else glyph_bits(hash((font, label)) % 2**32)
            )
            save_image(image, tmp_path / rel)
            lines.append(f"{font}\t{label}\t{rel}")
            if duplicate == (font, label):
                lines.append(f"{font}\t{label}\t{rel}")
    manifest = tmp_path / "manifest.tsv"
    manifest.write_text("# fixture\n" + "\n".join(lines) + "\n", encoding="utf-8")
    return manifest


class TestGlyphTemplate:
    def test_dimensions_enforced(self):
        with pytest.raises(ValidationError):
            GlyphTemplate("F", "A", BinaryImage(np.ones((10, 10), dtype=np.uint8)))

    def test_constant_glyph_rejected(self):
        with pytest.raises(ValidationError):
            GlyphTemplate("F", "A", BinaryImage(np.zeros((46, 26), dtype=np.uint8)))
        with pytest.raises(ValidationError):
            GlyphTemplate("F", "A", BinaryImage(np.ones((46, 26), dtype=np.uint8)))


class TestTemplateSet:
    def test_size_must_match_fonts_times_alphabet(self):
        base = make_set()
        with pytest.raises(ValidationError):
            TemplateSet(base.glyphs[:-1], base.fonts, base.alphabet)

    def test_order_is_fonts_major(self):
        base = make_set()
        swapped = (base.glyphs[1], base.glyphs[0]) + base.glyphs[2:]
        with pytest.raises(ValidationError):
            TemplateSet(swapped, base.fonts, base.alphabet)

    def test_index_follows_canonical_order(self):
        tset = make_set()
        assert tset.index("FontA", "X") == 0
        assert tset.index("FontB", "Y") == 3
        assert tset[3].font == "FontB" and tset[3].label == "Y"


class TestBuild:
    def test_full_default_set(self, glyph_dir, manifest_path):
        tset = build_template_set(glyph_dir, manifest_path)
        assert len(tset) == 108  # 3 fonts x 36 labels
        assert tset.fonts == FONTS
        assert tset.alphabet == ALPHABET

    def test_missing_pair_named(self, tmp_path):
        manifest = write_glyph_tree(tmp_path, ("F1", "F2"), "AB", skip=[("F2", "B")])
        with pytest.raises(ValidationError, match="F2/B"):
            build_template_set(tmp_path, manifest, ("F1", "F2"), "AB")

    def test_duplicate_pair_rejected(self, tmp_path):
        manifest = write_glyph_tree(tmp_path, ("F1",), "AB", duplicate=("F1", "A"))
        with pytest.raises(ValidationError, match="twice"):
            build_template_set(tmp_path, manifest, ("F1",), "AB")

    def test_constant_glyph_rejected(self, tmp_path):
        manifest = write_glyph_tree(tmp_path, ("F1",), "AB", constant=[("F1", "B")])
        with pytest.raises(ValidationError, match="constant"):
            build_template_set(tmp_path, manifest, ("F1",), "AB")

    def test_unknown_pair_rejected(self, tmp_path):
        manifest = write_glyph_tree(tmp_path, ("F1",), "ABC")
        with pytest.raises(ValidationError, match="unknown pair"):
            build_template_set(tmp_path, manifest, ("F1",), "AB")


class TestPersistence:
    def test_round_trip_bit_exact(self, tmp_path):
        tset = make_set()
        path = tmp_path / "set.ftset"
        save_template_set(tset, path)
        assert load_template_set(path) == tset

    def test_full_set_round_trip(self, template_set, tmp_path):
        path = tmp_path / "full.ftset"
        save_template_set(template_set, path)
        loaded = load_template_set(path)
        assert loaded == template_set
        assert [g.label for g in loaded.glyphs] == [g.label for g in template_set.glyphs]

    def test_header_reports_count(self, template_set, tmp_path):
        path = tmp_path / "full.ftset"
        save_template_set(template_set, path)
        info = describe_template_set(path)
        assert info["count"] == 108
        assert info["fonts"] == FONTS
        assert (info["rows"], info["cols"]) == (46, 26)

    def test_flipped_magic_rejected(self, tmp_path):
        path = tmp_path / "set.ftset"
        save_template_set(make_set(), path)
        data = bytearray(path.read_bytes())
        data[0] ^= 0xFF
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError):
            load_template_set(path)

    def test_corrupted_payload_fails_checksum(self, tmp_path):
        path = tmp_path / "set.ftset"
        save_template_set(make_set(), path)
        data = bytearray(path.read_bytes())
        data[40] ^= 0x01
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError, match="checksum"):
            load_template_set(path)

    def test_truncated_file_rejected(self, tmp_path):
        path = tmp_path / "set.ftset"
        save_template_set(make_set(), path)
        path.write_bytes(path.read_bytes()[:-40])
        with pytest.raises(FormatError):
            load_template_set(path)


class TestSetQuality:
    def test_every_glyph_self_correlates_to_one(self, template_set):
        for glyph in template_set.glyphs:
            assert corr2(glyph.bits, glyph.bits) == pytest.approx(1.0, abs=1e-12)

    def test_all_bitmaps_distinct(self, template_set):
        seen = {g.bits.bits.tobytes() for g in template_set.glyphs}
        assert len(seen) == len(template_set)
