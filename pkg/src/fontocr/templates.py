"""Multi-font template sets: build from glyph images, persist, validate.

A template set is the packed reference array the matcher scans: one 46x26
binary glyph per (font, label) pair, in fonts-major, alphabet-minor order.
That order is part of the contract (the matcher's tie-break depends on it).
"""

import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .image import BinaryImage, GrayImage, ColorImage, binarize, to_grayscale
from .netpbm import load_image
from .segment import TEMPLATE_COLS, TEMPLATE_ROWS, resize_to_template

__all__ = [
    "FONTS",
    "FONT_DISPLAY",
    "ALPHABET",
    "GlyphTemplate",
    "TemplateSet",
    "build_template_set",
    "save_template_set",
    "load_template_set",
    "describe_template_set",
]

FONTS = ("Arial", "ComicSansMS", "TimesNewRoman")
FONT_DISPLAY = {
    "Arial": "Arial",
    "ComicSansMS": "Comic Sans MS",
    "TimesNewRoman": "Times New Roman",
}
ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"

_MAGIC = b"FTSET\x00"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class GlyphTemplate:
    """One reference glyph: font, character label, 46x26 binary bitmap."""

    font: str
    label: str
    bits: BinaryImage

    def __post_init__(self):
        if (self.bits.height, self.bits.width) != (TEMPLATE_ROWS, TEMPLATE_COLS):
            raise ValidationError(
                f"template {self.font}/{self.label} is {self.bits.height}x{self.bits.width}, "
                f"expected {TEMPLATE_ROWS}x{TEMPLATE_COLS}"
            )
        ink = self.bits.ink_count
        if ink == 0 or ink == TEMPLATE_ROWS * TEMPLATE_COLS:
            raise ValidationError(
                f"template {self.font}/{self.label} is constant; correlation would be undefined"
            )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GlyphTemplate)
            and self.font == other.font
            and self.label == other.label
            and self.bits == other.bits
        )


@dataclass(frozen=True, eq=False)
class TemplateSet:
    """Immutable ordered glyph collection, fonts-major then alphabet-minor."""

    glyphs: tuple[GlyphTemplate, ...]
    fonts: tuple[str, ...] = FONTS
    alphabet: str = ALPHABET
    _stacked: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        expected = [(f, c) for f in self.fonts for c in self.alphabet]
        if len(self.glyphs) != len(expected):
            raise ValidationError(
                f"template set has {len(self.glyphs)} glyphs, expected "
                f"{len(self.fonts)} fonts x {len(self.alphabet)} labels = {len(expected)}"
            )
        actual = [(g.font, g.label) for g in self.glyphs]
        if actual != expected:
            raise ValidationError("template set is not in canonical (font-major) order or has bad pairs")

    def __len__(self) -> int:
        return len(self.glyphs)

    def __getitem__(self, index: int) -> GlyphTemplate:
        return self.glyphs[index]

    def index(self, font: str, label: str) -> int:
        return self.fonts.index(font) * len(self.alphabet) + self.alphabet.index(label)

    def stacked(self) -> np.ndarray:
        """All glyph bitmaps as one (n, 46, 26) float array, cached."""
        if not self._stacked:
            arr = np.stack([g.bits.bits for g in self.glyphs]).astype(np.float64)
            arr.setflags(write=False)
            self._stacked.append(arr)
        return self._stacked[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TemplateSet)
            and self.fonts == other.fonts
            and self.alphabet == other.alphabet
            and self.glyphs == other.glyphs
        )


def _glyph_from_image(image, font: str, label: str) -> GlyphTemplate:
    if isinstance(image, ColorImage):
        image = to_grayscale(image)
    if isinstance(image, GrayImage):
        image = binarize(image, 0.5)
    if (image.height, image.width) != (TEMPLATE_ROWS, TEMPLATE_COLS):
        image = resize_to_template(image)
    return GlyphTemplate(font, label, image)


def _parse_manifest(manifest_path: Path) -> list[tuple[str, str, str]]:
    records = []
    for lineno, raw in enumerate(manifest_path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValidationError(
                f"{manifest_path}:{lineno}: expected 'font<TAB>label<TAB>path', got {raw!r}"
            )
        records.append((parts[0], parts[1], parts[2]))
    return records


def build_template_set(
    glyph_dir,
    manifest,
    fonts: tuple[str, ...] = FONTS,
    alphabet: str = ALPHABET,
) -> TemplateSet:
    """Assemble a template set from per-glyph images listed in a manifest.

    The manifest is line-oriented UTF-8: ``font<TAB>label<TAB>relative-path``
    with ``#`` comments. Every (font, label) pair in ``fonts x alphabet``
    must appear exactly once.
    """
    glyph_dir = Path(glyph_dir)
    seen: dict[tuple[str, str], GlyphTemplate] = {}
    for font, label, relpath in _parse_manifest(Path(manifest)):
        if font not in fonts or label not in alphabet:
            raise ValidationError(f"manifest names unknown pair {font}/{label}")
        if (font, label) in seen:
            raise ValidationError(f"manifest lists {font}/{label} twice")
        seen[(font, label)] = _glyph_from_image(load_image(glyph_dir / relpath), font, label)
    missing = [(f, c) for f in fonts for c in alphabet if (f, c) not in seen]
    if missing:
        raise ValidationError(
            "manifest is missing glyphs: " + ", ".join(f"{f}/{c}" for f, c in missing)
        )
    ordered = tuple(seen[(f, c)] for f in fonts for c in alphabet)
    return TemplateSet(ordered, tuple(fonts), alphabet)


def _header_bytes(tset: TemplateSet) -> bytes:
    fonts_blob = "\t".join(tset.fonts).encode("utf-8")
    alpha_blob = tset.alphabet.encode("utf-8")
    return b"".join(
        [
            _MAGIC,
            bytes([_VERSION]),
            struct.pack(">HH", TEMPLATE_ROWS, TEMPLATE_COLS),
            struct.pack(">H", len(fonts_blob)),
            fonts_blob,
            struct.pack(">H", len(alpha_blob)),
            alpha_blob,
            struct.pack(">I", len(tset)),
        ]
    )


def save_template_set(tset: TemplateSet, path):
    """Write the versioned binary template-set file.

    Layout: magic 'FTSET\\0', version byte, rows/cols (u16 BE), font list and
    alphabet (length-prefixed UTF-8), glyph count (u32 BE), then per glyph the
    row-major bits packed big-endian within bytes, and finally a SHA-256
    checksum of everything before it.
    """
    body = _header_bytes(tset)
    for glyph in tset.glyphs:
        body += np.packbits(glyph.bits.bits.ravel()).tobytes()
    Path(path).write_bytes(body + hashlib.sha256(body).digest())


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(f"template file truncated while reading {what}", offset=self.pos)
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u16(self, what: str) -> int:
        return struct.unpack(">H", self.take(2, what))[0]

    def u32(self, what: str) -> int:
        return struct.unpack(">I", self.take(4, what))[0]


def _read_header(reader: _Reader) -> dict:
    if reader.take(len(_MAGIC), "magic") != _MAGIC:
        raise FormatError("not a template-set file (bad magic)", offset=0)
    version = reader.take(1, "version")[0]
    if version != _VERSION:
        raise FormatError(f"unsupported template-set version {version}", offset=6)
    rows = reader.u16("rows")
    cols = reader.u16("cols")
    fonts = tuple(reader.take(reader.u16("font list length"), "font list").decode("utf-8").split("\t"))
    alphabet = reader.take(reader.u16("alphabet length"), "alphabet").decode("utf-8")
    count = reader.u32("glyph count")
    return {"rows": rows, "cols": cols, "fonts": fonts, "alphabet": alphabet, "count": count}


def load_template_set(path) -> TemplateSet:
    """Read a file produced by :func:`save_template_set`; round trip is bit-exact."""
    data = Path(path).read_bytes()
    if len(data) < 32:
        raise FormatError("template file truncated", offset=len(data))
    body, digest = data[:-32], data[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise FormatError("template file checksum mismatch", offset=len(body))
    reader = _Reader(body)
    header = _read_header(reader)
    rows, cols = header["rows"], header["cols"]
    if (rows, cols) != (TEMPLATE_ROWS, TEMPLATE_COLS):
        raise FormatError(f"unsupported template size {rows}x{cols}", offset=7)
    expected = len(header["fonts"]) * len(header["alphabet"])
    if header["count"] != expected:
        raise FormatError(f"glyph count {header['count']} does not match header ({expected})")
    packed_len = (rows * cols + 7) // 8
    glyphs = []
    for font in header["fonts"]:
        for label in header["alphabet"]:
            packed = np.frombuffer(reader.take(packed_len, f"glyph {font}/{label}"), dtype=np.uint8)
            bits = np.unpackbits(packed)[: rows * cols].reshape(rows, cols)
            glyphs.append(GlyphTemplate(font, label, BinaryImage(bits)))
    if reader.pos != len(body):
        raise FormatError("trailing bytes after glyph data", offset=reader.pos)
    return TemplateSet(tuple(glyphs), header["fonts"], header["alphabet"])


def describe_template_set(path) -> dict:
    """Header summary (fonts, alphabet, count) with the checksum verified."""
    data = Path(path).read_bytes()
    if len(data) < 32 or hashlib.sha256(data[:-32]).digest() != data[-32:]:
        raise FormatError("template file checksum mismatch", offset=max(len(data) - 32, 0))
    return _read_header(_Reader(data[:-32]))
