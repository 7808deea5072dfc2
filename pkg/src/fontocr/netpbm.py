"""Netpbm (PBM P1/P4, PGM P2/P5) codec plus read-only PNG support.

The Netpbm paths are implemented here byte-for-byte so that decode/encode
round trips are bit-exact; PNG decoding is delegated to Pillow.
"""

import os

import numpy as np

from .errors import FormatError
from .image import BinaryImage, ColorImage, GrayImage

__all__ = ["load_image", "save_image", "decode", "encode"]

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_WHITESPACE = b" \t\r\n\v\f"


class _Cursor:
    """Byte cursor over a Netpbm header with offset tracking for errors."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip_filler(self):
        # Whitespace and '#'-to-end-of-line comments separate header tokens.
        while self.pos < len(self.data):
            byte = self.data[self.pos : self.pos + 1]
            if byte in (b"#",):
                end = self.data.find(b"\n", self.pos)
                self.pos = len(self.data) if end < 0 else end + 1
            elif byte in _WHITESPACE:
                self.pos += 1
            else:
                return

    def token(self, what: str) -> bytes:
        self._skip_filler()
        if self.pos >= len(self.data):
            raise FormatError(f"unexpected end of file while reading {what}", offset=self.pos)
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            self.pos += 1
        return self.data[start : self.pos]

    def int_token(self, what: str, low: int, high: int) -> int:
        start = self.pos
        raw = self.token(what)
        try:
            value = int(raw)
        except ValueError:
            raise FormatError(f"{what} is not a number: {raw!r}", offset=start) from None
        if not low <= value <= high:
            raise FormatError(f"{what} {value} outside [{low}, {high}]", offset=start)
        return value

    def expect_single_whitespace(self):
        if self.pos >= len(self.data) or self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            raise FormatError("expected whitespace before raster data", offset=self.pos)
        self.pos += 1


def _decode_plain_bits(cursor: _Cursor, width: int, height: int) -> BinaryImage:
    # P1 pixels are '0'/'1' characters, optionally run together.
    bits = np.empty(width * height, dtype=np.uint8)
    count = 0
    data = cursor.data
    pos = cursor.pos
    while count < bits.size:
        if pos >= len(data):
            raise FormatError("truncated pixel data", offset=len(data))
        byte = data[pos : pos + 1]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif byte in (b"0", b"1"):
            bits[count] = byte == b"1"
            count += 1
            pos += 1
        else:
            raise FormatError(f"invalid PBM pixel character {byte!r}", offset=pos)
    return BinaryImage(bits.reshape(height, width))


def _decode_plain_grays(cursor: _Cursor, width: int, height: int, maxval: int) -> GrayImage:
    values = np.empty(width * height, dtype=np.float64)
    for i in range(values.size):
        values[i] = cursor.int_token("pixel value", 0, maxval)
    return _scale_grays(values.reshape(height, width), maxval)


def _scale_grays(values: np.ndarray, maxval: int) -> GrayImage:
    if maxval != 255:
        values = np.floor(values * (255.0 / maxval) + 0.5)
    return GrayImage(values)


def _decode_netpbm(data: bytes) -> GrayImage | BinaryImage:
    cursor = _Cursor(data)
    magic = cursor.token("magic number")
    width = cursor.int_token("width", 1, 10**9)
    height = cursor.int_token("height", 1, 10**9)

    if magic == b"P1":
        return _decode_plain_bits(cursor, width, height)
    if magic == b"P2":
        maxval = cursor.int_token("maxval", 1, 255)
        return _decode_plain_grays(cursor, width, height, maxval)
    if magic == b"P4":
        cursor.expect_single_whitespace()
        row_bytes = (width + 7) // 8
        need = row_bytes * height
        raw = data[cursor.pos : cursor.pos + need]
        if len(raw) < need:
            raise FormatError(f"truncated pixel data: need {need} bytes, have {len(raw)}", offset=len(data))
        rows = np.frombuffer(raw, dtype=np.uint8).reshape(height, row_bytes)
        bits = np.unpackbits(rows, axis=1)[:, :width]
        return BinaryImage(bits)
    if magic == b"P5":
        maxval = cursor.int_token("maxval", 1, 255)
        cursor.expect_single_whitespace()
        need = width * height
        raw = data[cursor.pos : cursor.pos + need]
        if len(raw) < need:
            raise FormatError(f"truncated pixel data: need {need} bytes, have {len(raw)}", offset=len(data))
        values = np.frombuffer(raw, dtype=np.uint8).reshape(height, width)
        return _scale_grays(values.astype(np.float64), maxval)
    raise FormatError(f"unsupported Netpbm magic {magic!r}", offset=0)


def decode(data: bytes) -> GrayImage | ColorImage | BinaryImage:
    """Decode raster bytes (Netpbm or PNG)."""
    if data[:2] in (b"P1", b"P2", b"P4", b"P5"):
        return _decode_netpbm(data)
    if data.startswith(_PNG_MAGIC):
        return _decode_png(data)
    raise FormatError("unrecognized image format", offset=0)


def _decode_png(data: bytes) -> GrayImage | ColorImage:
    import io

    from PIL import Image

    try:
        with Image.open(io.BytesIO(data)) as img:
            if img.mode in ("L", "1"):
                return GrayImage(np.asarray(img.convert("L")))
            return ColorImage(np.asarray(img.convert("RGB")))
    except FormatError:
        raise
    except Exception as exc:
        raise FormatError(f"cannot decode PNG: {exc}", offset=0) from exc


def load_image(path) -> GrayImage | ColorImage | BinaryImage:
    """Load a PBM, PGM, or PNG file. PBM 'black' pixels map to ink = 1."""
    with open(path, "rb") as fh:
        return decode(fh.read())


def _chunk_lines(values, per_line: int = 17) -> bytes:
    # Netpbm plain formats cap lines at 70 characters; 17 three-digit
    # values plus separators stays under that.
    lines = []
    for start in range(0, len(values), per_line):
        lines.append(" ".join(str(v) for v in values[start : start + per_line]))
    return ("\n".join(lines) + "\n").encode("ascii")


def encode(image: GrayImage | BinaryImage, plain: bool = False) -> bytes:
    """Encode to PGM (grayscale) or PBM (binary), raw by default."""
    if isinstance(image, BinaryImage):
        header = f"{'P1' if plain else 'P4'}\n{image.width} {image.height}\n".encode("ascii")
        if plain:
            return header + _chunk_lines(image.bits.ravel(), per_line=35)
        return header + np.packbits(image.bits, axis=1).tobytes()
    if isinstance(image, GrayImage):
        header = f"{'P2' if plain else 'P5'}\n{image.width} {image.height}\n255\n".encode("ascii")
        if plain:
            return header + _chunk_lines(image.pixels.ravel())
        return header + image.pixels.tobytes()
    raise TypeError(f"cannot encode {type(image).__name__}; save color images as PNG externally")


def save_image(image: GrayImage | BinaryImage, path, plain: bool = False):
    """Write a PBM/PGM file whose decode round-trips bit-exactly."""
    data = encode(image, plain=plain)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
