"""Raster types and pixel-level operations: grayscale, binarize, Otsu, median."""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ValidationError

__all__ = [
    "GrayImage",
    "ColorImage",
    "BinaryImage",
    "to_grayscale",
    "binarize",
    "binary_to_gray",
    "otsu_threshold",
    "median_filter_3x3",
]

# ITU-R BT.601 luma weights.
_LUMA = np.array([0.2989, 0.5870, 0.1140])


def _frozen(array: np.ndarray, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Single-channel raster, intensities 0..255, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.size == 0:
            raise ValidationError(f"grayscale image must be 2-D and non-empty, got shape {pixels.shape}")
        if pixels.min() < 0 or pixels.max() > 255:
            raise ValidationError("grayscale intensities must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(pixels, np.uint8))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class ColorImage:
    """Three-channel RGB raster, shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.shape[0] == 0 or pixels.shape[1] == 0:
            raise ValidationError(f"color image must have shape (h, w, 3), got {pixels.shape}")
        if pixels.min() < 0 or pixels.max() > 255:
            raise ValidationError("color intensities must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(pixels, np.uint8))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, ColorImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Bi-level raster; 1 = ink (foreground), 0 = background."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.size == 0:
            raise ValidationError(f"binary image must be 2-D and non-empty, got shape {bits.shape}")
        if not np.isin(bits, (0, 1)).all():
            raise ValidationError("binary image values must be exactly 0 or 1")
        object.__setattr__(self, "bits", _frozen(bits, np.uint8))

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def ink_count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryImage) and np.array_equal(self.bits, other.bits)


def to_grayscale(image: ColorImage) -> GrayImage:
    """Convert RGB to grayscale with BT.601 luma, rounding halves up."""
    luma = image.pixels.astype(np.float64) @ _LUMA
    return GrayImage(np.clip(np.floor(luma + 0.5), 0, 255))


def binarize(image: GrayImage, threshold: float = 0.5) -> BinaryImage:
    """Threshold a grayscale image and normalize to the ink-is-1 convention.

    Pixels brighter than ``threshold * 255`` are background; everything else
    (the dark text) becomes ink.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValidationError(f"binarization threshold must lie in [0, 1], got {threshold}")
    bright = image.pixels.astype(np.float64) > threshold * 255.0
    return BinaryImage(np.where(bright, 0, 1))


def binary_to_gray(image: BinaryImage) -> GrayImage:
    """Render ink as black (0) on a white (255) background."""
    return GrayImage(np.where(image.bits == 1, 0, 255))


def otsu_threshold(image: GrayImage) -> float:
    """Pick the global threshold maximizing between-class variance.

    Candidate thresholds are the 256 intensity bins; a candidate ``t`` puts
    intensities <= t in the dark class. Ties go to the lowest bin and the
    result is returned as ``t / 255`` so it can feed :func:`binarize`
    directly. A constant image has no split, so 0.5 is returned by
    convention.
    """
    hist = np.bincount(image.pixels.ravel(), minlength=256).astype(np.float64)
    if np.count_nonzero(hist) <= 1:
        return 0.5
    total = hist.sum()
    bins = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)
    sum0 = np.cumsum(bins * hist)
    w1 = total - w0
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = sum0 / w0
        mu1 = (sum0[-1] - sum0) / w1
        variance = w0 * w1 * (mu0 - mu1) ** 2
    variance = np.where((w0 == 0) | (w1 == 0), 0.0, variance)
    return int(np.argmax(variance)) / 255.0


def median_filter_3x3(image: GrayImage) -> GrayImage:
    """3x3 median filter with edge replication at the borders."""
    return GrayImage(ndimage.median_filter(image.pixels, size=3, mode="nearest"))
