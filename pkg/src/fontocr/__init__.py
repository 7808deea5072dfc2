"""Template-matching OCR: font identification and text recovery from noisy scans.

Recognition is plain 2-D correlation against stored 46x26 binary glyph
templates for three reference fonts, after binarization and gap-based
line/character segmentation. A noise-injection harness measures recovery
rates under salt & pepper, gaussian, and speckle noise.
"""

from .errors import FontOcrError, FormatError, ValidationError
from .evaluate import (
    CorpusSpec,
    EvalOutcome,
    EvalRow,
    NoiseSpec,
    add_noise,
    emit_csv,
    evaluate,
    evaluate_row,
    render_corpus,
    run_grid,
)
from .image import (
    BinaryImage,
    ColorImage,
    GrayImage,
    binarize,
    binary_to_gray,
    median_filter_3x3,
    otsu_threshold,
    to_grayscale,
)
from .match import Classification, GlyphClassifier, MatchScore, classify_glyph, corr2
from .netpbm import load_image, save_image
from .recognize import (
    DocumentResult,
    FontTally,
    GlyphResult,
    decide_font,
    read_structured,
    recognize_document,
    write_report,
    write_structured,
)
from .segment import (
    BoundingBox,
    PageLayout,
    SegmentationParams,
    TextLine,
    remove_small_components,
    resize_binary,
    resize_to_template,
    segment_page,
    split_chars,
    split_lines,
)
from .templates import (
    ALPHABET,
    FONT_DISPLAY,
    FONTS,
    GlyphTemplate,
    TemplateSet,
    build_template_set,
    describe_template_set,
    load_template_set,
    save_template_set,
)

__version__ = "0.1.0"
