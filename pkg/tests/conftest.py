from pathlib import Path

import pytest

from fontocr import build_template_set

REPO_ROOT = Path(__file__).resolve().parent.parent
GLYPH_DIR = REPO_ROOT / "assets" / "glyphs"
MANIFEST = GLYPH_DIR / "manifest.tsv"


@pytest.fixture(scope="session")
def glyph_dir() -> Path:
    return GLYPH_DIR


@pytest.fixture(scope="session")
def manifest_path() -> Path:
    return MANIFEST


@pytest.fixture(scope="session")
def template_set():
    return build_template_set(GLYPH_DIR, MANIFEST)
