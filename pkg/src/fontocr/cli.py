"""Command-line interface: template building, recognition, noise, evaluation.

Exit codes: 0 success, 2 usage (bad flags), 3 I/O failure, 4 validation or
format failure. Flags are validated before any work starts, and no output
file is written on a nonzero exit.
"""

import argparse
import sys
from pathlib import Path

from .errors import FormatError, ValidationError
from .evaluate import NoiseSpec, add_noise, emit_csv, run_grid
from .image import BinaryImage, ColorImage, binary_to_gray, to_grayscale
from .match import DEFAULT_THRESHOLD
from .netpbm import load_image, save_image
from .recognize import recognize_document, write_report, write_structured
from .segment import SegmentationParams
from .templates import (
    ALPHABET,
    FONT_DISPLAY,
    FONTS,
    build_template_set,
    describe_template_set,
    load_template_set,
    save_template_set,
)

__all__ = ["main", "entry"]

_USAGE, _IO, _INVALID = 2, 3, 4

# Flags that must arrive either on the command line or through --config.
_REQUIRED = {
    "build-templates": ("glyphs", "manifest", "out"),
    "recognize": ("templates",),
    "noise": ("out",),
    "evaluate": ("templates", "out"),
}


def _range_float(low: float, high: float, name: str):
    def parse(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not low <= value <= high:
            raise argparse.ArgumentTypeError(f"{name} must lie in [{low}, {high}], got {value}")
        return value

    return parse


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"value must be >= 0, got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"value must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be >= 0, got {value}")
    return value


def _noise_kind(text: str) -> str:
    kind = text.replace("-", "_")
    if kind not in ("salt_pepper", "gaussian", "speckle"):
        raise argparse.ArgumentTypeError(f"unknown noise kind {text!r}")
    return kind


def _font_list(text) -> tuple[str, ...]:
    if isinstance(text, tuple):
        return text
    fonts = tuple(part.strip() for part in text.split(",") if part.strip())
    if not fonts:
        raise argparse.ArgumentTypeError("font list is empty")
    return fonts


def _scale_list(text) -> tuple[float, ...]:
    if isinstance(text, tuple):
        return text
    try:
        scales = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad scale list {text!r}") from None
    if not scales or any(not 0.0 < s <= 2.0 for s in scales):
        raise argparse.ArgumentTypeError("every scale must lie in (0, 2]")
    return scales


def _parse_bool(text) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _add_noise_flags(p: argparse.ArgumentParser):
    p.add_argument("--kind", type=_noise_kind, default="salt_pepper",
                   help="noise model: salt_pepper, gaussian, or speckle")
    p.add_argument("--density", type=_range_float(0.0, 1.0, "density"), default=0.05,
                   help="salt & pepper corruption probability")
    p.add_argument("--sigma", type=_nonneg_float, default=25.5,
                   help="gaussian std-dev on the 0..255 scale")
    p.add_argument("--variance", type=_nonneg_float, default=0.05,
                   help="speckle multiplicative variance")


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="fontocr",
        description="Template-matching OCR: font identification and text recovery.",
    )
    parser.add_argument("--config", metavar="FILE", help="key=value file supplying flag defaults")
    subs = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    registry: dict[str, argparse.ArgumentParser] = {}

    def sub(name: str, help_text: str) -> argparse.ArgumentParser:
        p = subs.add_parser(name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        registry[name] = p
        return p

    p = sub("build-templates", "assemble a template set from glyph images")
    p.add_argument("--glyphs", default=None, help="directory containing the glyph images")
    p.add_argument("--manifest", default=None, help="font<TAB>label<TAB>path manifest file")
    p.add_argument("--out", default=None, help="template-set file to write")
    p.add_argument("--fonts", type=_font_list, default=FONTS, help="comma-separated font labels")
    p.add_argument("--alphabet", default=ALPHABET, help="glyph labels, one character each")
    p.set_defaults(func=_cmd_build_templates)

    p = sub("inspect-templates", "print the header of a template-set file")
    p.add_argument("templates", help="template-set file")
    p.set_defaults(func=_cmd_inspect_templates)

    p = sub("recognize", "recover text and font from a document image")
    p.add_argument("image", help="input raster (PBM, PGM, or PNG)")
    p.add_argument("--templates", default=None, help="template-set file")
    p.add_argument("--report", default="DSP.txt", help="text report path")
    p.add_argument("--structured", default=None, help="optional machine-readable report path")
    p.add_argument("--threshold", type=_range_float(-1.0, 1.0, "threshold"), default=DEFAULT_THRESHOLD,
                   help="rejection threshold for the best correlation")
    p.add_argument("--binarize-threshold", type=_range_float(0.0, 1.0, "binarize-threshold"), default=0.5,
                   help="binarization threshold as a fraction of full scale")
    p.add_argument("--otsu", action="store_true", help="pick the binarization threshold automatically")
    p.add_argument("--prefilter", action=argparse.BooleanOptionalAction, default=False,
                   help="run the 3x3 median prefilter before binarization")
    p.add_argument("--min-area", type=_positive_int, default=25, help="small-component removal cutoff")
    p.add_argument("--line-gap", type=_positive_int, default=1, help="blank-row run that splits lines")
    p.add_argument("--char-gap", type=_positive_int, default=1, help="blank-column run that splits characters")
    p.add_argument("--space-gap", type=_positive_int, default=13, help="blank-column run that emits a space")
    p.set_defaults(func=_cmd_recognize)

    p = sub("noise", "inject noise into an image")
    p.add_argument("image", help="input raster (PBM, PGM, or PNG)")
    p.add_argument("--out", default=None, help="output PGM path")
    _add_noise_flags(p)
    p.add_argument("--seed", type=_seed, default=0, help="noise RNG seed")
    p.set_defaults(func=_cmd_noise)

    p = sub("evaluate", "run the noise-robustness grid and write a CSV")
    p.add_argument("--templates", default=None, help="template-set file")
    p.add_argument("--out", default=None, help="CSV path")
    p.add_argument("--fonts", type=_font_list, default=FONTS, help="comma-separated font labels")
    p.add_argument("--scales", type=_scale_list, default=(0.6, 0.8, 1.0), help="comma-separated size scales")
    p.add_argument("--chars", type=_positive_int, default=200, help="glyphs rendered per grid cell")
    p.add_argument("--corpus-seed", type=_seed, default=0, help="glyph-sequence RNG seed")
    p.add_argument("--noise-seed", type=_seed, default=0, help="noise RNG seed")
    p.add_argument("--repeats", type=_positive_int, default=1, help="seeds aggregated per cell")
    _add_noise_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    return parser, registry


def _extract_config_path(argv: list[str]) -> str | None:
    for i, arg in enumerate(argv):
        if arg == "--config":
            return argv[i + 1] if i + 1 < len(argv) else None
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def _read_config(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _apply_config(registry: dict[str, argparse.ArgumentParser], entries: dict[str, str]):
    # Config supplies defaults only; explicit flags still win.
    known = set()
    for p in registry.values():
        actions = {a.dest: a for a in p._actions if a.dest not in ("help", "func")}
        overrides = {}
        for key, value in entries.items():
            if key not in actions:
                continue
            known.add(key)
            action = actions[key]
            if isinstance(action.default, bool):
                overrides[key] = _parse_bool(value)
            elif action.type is not None:
                overrides[key] = action.type(value)
            else:
                overrides[key] = value
        p.set_defaults(**overrides)
    unknown = set(entries) - known
    if unknown:
        raise argparse.ArgumentTypeError(f"config keys match no flag: {', '.join(sorted(unknown))}")


def _cmd_build_templates(args) -> int:
    tset = build_template_set(args.glyphs, args.manifest, args.fonts, args.alphabet)
    save_template_set(tset, args.out)
    print(f"{len(tset)} glyphs")
    return 0


def _cmd_inspect_templates(args) -> int:
    info = describe_template_set(args.templates)
    print(f"fonts: {', '.join(info['fonts'])}")
    print(f"alphabet: {info['alphabet']}")
    print(f"glyphs: {info['count']} at {info['rows']}x{info['cols']}")
    return 0


def _cmd_recognize(args) -> int:
    image = load_image(args.image)
    tset = load_template_set(args.templates)
    params = SegmentationParams(args.min_area, args.line_gap, args.char_gap, args.space_gap)
    result = recognize_document(
        image,
        tset,
        params,
        threshold=args.threshold,
        binarize_threshold=None if args.otsu else args.binarize_threshold,
        prefilter=args.prefilter,
    )
    write_report(result, args.report)
    if args.structured:
        write_structured(result, args.structured)
    print(FONT_DISPLAY.get(result.font, result.font) if result.font else "none")
    return 0


def _cmd_noise(args) -> int:
    image = load_image(args.image)
    if isinstance(image, ColorImage):
        image = to_grayscale(image)
    elif isinstance(image, BinaryImage):
        image = binary_to_gray(image)
    spec = NoiseSpec(args.kind, args.density, args.sigma, args.variance, args.seed)
    save_image(add_noise(image, spec), args.out)
    return 0


def _cmd_evaluate(args) -> int:
    tset = load_template_set(args.templates)
    noise = NoiseSpec(args.kind, args.density, args.sigma, args.variance, seed=args.noise_seed)
    rows = run_grid(
        tset,
        fonts=args.fonts,
        scales=args.scales,
        char_count=args.chars,
        corpus_seed=args.corpus_seed,
        noise=noise,
        repeats=args.repeats,
    )
    emit_csv(rows, args.out)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def main(argv=None) -> int:
    parser, registry = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config_path = _extract_config_path(argv)
        if config_path:
            _apply_config(registry, _read_config(config_path))
        args = parser.parse_args(argv)
        missing = [
            f"--{name.replace('_', '-')}"
            for name in _REQUIRED.get(args.command, ())
            if getattr(args, name) is None
        ]
        if missing:
            print(f"fontocr: usage error: missing {', '.join(missing)}", file=sys.stderr)
            return _USAGE
    except SystemExit as exc:
        return _USAGE if exc.code else 0
    except argparse.ArgumentTypeError as exc:
        print(f"fontocr: usage error: {exc}", file=sys.stderr)
        return _USAGE
    except OSError as exc:
        print(f"fontocr: i/o error: {exc}", file=sys.stderr)
        return _IO
    except (FormatError, ValidationError) as exc:
        print(f"fontocr: error: {exc}", file=sys.stderr)
        return _INVALID
    try:
        return args.func(args)
    except OSError as exc:
        print(f"fontocr: i/o error: {exc}", file=sys.stderr)
        return _IO
    except (FormatError, ValidationError) as exc:
        print(f"fontocr: error: {exc}", file=sys.stderr)
        return _INVALID


def entry():
    sys.exit(main())
