"""Command-line interface: ``sketchocr <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 format or dimension
error, 4 configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import shutil
import sys
import tempfile
from pathlib import Path

from . import bench, templates
from .exceptions import ConfigurationError, DimensionError, EmptyForegroundError, FormatError
from .fixtures import fixture_dir
from .matcher import classify, gravity_shift, match_score
from .raster import centroid, normalize, parse_canvas, read_image, require_same_extent, save_pgm
from .sketch import DEFAULT_BIAS, check_bias, extract_sketch, parse_directions, render_sketch

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FORMAT, EXIT_CONFIG = 0, 1, 2, 3, 4

DEFAULT_RECIPE = "noise:0.02+translate:2:1*5"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _arg(validator):
    def convert(text):
        try:
            return validator(text)
        except (ValueError, ConfigurationError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    convert.__name__ = validator.__name__
    return convert


def _threshold(text):
    value = int(text)
    if not 0 <= value <= 255:
        raise ValueError("threshold must be in 0..255")
    return value


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return value


def _margin(text):
    value = int(text)
    if value < 0:
        raise ValueError("margin must be >= 0")
    return value


def _recipe(text):
    bench.parse_recipe(text)
    return text


def _template_path(text: str) -> Path:
    if text.startswith("builtin:"):
        return fixture_dir(text.split(":", 1)[1])
    return Path(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--bias", type=_arg(check_bias), default=DEFAULT_BIAS, help="0 < bias <= 1 (default 0.4)")
    common.add_argument("--canvas", type=_arg(parse_canvas), default=(64, 64), help="WxH (default 64x64)")
    common.add_argument("--margin", type=_arg(_margin), default=4)
    common.add_argument("--threshold", type=_arg(_threshold), default=128, help="PGM binarization threshold")
    common.add_argument("--seed", type=_arg(_seed), default=42)
    common.add_argument("--directions", type=_arg(parse_directions), default=None, help="comma list of hb,hw,vb,vw")

    parser = _Parser(prog="sketchocr", description="Sketch-based single-character recognition.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sketch", parents=[common], help="write the rendered sketch of an image as PGM")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--normalize", action="store_true", help="normalize onto --canvas first")

    p = sub.add_parser("render", parents=[common], help="print an image or its sketch as text")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--sketch", action="store_true", help="show sketch points instead of pixels")
    p.add_argument("--normalize", action="store_true")

    p = sub.add_parser("centroid", parents=[common], help="print the center of gravity of an image")
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("match", parents=[common], help="score the sketch of SOURCE against the --in target")
    p.add_argument("source")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--no-gravity", dest="gravity", action="store_false")

    p = sub.add_parser("classify", parents=[common], help="rank template labels for a query image")
    p.add_argument("--templates", required=True, type=_template_path)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--normalize", action="store_true", help="normalize the query onto the set canvas")
    p.add_argument("--no-gravity", dest="gravity", action="store_false")
    p.add_argument("--top", type=int, default=None)

    p = sub.add_parser("ingest", parents=[common], help="build a template set from a label<TAB>file manifest")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--name")

    p = sub.add_parser("gen-corpus", parents=[common], help="generate a distorted sample corpus")
    p.add_argument("--templates", required=True, type=_template_path)
    p.add_argument("--out", required=True)
    p.add_argument("--recipe", type=_arg(_recipe), default=DEFAULT_RECIPE)

    p = sub.add_parser("bench", parents=[common], help="evaluate recognizer sets on a corpus")
    p.add_argument("--templates", required=True, action="append",
                   help="recognizer set directory (repeatable, or comma-separated)")
    p.add_argument("--in", dest="input", help="corpus directory; generated from --corpus-from if omitted")
    p.add_argument("--corpus-from", action="append",
                   help="base set(s) for a generated corpus (default: every --templates set)")
    p.add_argument("--recipe", type=_arg(_recipe), default=DEFAULT_RECIPE)
    p.add_argument("--report", required=True)
    p.add_argument("--no-gravity", dest="gravity", action="store_false")
    return parser


# --------------------------------------------------------------------------
# output helpers: write to a temporary sibling, rename on success
# --------------------------------------------------------------------------


def _write_file(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _publish_dir(build, out) -> None:
    """Fill ``out`` from a scratch directory built by ``build(path)``."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    scratch = Path(tempfile.mkdtemp(dir=out.parent, prefix=f".{out.name}."))
    try:
        build(scratch)
        if out.exists() and not any(out.iterdir()):
            out.rmdir()
        if not out.exists():
            os.replace(scratch, out)
            return
        for f in sorted(scratch.iterdir()):
            os.replace(f, out / f.name)
    finally:
        if scratch.exists():
            shutil.rmtree(scratch)


def _load(args, path):
    img = read_image(path, args.threshold)
    if getattr(args, "normalize", False):
        img = normalize(img, args.canvas, args.margin)
    return img


def _split_sets(paths):
    return [_template_path(part) for p in paths for part in p.split(",") if part]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_sketch(args, out):
    sk = extract_sketch(_load(args, args.input), args.bias, args.directions)
    _write_file(args.out, save_pgm(render_sketch(sk)))


def cmd_render(args, out):
    img = _load(args, args.input)
    if args.sketch:
        sk = extract_sketch(img, args.bias, args.directions)
        rows = ["".join("#" if b else ("o" if w else ".") for b, w in zip(br, wr))
                for br, wr in zip(sk.black, sk.white)]
    else:
        rows = img.to_rows()
    text = "\n".join(rows) + "\n"
    if args.out:
        _write_file(args.out, text.encode("ascii"))
    else:
        out.write(text)


def cmd_centroid(args, out):
    cx, cy = centroid(_load(args, args.input)).as_floats()
    out.write(f"{cx:.6f}\t{cy:.6f}\n")


def cmd_match(args, out):
    source = _load(args, args.source)
    target = _load(args, args.input)
    require_same_extent(source, target, "source and target")
    sk = extract_sketch(source, args.bias, args.directions)
    src_c, tgt_c = centroid(source), centroid(target)
    dx, dy = gravity_shift(tgt_c, src_c) if args.gravity else (0, 0)
    score = match_score(sk, src_c, target, gravity=args.gravity, target_centroid=tgt_c)
    out.write(f"w={score.w}\tN_w={score.n_w}\tb={score.b}\tN_b={score.n_b}\t"
              f"dx={dx}\tdy={dy}\taccuracy={score.accuracy:.4f}\n")


def cmd_classify(args, out):
    tset = templates.load_set(args.templates)
    query = read_image(args.input, args.threshold)
    if args.normalize:
        query = normalize(query, tset.canvas, tset.margin)
    ranking = classify(query, tset, gravity=args.gravity)
    lines = ranking.lines()
    if args.top is not None:
        lines = lines[:args.top]
    out.write("\n".join(lines) + "\n")


def cmd_ingest(args, out):
    tset = templates.ingest(args.input, args.bias, args.canvas, args.margin, args.threshold, args.name)
    if not tset.entries:
        raise ConfigurationError(f"no usable glyphs in {args.input}")
    _publish_dir(lambda d: templates.save_set(tset, d), args.out)
    out.write(f"{tset.name}\t{len(tset)} glyphs\tbias={tset.bias}\tcanvas={tset.canvas[0]}x{tset.canvas[1]}"
              f"\tmargin={tset.margin}\n")


def cmd_gen_corpus(args, out):
    tset = templates.load_set(args.templates)
    items = bench.generate_corpus(tset, args.recipe, args.seed)
    _publish_dir(lambda d: bench.save_corpus(items, d), args.out)
    out.write(f"{len(items)} items\trecipe={args.recipe}\tseed={args.seed}\n")


def cmd_bench(args, out):
    recognizers = [templates.load_set(p) for p in _split_sets(args.templates)]
    if args.input:
        corpus = bench.load_corpus(args.input)
        origin = str(args.input)
    else:
        bases = [templates.load_set(p) for p in _split_sets(args.corpus_from)] if args.corpus_from else recognizers
        corpus = [item for base in bases for item in bench.generate_corpus(base, args.recipe, args.seed)]
        origin = "+".join(b.name for b in bases)
    params = {
        "corpus": origin,
        "recipe": None if args.input else args.recipe,
        "seed": args.seed,
        "gravity": args.gravity,
        "recognizers": {r.name: {"bias": r.bias, "canvas": list(r.canvas), "margin": r.margin}
                        for r in recognizers},
    }
    report = bench.evaluate(corpus, recognizers, gravity=args.gravity, params=params)
    report_path = Path(args.report)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    bench.write_report(report, report_path)
    _write_file(report_path.with_name(report_path.stem + ".params.json"),
                (json.dumps(params, indent=2, sort_keys=True) + "\n").encode("utf-8"))
    out.write(f"# corpus={origin} samples={len(corpus)} seed={args.seed} gravity={args.gravity}\n")
    out.write(report.format_table() + "\n")


COMMANDS = {
    "sketch": cmd_sketch,
    "render": cmd_render,
    "centroid": cmd_centroid,
    "match": cmd_match,
    "classify": cmd_classify,
    "ingest": cmd_ingest,
    "gen-corpus": cmd_gen_corpus,
    "bench": cmd_bench,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run one invocation and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args, stdout)
    except (FormatError, DimensionError, EmptyForegroundError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FORMAT
    except ConfigurationError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
