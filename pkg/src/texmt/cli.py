"""Command-line entry point: ``texmt translate | parse | corpus | score-bleu``.

Exit codes: 0 on success, 2 when a translation finished with warnings, 1 on
a fatal error (unparsable input, unreadable files, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .backends import HttpBackend, IdentityBackend, MockDictionaryBackend
from .bleu import bleu
from .config import DEFAULT_CONFIG, FLATTEN, SEPARATE, seed_glossary_path
from .corpus import (
    filter_by_glossary,
    read_parallel,
    read_tsv,
    shuffle_split,
    vocab_size,
    write_parallel,
    write_tsv,
)
from .errors import ParseError, TexmtError
from .glossary import load_glossary
from .latex import dumps, parse_document, render_document
from .router import DEFAULT_THRESHOLD, TranslationConfig, translate_document

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_WARNINGS = 2

ENV_URL = "TEXMT_BACKEND_URL"
ENV_API_KEY = "TEXMT_API_KEY"
ENV_TIMEOUT = "TEXMT_TIMEOUT"

logger = logging.getLogger("texmt")


class CliError(Exception):
    pass


def make_backend(spec: str | None, args) -> object | None:
    """Build a backend from ``identity``, ``mock:PATH`` or an http(s) URL."""
    if not spec:
        return None
    if spec == "identity":
        return IdentityBackend()
    if spec.startswith("mock:"):
        path = spec[len("mock:"):]
        if not Path(path).is_file():
            raise CliError(f"mock dictionary not found: {path}")
        return MockDictionaryBackend.from_tsv(path, backend_id=f"mock:{Path(path).name}")
    if spec.startswith(("http://", "https://")):
        return HttpBackend(
            spec,
            timeout=args.timeout,
            retries=args.retries,
            api_key=os.environ.get(ENV_API_KEY),
            max_concurrency=args.max_workers,
        )
    raise CliError(f"unknown backend spec {spec!r} (use identity, mock:PATH or an http(s) URL)")


def _parser_config(args):
    config = DEFAULT_CONFIG
    if getattr(args, "translatable_command", None):
        config = config.with_translatable(args.translatable_command, SEPARATE)
    if getattr(args, "inline_command", None):
        config = config.with_translatable(args.inline_command, FLATTEN)
    return config


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")


# ------------------------------------------------------------- translate


def _translation_config(args) -> TranslationConfig:
    primary_spec = args.primary or os.environ.get(ENV_URL)
    primary = make_backend(primary_spec, args)
    fallback = make_backend(args.fallback, args)
    if primary is None and fallback is None:
        raise CliError(f"no backend configured: pass --primary/--fallback or set {ENV_URL}")
    if args.threshold <= 0:
        raise CliError("--threshold must be positive")
    glossary = None
    if not args.no_glossary:
        glossary = load_glossary(args.glossary or seed_glossary_path())
    return TranslationConfig(
        primary=primary,
        fallback=fallback,
        threshold=args.threshold,
        glossary=glossary,
        source_lang=args.source_lang,
        target_lang=args.target_lang,
        max_workers=args.max_workers,
        parser_config=_parser_config(args),
        french_conventions=not args.no_french_conventions,
    )


def _translate_file(src: Path, out: Path, report_path: Path, config: TranslationConfig, args) -> int:
    source = _read(src)
    try:
        ast = parse_document(source, config.parser_config)
    except ParseError as exc:
        print(f"{src}:{exc.line}:{exc.column}: error: {exc.message}", file=sys.stderr)
        return EXIT_FATAL
    translated, report = translate_document(ast, config)
    _write(out, render_document(translated))
    _write(report_path, json.dumps(report.to_json(), ensure_ascii=False, indent=2) + "\n")
    if args.dump_intermediate:
        report.token_map.dump(out.with_suffix(".tokens.json"))
        _write(out.with_suffix(".ast.json"), dumps(ast) + "\n")
    for warning in report.warnings:
        print(f"{src}: warning: {warning}", file=sys.stderr)
    print(f"{src} -> {out}: {report.total} sentences, "
          f"{report.fallback_count} via fallback ({100 * report.fallback_fraction:.1f}%)")
    return EXIT_WARNINGS if report.warnings else EXIT_OK


def _default_output(src: Path, target_lang: str) -> Path:
    return src.with_name(f"{src.stem}.{target_lang}{src.suffix or '.tex'}")


def cmd_translate(args) -> int:
    config = _translation_config(args)
    src = Path(args.input)
    if args.batch:
        if not src.is_dir():
            raise CliError(f"--batch expects a directory: {src}")
        out_dir = Path(args.output) if args.output else src.with_name(f"{src.name}.{args.target_lang}")
        codes = []
        for path in sorted(src.glob("*.tex")):
            out = out_dir / path.name
            codes.append(_translate_file(path, out, out.with_suffix(".report.json"), config, args))
        if EXIT_FATAL in codes:
            return EXIT_FATAL
        return EXIT_WARNINGS if EXIT_WARNINGS in codes else EXIT_OK
    out = Path(args.output) if args.output else _default_output(src, args.target_lang)
    report_path = Path(args.report) if args.report else out.with_suffix(".report.json")
    return _translate_file(src, out, report_path, config, args)


# ----------------------------------------------------------------- parse


def cmd_parse(args) -> int:
    source = _read(args.input)
    try:
        ast = parse_document(source, _parser_config(args))
    except ParseError as exc:
        print(f"{args.input}:{exc.line}:{exc.column}: error: {exc.message}", file=sys.stderr)
        return EXIT_FATAL
    text = dumps(ast) + "\n"
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- corpus


def _read_corpus(args):
    if args.tsv:
        return read_tsv(args.tsv)
    if args.src and args.tgt:
        return read_parallel(args.src, args.tgt)
    raise CliError("give either --tsv FILE or both --src and --tgt")


def _write_corpus(corpus, tsv_path, src_path, tgt_path) -> None:
    if tsv_path:
        write_tsv(corpus, tsv_path)
    else:
        write_parallel(corpus, src_path, tgt_path)


def cmd_corpus_filter(args) -> int:
    corpus = _read_corpus(args)
    glossary = load_glossary(args.glossary or seed_glossary_path())
    kept = filter_by_glossary(corpus, glossary, args.min_terms)
    if args.out_tsv:
        write_tsv(kept, args.out_tsv)
    elif args.out_src and args.out_tgt:
        write_parallel(kept, args.out_src, args.out_tgt)
    else:
        raise CliError("give either --out-tsv FILE or both --out-src and --out-tgt")
    print(json.dumps({"input": len(corpus), "kept": len(kept), "min_terms": args.min_terms}))
    return EXIT_OK


def cmd_corpus_split(args) -> int:
    corpus = _read_corpus(args)
    parts = shuffle_split(corpus, tuple(args.ratios), args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sizes = {}
    for name, part in zip(("train", "valid", "test"), parts):
        if args.tsv:
            _write_corpus(part, out_dir / f"{name}.tsv", None, None)
        else:
            _write_corpus(part, None, out_dir / f"{name}.{args.src_suffix}", out_dir / f"{name}.{args.tgt_suffix}")
        sizes[name] = len(part)
    print(json.dumps({"seed": args.seed, **sizes}))
    return EXIT_OK


def cmd_corpus_stats(args) -> int:
    corpus = _read_corpus(args)
    stats = {
        "pairs": len(corpus),
        "casefold": args.casefold,
        "source_vocab": vocab_size(corpus.sources, args.casefold),
        "target_vocab": vocab_size(corpus.targets, args.casefold),
    }
    print(json.dumps(stats))
    return EXIT_OK


# ------------------------------------------------------------ score-bleu


def cmd_score_bleu(args) -> int:
    hyps = _read(args.hyp).splitlines()
    refs = _read(args.ref).splitlines()
    report = bleu(hyps, refs, smooth=args.smooth)
    print(json.dumps(report.to_json(), indent=2))
    print(report.summary())
    return EXIT_OK


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="texmt", description="Translate LaTeX documents that contain mathematics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log backend retries and routing detail")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("translate", help="translate a .tex file (or a directory with --batch)")
    t.add_argument("input")
    t.add_argument("-o", "--output", help="output file (directory with --batch)")
    t.add_argument("--report", help="routing report path (default: OUTPUT with .report.json)")
    t.add_argument("--primary", help=f"primary backend: identity, mock:PATH or URL (default: ${ENV_URL})")
    t.add_argument("--fallback", help="fallback backend; glossary terms are enforced on it")
    t.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD, help="perplexity gate (inclusive)")
    t.add_argument("--glossary", help="EN-FR glossary TSV (default: the bundled seed glossary)")
    t.add_argument("--no-glossary", action="store_true")
    t.add_argument("--source-lang", default="en")
    t.add_argument("--target-lang", default="fr")
    t.add_argument("--max-workers", type=int, default=8, help="concurrent backend requests")
    t.add_argument("--timeout", type=float, default=float(os.environ.get(ENV_TIMEOUT, 30)))
    t.add_argument("--retries", type=int, default=2)
    t.add_argument("--dump-intermediate", action="store_true", help="write the token map and source AST next to the output")
    t.add_argument("--no-french-conventions", action="store_true")
    t.add_argument("--translatable-command", action="append", metavar="NAME",
                   help="command whose last argument is translated as its own phrase (repeatable)")
    t.add_argument("--inline-command", action="append", metavar="NAME",
                   help="formatting command whose argument is translated inside its sentence (repeatable)")
    t.add_argument("--batch", action="store_true", help="translate every .tex file in the INPUT directory")
    t.set_defaults(func=cmd_translate)

    p = sub.add_parser("parse", help="dump the document tree as JSON")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--translatable-command", action="append", metavar="NAME")
    p.add_argument("--inline-command", action="append", metavar="NAME")
    p.set_defaults(func=cmd_parse)

    c = sub.add_parser("corpus", help="parallel corpus tools")
    csub = c.add_subparsers(dest="corpus_command", required=True)

    def corpus_inputs(sp):
        sp.add_argument("--src", help="source-language file, one sentence per line")
        sp.add_argument("--tgt", help="target-language file aligned with --src")
        sp.add_argument("--tsv", help="single source<TAB>target file")

    f = csub.add_parser("filter", help="keep pairs with at least N glossary terms on the source side")
    corpus_inputs(f)
    f.add_argument("--glossary")
    f.add_argument("--min-terms", type=int, default=2)
    f.add_argument("--out-src")
    f.add_argument("--out-tgt")
    f.add_argument("--out-tsv")
    f.set_defaults(func=cmd_corpus_filter)

    s = csub.add_parser("split", help="seeded shuffle into train/valid/test")
    corpus_inputs(s)
    s.add_argument("--ratios", type=float, nargs=3, default=[0.8, 0.1, 0.1], metavar=("TRAIN", "VALID", "TEST"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--src-suffix", default="en")
    s.add_argument("--tgt-suffix", default="fr")
    s.set_defaults(func=cmd_corpus_split)

    st = csub.add_parser("stats", help="pair count and vocabulary sizes")
    corpus_inputs(st)
    st.add_argument("--casefold", action="store_true")
    st.set_defaults(func=cmd_corpus_stats)

    b = sub.add_parser("score-bleu", help="corpus BLEU of a hypothesis file against a reference file")
    b.add_argument("--hyp", required=True)
    b.add_argument("--ref", required=True)
    b.add_argument("--smooth", action="store_true", help="add-one smoothing for n >= 2")
    b.set_defaults(func=cmd_score_bleu)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, TexmtError, ValueError, OSError) as exc:
        print(f"texmt: error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
