"""Perplexity-gated routing between a primary and a fallback backend.

The primary result is kept when its perplexity is at most the threshold and
every MATH/RAW placeholder survived; otherwise the sentence goes to the
fallback backend (usually glossary-wrapped).  :func:`translate_document`
runs the whole document through this gate and reinstalls the results.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .backends import GlossaryWrappedBackend
from .config import DEFAULT_CONFIG, SEPARATE, ParserConfig, default_abbreviations
from .errors import BackendError, BothBackendsFailed, NoDocumentClass
from .french import add_french_preamble, convert_quotes
from .glossary import Glossary
from .latex.nodes import (
    Command,
    DocumentAst,
    EnvironmentBlock,
    Heading,
    ListBlock,
    ListItem,
    Math,
    Paragraph,
    RawInline,
    Space,
    Str,
)
from .results import BackendRequest, TranslationResult, perplexity
from .sentences import (
    ANY_PLACEHOLDER,
    PLACEHOLDER,
    InlineStash,
    MathTokenMap,
    Sentence,
    _with_arg,
    detokenize,
    is_flattened,
    join_inlines,
    placeholder_names,
    segment_sentences,
    sentence_for_translation,
    tokenize_math,
    tokens_conserved,
    translatable_arg,
)

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 2.05

PRIMARY = "primary"
FALLBACK = "fallback"

BELOW_THRESHOLD = "below_threshold"
ABOVE_THRESHOLD = "above_threshold"
NO_LOGPROBS = "no_logprobs"
TOKEN_CONSERVATION_FAILURE = "token_conservation_failure"
PRIMARY_ERROR = "primary_error"

__all__ = [
    "BackendRequest", "TranslationResult", "perplexity", "RoutingDecision",
    "route", "TranslationConfig", "RoutingReport", "SentenceRecord",
    "translate_document", "repair_tokens", "escape_specials", "rebuild_markers",
]


@dataclass(frozen=True)
class RoutingDecision:
    chosen: str
    reason: str
    threshold: float
    perplexity: float | None = None

    def __post_init__(self):
        if (self.chosen == PRIMARY) != (self.reason == BELOW_THRESHOLD):
            raise ValueError(f"reason {self.reason!r} does not fit chosen={self.chosen!r}")


def route(
    sentence,
    primary,
    fallback,
    threshold: float = DEFAULT_THRESHOLD,
    source_lang: str = "en",
    target_lang: str = "fr",
    sentence_id: str = "",
) -> tuple[TranslationResult, RoutingDecision]:
    """Translate one sentence, falling back when the primary is not trusted.

    ``sentence`` is a :class:`Sentence` or plain text.  Raises
    :class:`BothBackendsFailed` when the fallback errors as well.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    request = BackendRequest(text, source_lang, target_lang, want_logprobs=True)

    score = None
    primary_exc = None
    try:
        result = primary.translate(request)
        if not result.token_logprobs:
            reason = NO_LOGPROBS
        else:
            score = perplexity(result.token_logprobs)
            if score > threshold:
                reason = ABOVE_THRESHOLD
            elif not tokens_conserved(text, result.text):
                reason = TOKEN_CONSERVATION_FAILURE
            else:
                return result, RoutingDecision(PRIMARY, BELOW_THRESHOLD, threshold, score)
    except (BackendError, ValueError) as exc:
        # ValueError covers out-of-range scores from a misbehaving backend
        primary_exc = exc
        reason = PRIMARY_ERROR
        score = None

    try:
        result = fallback.translate(request)
    except BackendError as exc:
        raise BothBackendsFailed(sentence_id, primary_exc, exc, reason) from exc
    return result, RoutingDecision(FALLBACK, reason, threshold, score)


@dataclass
class TranslationConfig:
    primary: object
    fallback: object | None = None
    threshold: float = DEFAULT_THRESHOLD
    glossary: Glossary | None = None
    source_lang: str = "en"
    target_lang: str = "fr"
    max_workers: int = 8
    parser_config: ParserConfig = DEFAULT_CONFIG
    french_conventions: bool = True
    abbreviations: frozenset | None = None

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")
        if self.primary is None and self.fallback is None:
            raise ValueError("at least one backend is required")
        if self.max_workers < 1:
            raise ValueError("max_workers must be at least 1")

    def backends(self):
        """(primary, fallback); a lone backend serves both roles."""
        primary = self.primary or self.fallback
        fallback = self.fallback or self.primary
        if self.glossary is not None and len(self.glossary):
            fallback = GlossaryWrappedBackend(fallback, self.glossary)
        return primary, fallback


@dataclass
class SentenceRecord:
    id: str
    block: str
    source: str
    translation: str
    chosen: str
    reason: str
    backend: str | None
    perplexity: float | None

    def to_json(self) -> dict:
        return {
            "id": self.id, "block": self.block, "perplexity": self.perplexity,
            "chosen": self.chosen, "reason": self.reason, "backend": self.backend,
            "source": self.source, "translation": self.translation,
        }


@dataclass
class RoutingReport:
    threshold: float = DEFAULT_THRESHOLD
    sentences: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    skipped: int = 0
    token_map: MathTokenMap = field(default_factory=MathTokenMap, repr=False)

    @property
    def total(self) -> int:
        return len(self.sentences)

    @property
    def fallback_count(self) -> int:
        return sum(1 for s in self.sentences if s.chosen == FALLBACK)

    @property
    def fallback_fraction(self) -> float:
        return self.fallback_count / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "threshold": self.threshold,
            "total": self.total,
            "fallback_count": self.fallback_count,
            "fallback_fraction": self.fallback_fraction,
            "skipped": self.skipped,
            "sentences": [s.to_json() for s in self.sentences],
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------- repair

_SPECIAL = re.compile(r"(?<!\\)([%$#&_])")


def escape_specials(text: str) -> str:
    """Escape characters a backend may emit that LaTeX reads as markup."""
    text = _SPECIAL.sub(r"\\\1", text)
    depth = 0
    balanced = True
    for m in re.finditer(r"(?<!\\)[{}]", text):
        depth += 1 if m.group() == "{" else -1
        if depth < 0:
            balanced = False
            break
    if balanced and depth == 0:
        return text
    return re.sub(r"(?<!\\)([{}])", r"\\\1", text)


def repair_tokens(source: str, translated: str) -> tuple[str, list[str]]:
    """Drop unknown or surplus placeholders and append the missing ones.

    Returns the repaired text and the names that had to be appended.
    """
    budget = Counter(placeholder_names(source))

    def keep(m):
        if budget[m.group()] > 0:
            budget[m.group()] -= 1
            return m.group()
        return ""

    text = " ".join(PLACEHOLDER.sub(keep, translated).split())
    missing = []
    for name in placeholder_names(source):
        if budget[name] > 0:
            budget[name] -= 1
            missing.append(name)
    if missing:
        text = f"{text} {' '.join(missing)}".strip()
    return text, missing


# ------------------------------------------------------------ extraction


@dataclass
class _Unit:
    id: str
    inlines: list
    owner: tuple | None = None  # (stash name, command, arg index)
    text: str = ""
    sentences: list = field(default_factory=list)
    slots: list = field(default_factory=list)
    result: list | None = None


class _Extractor:
    """Walk the tree once, in document order, collecting translatable runs."""

    def __init__(self, config: ParserConfig):
        self.config = config
        self.token_map = MathTokenMap()
        self.stash = InlineStash()
        self.units: list[_Unit] = []

    def blocks(self, blocks: list) -> list:
        return [self.block(b) for b in blocks]

    def block(self, block):
        if isinstance(block, Paragraph):
            return replace(block, inlines=self.unit(block.inlines))
        if isinstance(block, Heading):
            return replace(block, inlines=self.unit(block.inlines))
        if isinstance(block, EnvironmentBlock):
            return replace(block, blocks=self.blocks(block.blocks))
        if isinstance(block, ListBlock):
            lead = self.blocks(block.lead)
            items = [ListItem(self.blocks(item.blocks), item.label) for item in block.items]
            return replace(block, lead=lead, items=items)
        return block

    def unit(self, inlines: list):
        tokenized = tokenize_math(self._shield(inlines), self.token_map, self.config)
        return self._register(tokenized)

    def _register(self, tokenized: list) -> _Unit:
        protected = self._protect(tokenized)
        unit = _Unit(f"b{len(self.units) + 1}", protected)
        self.units.append(unit)
        return unit

    def _shield(self, inlines: list) -> list:
        out = []
        for node in inlines:
            if isinstance(node, Str) and ANY_PLACEHOLDER.search(node.text):
                out.append(RawInline(node.text))
            elif isinstance(node, Command) and (i := translatable_arg(node, self.config)) is not None:
                out.append(_with_arg(node, i, self._shield(node.args[i].inlines)))
            else:
                out.append(node)
        return out

    def _protect(self, inlines: list) -> list:
        out = []
        for node in inlines:
            if isinstance(node, (Str, Space, Math)):
                out.append(node)
            elif is_flattened(node, self.config):
                # the argument stays in the sentence between two markers so
                # the command can be rebuilt around the translated words
                i = translatable_arg(node, self.config)
                close = f"RAW{self.stash.next_index + 1}X"
                opener = self.stash.add(_Open(node, i, close))
                self.stash.add(_Close(close))
                out += [Str(opener), Space(), *self._protect(node.args[i].inlines), Space(), Str(close)]
            else:
                name = self.stash.add(node)
                i = translatable_arg(node, self.config) if isinstance(node, Command) else None
                if i is not None and self.config.translatable_commands.get(node.name) == SEPARATE:
                    self._register(node.args[i].inlines).owner = (name, node, i)
                out.append(Str(name))
                if isinstance(node, RawInline) and node.raw.endswith("\n"):
                    out.append(Space())
        return out


@dataclass(frozen=True)
class _Open:
    command: Command
    index: int
    close: str


@dataclass(frozen=True)
class _Close:
    name: str


def _strip_spaces(nodes: list) -> list:
    lo, hi = 0, len(nodes)
    while lo < hi and isinstance(nodes[lo], Space):
        lo += 1
    while hi > lo and isinstance(nodes[hi - 1], Space):
        hi -= 1
    return nodes[lo:hi]


def rebuild_markers(nodes: list, warnings: list | None = None) -> list:
    """Wrap the nodes between each opening and closing marker back into their command.

    A marker whose partner is missing, or sits before it, is dropped; the
    words survive without the formatting.
    """
    out = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        if isinstance(node, _Open):
            j = next((k for k in range(i + 1, len(nodes))
                      if isinstance(nodes[k], _Close) and nodes[k].name == node.close), None)
            if j is not None:
                inner = _strip_spaces(rebuild_markers(nodes[i + 1:j], warnings))
                out.append(_with_arg(node.command, node.index, inner))
                i = j + 1
                continue
        if isinstance(node, (_Open, _Close)):
            if warnings is not None:
                name = node.command.name if isinstance(node, _Open) else "command"
                warnings.append(f"formatting of a \\{name} argument was lost in translation")
        else:
            out.append(node)
        i += 1
    return out


def _install(tree, extractor: _Extractor):
    """Replace every _Unit placeholder in the rebuilt tree with its result."""
    if isinstance(tree, list):
        return [_install(b, extractor) for b in tree]
    if isinstance(tree, (Paragraph, Heading)):
        return replace(tree, inlines=tree.inlines.result)
    if isinstance(tree, EnvironmentBlock):
        return replace(tree, blocks=_install(tree.blocks, extractor))
    if isinstance(tree, ListBlock):
        return replace(
            tree,
            lead=_install(tree.lead, extractor),
            items=[ListItem(_install(it.blocks, extractor), it.label) for it in tree.items],
        )
    return tree


# ------------------------------------------------------------- pipeline


def translate_document(ast: DocumentAst, config: TranslationConfig) -> tuple[DocumentAst, RoutingReport]:
    """Translate every natural-language run of ``ast``.

    Formulas are numbered across the document before any backend call, so the
    token map does not depend on the order in which translations complete.
    """
    primary, fallback = config.backends()
    abbreviations = config.abbreviations if config.abbreviations is not None else default_abbreviations()
    extractor = _Extractor(config.parser_config)
    skeleton = extractor.blocks(ast.blocks)
    report = RoutingReport(threshold=config.threshold, token_map=extractor.token_map)

    jobs = []
    for unit in extractor.units:
        unit.text = join_inlines(unit.inlines, config.parser_config)
        unit.sentences = segment_sentences(unit.text, unit.id, abbreviations)
        for sentence in unit.sentences:
            if sentence_for_translation(sentence):
                sid = f"s{len(jobs) + 1}"
                unit.slots.append(len(jobs))
                jobs.append((sid, sentence))
            else:
                unit.slots.append(None)
                report.skipped += 1

    def run(job):
        sid, sentence = job
        try:
            return route(sentence, primary, fallback, config.threshold,
                         config.source_lang, config.target_lang, sid)
        except BothBackendsFailed as exc:
            return exc

    workers = max(1, min(config.max_workers, getattr(primary, "max_concurrency", 1),
                         getattr(fallback, "max_concurrency", 1)))
    if len(jobs) > 1 and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    translations = []
    for (sid, sentence), outcome in zip(jobs, outcomes):
        translations.append(_accept(sid, sentence, outcome, config, report))

    for unit in extractor.units:
        pieces = [sentence.text if slot is None else translations[slot]
                  for sentence, slot in zip(unit.sentences, unit.slots)]
        text = " ".join(p for p in pieces if p)
        if config.french_conventions and config.target_lang == "fr":
            text = convert_quotes(text, report.warnings)
        unit.result = rebuild_markers(
            detokenize(text, extractor.token_map, extractor.stash, expected=placeholder_names(unit.text)),
            report.warnings,
        )
        # a command argument translated on its own goes back into its command;
        # such units are registered before the run that contains the command
        if unit.owner is not None:
            name, cmd, i = unit.owner
            extractor.stash.entries[name] = _with_arg(cmd, i, unit.result)

    blocks = _install(skeleton, extractor)
    out = DocumentAst(ast.preamble, blocks, ast.trailer, ast.has_document)
    if config.french_conventions and config.target_lang == "fr" and ast.has_document:
        try:
            out = add_french_preamble(out)
        except NoDocumentClass:
            report.warnings.append("no \\documentclass in the preamble; French options not added")
    return out, report


def _accept(sid: str, sentence: Sentence, outcome, config: TranslationConfig, report: RoutingReport) -> str:
    if isinstance(outcome, BothBackendsFailed):
        report.warnings.append(f"{sid}: both backends failed, left untranslated ({outcome.fallback_error})")
        report.sentences.append(SentenceRecord(
            sid, sentence.source_block, sentence.text, sentence.text,
            FALLBACK, outcome.reason or PRIMARY_ERROR, None, None))
        return sentence.text

    result, decision = outcome
    text = escape_specials(" ".join(result.text.split()))
    if not tokens_conserved(sentence.text, text):
        text, missing = repair_tokens(sentence.text, text)
        detail = f"; appended {', '.join(missing)}" if missing else ""
        report.warnings.append(f"{sid}: {result.backend_id} did not conserve placeholders{detail}")
    report.sentences.append(SentenceRecord(
        sid, sentence.source_block, sentence.text, text,
        decision.chosen, decision.reason, result.backend_id, decision.perplexity))
    return text

