"""Turn inline runs into translatable sentences and back.

Formulas become ``MATHnX`` tokens (numbered across the whole document) and
every other non-text inline (commands, groups, comments) becomes a ``RAWnX``
placeholder, so a translator sees plain words plus opaque unknown tokens.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field

from .config import DEFAULT_CONFIG, FLATTEN, ParserConfig, default_abbreviations
from .errors import DroppedToken, MissingToken, UnprotectedInline, UntokenizedMath
from .latex.nodes import Arg, Command, Math, Space, Str

MATH_TOKEN = re.compile(r"MATH([1-9]\d*)X")
PLACEHOLDER = re.compile(r"(?:MATH|RAW)[1-9]\d*X")
ANY_PLACEHOLDER = re.compile(r"(?:MATH|RAW|TERM)[1-9]\d*X")

_TERMINATOR = re.compile(r"[.!?][)\]'\"]*$")
_CLOSERS = ")]'\""


class _TokenTable:
    prefix = ""

    def __init__(self):
        self.entries: dict = {}
        self.next_index = 1

    def add(self, value) -> str:
        name = f"{self.prefix}{self.next_index}X"
        self.entries[name] = value
        self.next_index += 1
        return name

    def __getitem__(self, name):
        return self.entries[name]

    def __contains__(self, name) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)


class MathTokenMap(_TokenTable):
    """Document-level map from ``MATHnX`` names to the formulas they replace."""

    prefix = "MATH"

    def to_json(self) -> dict:
        return {name: {"tex": m.tex, "mode": m.mode, "delim": m.delim} for name, m in self.entries.items()}

    @classmethod
    def from_json(cls, obj: dict) -> "MathTokenMap":
        table = cls()
        for name, entry in obj.items():
            if not MATH_TOKEN.fullmatch(name):
                raise ValueError(f"not a math token name: {name!r}")
            table.entries[name] = Math(entry["mode"], entry["tex"], entry.get("delim", ""))
        indices = [int(MATH_TOKEN.fullmatch(n).group(1)) for n in table.entries]
        table.next_index = max(indices, default=0) + 1
        return table

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False, indent=2)


class InlineStash(_TokenTable):
    """Opaque inlines (commands, groups, comments) parked under ``RAWnX`` names."""

    prefix = "RAW"


@dataclass
class Sentence:
    text: str
    source_block: str = ""
    token_names: list = field(default_factory=list)


def translatable_arg(cmd: Command, config: ParserConfig = DEFAULT_CONFIG) -> int | None:
    """Index of the command argument holding natural language, if any."""
    if cmd.name not in config.translatable_commands:
        return None
    for i in range(len(cmd.args) - 1, -1, -1):
        arg = cmd.args[i]
        if arg.open == "{":
            return i if arg.inlines is not None else None
    return None


def _with_arg(cmd: Command, index: int, inlines: list) -> Command:
    args = list(cmd.args)
    args[index] = Arg("{", "", inlines)
    return Command(cmd.name, args)


def tokenize_math(inlines: list, token_map: MathTokenMap, config: ParserConfig = DEFAULT_CONFIG) -> list:
    """Replace each Math inline by ``Str("MATHnX")``, recording it in ``token_map``.

    Formulas inside translatable command arguments are numbered in place, so
    indices follow reading order.
    """
    out = []
    for node in inlines:
        if isinstance(node, Math):
            out.append(Str(token_map.add(node)))
        elif isinstance(node, Command) and (i := translatable_arg(node, config)) is not None:
            out.append(_with_arg(node, i, tokenize_math(node.args[i].inlines, token_map, config)))
        else:
            out.append(node)
    return out


def is_flattened(node, config: ParserConfig = DEFAULT_CONFIG) -> bool:
    return (
        isinstance(node, Command)
        and config.translatable_commands.get(node.name) == FLATTEN
        and translatable_arg(node, config) is not None
    )


def protect_inlines(inlines: list, stash: InlineStash, config: ParserConfig = DEFAULT_CONFIG) -> list:
    """Replace opaque inlines with ``RAWnX`` placeholders.

    Str, Space and Math pass through; flattened formatting commands are kept
    with their argument protected recursively.
    """
    out = []
    for node in inlines:
        if isinstance(node, (Str, Space, Math)):
            out.append(node)
        elif is_flattened(node, config):
            i = translatable_arg(node, config)
            out.append(_with_arg(node, i, protect_inlines(node.args[i].inlines, stash, config)))
        else:
            out.append(Str(stash.add(node)))
    return out


def join_inlines(inlines: list, config: ParserConfig = DEFAULT_CONFIG) -> str:
    """Join a tokenized inline run into one line of text.

    Adjacent strings are concatenated, any run of spaces becomes one space,
    and flattened commands contribute their argument words in place.
    """
    parts: list[str] = []
    pending_space = False
    for node in _flatten(inlines, config):
        if isinstance(node, Space):
            pending_space = bool(parts)
            continue
        if pending_space:
            parts.append(" ")
            pending_space = False
        parts.append(node.text)
    return "".join(parts)


def _flatten(inlines, config):
    for node in inlines:
        if isinstance(node, (Str, Space)):
            yield node
        elif isinstance(node, Math):
            raise UntokenizedMath(f"formula {node.tex!r} was not tokenized")
        elif is_flattened(node, config):
            yield from _flatten(node.args[translatable_arg(node, config)].inlines, config)
        else:
            raise UnprotectedInline(f"{type(node).__name__} must be replaced by a placeholder before joining")


def segment_sentences(text: str, source_block: str = "", abbreviations=None) -> list[Sentence]:
    """Split a joined block into sentences.

    A boundary is a ``.``, ``!`` or ``?`` (optionally followed by closing
    brackets or quotes), then whitespace, then an upper-case letter or a math
    token; RAW/TERM placeholders in between are looked past.  Words in ``abbreviations`` never end a sentence.  With single
    spaces between words, ``" ".join`` of the pieces gives back ``text``.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    if not text.strip():
        return []
    pieces = []
    start = word_start = 0
    for gap in re.finditer(r"\s+", text):
        word = text[word_start:gap.start()]
        word_start = gap.end()
        if word and _ends_sentence(word, abbreviations) and _starts_sentence(text, gap.end()):
            pieces.append(text[start:gap.start()])
            start = gap.end()
    pieces.append(text[start:])
    return [Sentence(p, source_block, math_token_names(p)) for p in pieces]


def _ends_sentence(word: str, abbreviations) -> bool:
    if not _TERMINATOR.search(word):
        return False
    core = word.rstrip(_CLOSERS).lstrip("([\"'`")
    return core.lower() not in abbreviations


_OPAQUE_WORD = re.compile(r"(?:RAW|TERM)[1-9]\d*X\s+")


def _starts_sentence(text: str, pos: int) -> bool:
    # opaque placeholders (a comment, a label) do not decide the boundary;
    # the first real word after them does
    while m := _OPAQUE_WORD.match(text, pos):
        pos = m.end()
    if pos >= len(text):
        return False
    if MATH_TOKEN.match(text, pos):
        return True
    return text[pos].isupper() and not ANY_PLACEHOLDER.match(text, pos)


def math_token_names(text: str) -> list[str]:
    return [m.group() for m in MATH_TOKEN.finditer(text)]


def placeholder_names(text: str) -> list[str]:
    """MATH and RAW placeholder names in ``text``, in order of appearance."""
    return PLACEHOLDER.findall(text)


def tokens_conserved(source: str, translated: str) -> bool:
    return Counter(placeholder_names(source)) == Counter(placeholder_names(translated))


def detokenize(
    translated: str,
    token_map: MathTokenMap,
    stash: InlineStash | None = None,
    expected=None,
) -> list:
    """Rebuild inlines from translated text, restoring formulas and placeholders.

    Punctuation glued to a token (``MATH3X,``) stays glued to the restored
    node.  With ``expected`` given, tokens absent from ``translated`` raise
    :class:`DroppedToken`.
    """
    if expected is not None:
        seen = Counter(placeholder_names(translated))
        missing = [n for n in expected if not seen[n]]
        if missing:
            raise DroppedToken(missing)
    out: list = []
    for word in translated.split():
        if out:
            out.append(Space())
        pos = 0
        for m in PLACEHOLDER.finditer(word):
            if m.start() > pos:
                out.append(Str(word[pos:m.start()]))
            out.append(_restore(m.group(), token_map, stash))
            pos = m.end()
        if pos < len(word):
            out.append(Str(word[pos:]))
    return out


def _restore(name: str, token_map: MathTokenMap, stash: InlineStash | None):
    table = token_map if name.startswith("MATH") else stash
    if table is None or name not in table:
        raise MissingToken(name)
    return table[name]


def normalize_inlines(inlines: list) -> list:
    """Merge adjacent strings and collapse spaces; used to compare inline runs."""
    out: list = []
    for node in inlines:
        if isinstance(node, Space):
            if out and not isinstance(out[-1], Space):
                out.append(node)
        elif isinstance(node, Str) and out and isinstance(out[-1], Str):
            out[-1] = Str(out[-1].text + node.text)
        else:
            out.append(node)
    while out and isinstance(out[-1], Space):
        out.pop()
    return out


def sentence_for_translation(sentence: Sentence) -> bool:
    """True when the sentence has at least one word that is not a placeholder."""
    return any(ch.isalpha() for ch in ANY_PLACEHOLDER.sub(" ", sentence.text))
