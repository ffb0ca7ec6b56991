"""Bilingual terminology glossary: loading, matching and term protection."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import EmptyGlossary, MalformedLine

TERM_TOKEN = re.compile(r"TERM([1-9]\d*)X")


def _key(term: str) -> str:
    return " ".join(term.split()).casefold()


@dataclass(frozen=True)
class Glossary:
    """Ordered (source, target) pairs, longest source term first.

    Matching is whole-word and case-insensitive, with no stemming.
    """

    entries: tuple = field(default_factory=tuple)

    @classmethod
    def from_pairs(cls, pairs) -> "Glossary":
        seen = {}
        for source, target in pairs:
            seen.setdefault(_key(source), (" ".join(source.split()), target.strip()))
        ordered = sorted(seen.values(), key=lambda p: (-len(p[0].split()), -len(p[0]), _key(p[0])))
        return cls(tuple(ordered))

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def _targets(self) -> dict:
        return {_key(s): t for s, t in self.entries}

    @cached_property
    def pattern(self) -> re.Pattern | None:
        if not self.entries:
            return None
        alternatives = (r"\s+".join(re.escape(w) for w in source.split()) for source, _ in self.entries)
        return re.compile(r"(?<!\w)(?:" + "|".join(alternatives) + r")(?!\w)", re.IGNORECASE)

    def target_for(self, matched: str) -> str:
        return self._targets[_key(matched)]


def load_glossary(path) -> Glossary:
    """Read a ``source<TAB>target`` file; ``#`` lines and blank lines are skipped."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2 or not cols[0].strip() or not cols[1].strip():
                raise MalformedLine(lineno, line)
            pairs.append((cols[0], cols[1]))
    if not pairs:
        raise EmptyGlossary(f"no entries in {path}")
    return Glossary.from_pairs(pairs)


def find_terms(sentence: str, g: Glossary) -> list[re.Match]:
    if g.pattern is None:
        return []
    return list(g.pattern.finditer(sentence))


def count_term_matches(sentence: str, g: Glossary) -> int:
    return len(find_terms(sentence, g))


def _match_case(target: str, matched: str) -> str:
    if matched[:1].isupper() and target[:1].islower():
        return target[0].upper() + target[1:]
    return target


def protect_terms(sentence: str, g: Glossary) -> tuple[str, dict]:
    """Mask glossary terms as ``TERMkX`` placeholders.

    Returns the masked sentence and a map from placeholder to target term.  A
    term that starts with a capital letter gets a capitalised target.
    """
    restore = {}
    pieces = []
    pos = 0
    for k, m in enumerate(find_terms(sentence, g), start=1):
        name = f"TERM{k}X"
        restore[name] = _match_case(g.target_for(m.group()), m.group())
        pieces.append(sentence[pos:m.start()])
        pieces.append(name)
        pos = m.end()
    pieces.append(sentence[pos:])
    return "".join(pieces), restore


def unprotect_terms(text: str, restore: dict) -> str:
    return TERM_TOKEN.sub(lambda m: restore.get(m.group(), m.group()), text)
