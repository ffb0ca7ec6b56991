"""Parallel corpus curation: tokenization, domain filtering, splits, statistics."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field

from .errors import BadRatios, MismatchedLengths
from .glossary import Glossary, count_term_matches

# placeholders stay whole; a word may carry inner punctuation ("p.d.f",
# "don't", "x-axis"); any other non-space character is its own token
_TOKEN = re.compile(r"(?:MATH|RAW|TERM)[1-9]\d*X|\w+(?:[^\w\s]+\w+)*|[^\w\s]")


@dataclass
class ParallelCorpus:
    pairs: list = field(default_factory=list)
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def sources(self) -> list[str]:
        return [s for s, _ in self.pairs]

    @property
    def targets(self) -> list[str]:
        return [t for _, t in self.pairs]


def word_tokenize(text: str) -> list[str]:
    """Split ``text`` into words and punctuation marks.

    >>> word_tokenize("Let MATH1X, then.")
    ['Let', 'MATH1X', ',', 'then', '.']
    """
    return _TOKEN.findall(text)


def filter_by_glossary(c: ParallelCorpus, g: Glossary, min_terms: int = 2) -> ParallelCorpus:
    """Keep the pairs whose source side holds at least ``min_terms`` glossary terms."""
    if min_terms < 1:
        raise ValueError("min_terms must be at least 1")
    kept = [(s, t) for s, t in c.pairs if count_term_matches(s, g) >= min_terms]
    return ParallelCorpus(kept, c.provenance)


def split_sizes(n: int, ratios=(0.8, 0.1, 0.1)) -> tuple[int, int, int]:
    _check_ratios(ratios)
    # the epsilon keeps 0.1 * 10 from flooring to 0 after rounding error
    valid = math.floor(ratios[1] * n + 1e-9)
    test = math.floor(ratios[2] * n + 1e-9)
    return n - valid - test, valid, test


def _check_ratios(ratios) -> None:
    if len(ratios) != 3 or any(r < 0 or math.isnan(r) for r in ratios):
        raise BadRatios(f"expected three non-negative ratios, got {ratios!r}")
    if abs(math.fsum(ratios) - 1.0) > 1e-9:
        raise BadRatios(f"ratios must sum to 1, got {math.fsum(ratios)}")


def shuffle_split(c: ParallelCorpus, ratios=(0.8, 0.1, 0.1), seed: int = 0):
    """Shuffle with a seeded RNG and cut into (train, valid, test)."""
    n_train, n_valid, _ = split_sizes(len(c.pairs), ratios)
    order = list(range(len(c.pairs)))
    random.Random(seed).shuffle(order)
    picked = [c.pairs[i] for i in order]
    name = c.provenance or "corpus"
    return (
        ParallelCorpus(picked[:n_train], f"{name}:train"),
        ParallelCorpus(picked[n_train:n_train + n_valid], f"{name}:valid"),
        ParallelCorpus(picked[n_train + n_valid:], f"{name}:test"),
    )


def vocab_size(sentences, casefold: bool = False) -> int:
    vocab = set()
    for sentence in sentences:
        tokens = word_tokenize(sentence)
        if casefold:
            tokens = [t.casefold() for t in tokens]
        vocab.update(tokens)
    return len(vocab)


def _lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n").rstrip("\r") for line in fh]


def read_parallel(source_path, target_path, provenance: str | None = None) -> ParallelCorpus:
    src, tgt = _lines(source_path), _lines(target_path)
    if len(src) != len(tgt):
        raise MismatchedLengths(f"{source_path} has {len(src)} lines, {target_path} has {len(tgt)}")
    return ParallelCorpus(list(zip(src, tgt)), provenance or str(source_path))


def read_tsv(path, provenance: str | None = None) -> ParallelCorpus:
    pairs = []
    for lineno, line in enumerate(_lines(path), start=1):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise MismatchedLengths(f"{path}:{lineno}: expected two tab-separated columns")
        pairs.append((cols[0], cols[1]))
    return ParallelCorpus(pairs, provenance or str(path))


def write_parallel(c: ParallelCorpus, source_path, target_path) -> None:
    with open(source_path, "w", encoding="utf-8") as fs, open(target_path, "w", encoding="utf-8") as ft:
        for s, t in c.pairs:
            fs.write(s + "\n")
            ft.write(t + "\n")


def write_tsv(c: ParallelCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s, t in c.pairs:
            fh.write(f"{s}\t{t}\n")
