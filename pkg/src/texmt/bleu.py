"""Corpus-level BLEU with clipped n-gram precision and a brevity penalty."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .corpus import word_tokenize
from .errors import EmptyCorpus, MismatchedLengths

MAX_N = 4


def _tokens(sentence) -> list[str]:
    return word_tokenize(sentence) if isinstance(sentence, str) else list(sentence)


def _ngrams(tokens: list, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def clipped_ngram_precision(hyps, refs, n: int) -> tuple[int, int]:
    """(clipped matches, hypothesis n-gram count) summed over the corpus.

    Sentences are strings (tokenized with ``word_tokenize``) or token lists.
    """
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}")
    if len(hyps) != len(refs):
        raise MismatchedLengths(f"{len(hyps)} hypotheses but {len(refs)} references")
    matches = total = 0
    for hyp, ref in zip(hyps, refs):
        h = _ngrams(_tokens(hyp), n)
        r = _ngrams(_tokens(ref), n)
        matches += sum(min(count, r[gram]) for gram, count in h.items())
        total += sum(h.values())
    return matches, total


@dataclass(frozen=True)
class BleuReport:
    precisions: tuple
    brevity_penalty: float
    score: float
    hyp_len: int
    ref_len: int
    matches: tuple = ()
    totals: tuple = ()
    smooth: bool = False

    def to_json(self) -> dict:
        return {
            "score": self.score,
            "bleu": 100.0 * self.score,
            "precisions": list(self.precisions),
            "brevity_penalty": self.brevity_penalty,
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
            "matches": list(self.matches),
            "totals": list(self.totals),
            "smooth": self.smooth,
        }

    def summary(self) -> str:
        p = "/".join(f"{100 * x:.1f}" for x in self.precisions)
        return (f"BLEU = {100 * self.score:.2f} {p} (BP={self.brevity_penalty:.3f}, "
                f"hyp_len={self.hyp_len}, ref_len={self.ref_len})")


def bleu(hyps, refs, smooth: bool = False) -> BleuReport:
    """Corpus BLEU of ``hyps`` against one reference each.

    Without ``smooth`` any zero precision makes the score 0.  With it,
    precisions for n >= 2 use add-one counts.
    """
    if len(hyps) != len(refs):
        raise MismatchedLengths(f"{len(hyps)} hypotheses but {len(refs)} references")
    if not hyps:
        raise EmptyCorpus("BLEU needs at least one sentence pair")
    hyp_tokens = [_tokens(h) for h in hyps]
    ref_tokens = [_tokens(r) for r in refs]
    hyp_len = sum(map(len, hyp_tokens))
    ref_len = sum(map(len, ref_tokens))

    matches, totals, precisions = [], [], []
    for n in range(1, MAX_N + 1):
        m, t = clipped_ngram_precision(hyp_tokens, ref_tokens, n)
        matches.append(m)
        totals.append(t)
        if smooth and n > 1:
            precisions.append((m + 1) / (t + 1))
        else:
            precisions.append(m / t if t else 0.0)

    if hyp_len == 0:
        bp = 0.0
    elif hyp_len > ref_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_len / hyp_len)

    if min(precisions) > 0 and bp > 0:
        score = bp * math.exp(math.fsum(math.log(p) / MAX_N for p in precisions))
    else:
        score = 0.0
    score = min(score, 1.0)
    return BleuReport(tuple(precisions), bp, score, hyp_len, ref_len,
                      tuple(matches), tuple(totals), smooth)
