"""Request/result records exchanged with backends, and the perplexity score."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyScoreList


def perplexity(token_logprobs) -> float:
    """exp of the negative mean token log-likelihood; 1.0 is full confidence."""
    scores = list(token_logprobs)
    if not scores:
        raise EmptyScoreList("perplexity needs at least one token log-likelihood")
    for s in scores:
        if math.isnan(s) or s > 0:
            raise ValueError(f"token log-likelihoods must be <= 0, got {s}")
    return math.exp(-math.fsum(scores) / len(scores))


@dataclass(frozen=True)
class BackendRequest:
    text: str
    source_lang: str = "en"
    target_lang: str = "fr"
    want_logprobs: bool = True

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("backend request text is empty")


@dataclass(frozen=True)
class TranslationResult:
    text: str
    token_logprobs: tuple | None = None
    backend_id: str = ""

    @property
    def perplexity(self) -> float | None:
        if not self.token_logprobs:
            return None
        return perplexity(self.token_logprobs)
