"""Translation backends.

A backend is any object with a ``backend_id`` string, a ``max_concurrency``
integer and a ``translate(request) -> TranslationResult`` method.  Errors are
reported by raising :class:`~texmt.errors.BackendError` subclasses.
"""

from __future__ import annotations

import json
import logging
import math
import re
import socket
import time
import urllib.error
import urllib.request
from typing import Callable, Protocol, Sequence

from .errors import MalformedResponse, Timeout, Unreachable
from .glossary import Glossary, protect_terms, unprotect_terms
from .results import BackendRequest, TranslationResult

logger = logging.getLogger(__name__)


class Backend(Protocol):
    backend_id: str
    max_concurrency: int

    def translate(self, request: BackendRequest) -> TranslationResult: ...


_WORD = re.compile(r"^([^\w]*)(.*?)([^\w]*)$", re.DOTALL)


class MockDictionaryBackend:
    """Word-for-word lookup with synthetic token log-likelihoods.

    Unknown words (math tokens included) pass through unchanged.  ``logprobs``
    is a constant per-token log-likelihood, a callable mapping the request
    text to a list of log-likelihoods, or None to return no scores.
    """

    def __init__(
        self,
        dictionary: dict | None = None,
        logprobs: float | Callable[[str], Sequence[float]] | None = 0.0,
        backend_id: str = "mock",
        max_concurrency: int = 8,
    ):
        self.dictionary = {k.casefold(): v for k, v in (dictionary or {}).items()}
        self.logprobs = logprobs
        self.backend_id = backend_id
        self.max_concurrency = max_concurrency

    @classmethod
    def from_tsv(cls, path, **kwargs) -> "MockDictionaryBackend":
        words = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip() or line.startswith("#"):
                    continue
                src, _, tgt = line.rstrip("\n").partition("\t")
                words.setdefault(src.strip(), tgt.strip())
        return cls(words, **kwargs)

    def _word(self, word: str) -> str:
        lead, core, trail = _WORD.match(word).groups()
        hit = self.dictionary.get(core.casefold())
        if hit is None:
            return word
        if core[:1].isupper() and hit[:1].islower():
            hit = hit[0].upper() + hit[1:]
        return lead + hit + trail

    def translate(self, request: BackendRequest) -> TranslationResult:
        out = " ".join(self._word(w) for w in request.text.split())
        scores = None
        if request.want_logprobs and self.logprobs is not None:
            if callable(self.logprobs):
                scores = tuple(self.logprobs(request.text))
            else:
                scores = (float(self.logprobs),) * max(len(out.split()), 1)
        return TranslationResult(out, scores, self.backend_id)


class IdentityBackend(MockDictionaryBackend):
    def __init__(self, logprobs=0.0, backend_id: str = "identity", max_concurrency: int = 8):
        super().__init__({}, logprobs, backend_id, max_concurrency)


class HttpBackend:
    """JSON-over-HTTP client for an NMT server.

    Request body: ``{"src", "tgt", "text", "logprobs"}``.  Response body:
    ``{"text": str, "token_logprobs": [float, ...] | null}``.
    """

    def __init__(
        self,
        url: str,
        timeout: float = 30.0,
        retries: int = 2,
        api_key: str | None = None,
        backend_id: str | None = None,
        max_concurrency: int = 4,
        backoff: float = 0.5,
    ):
        self.url = url
        self.timeout = timeout
        self.retries = retries
        self.api_key = api_key
        self.backend_id = backend_id or f"http:{url}"
        self.max_concurrency = max_concurrency
        self.backoff = backoff

    def _post(self, payload: dict) -> bytes:
        headers = {"Content-Type": "application/json; charset=utf-8", "Accept": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(
            self.url, data=json.dumps(payload).encode("utf-8"), headers=headers, method="POST"
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.read()
        except urllib.error.HTTPError as exc:
            if 400 <= exc.code < 500:
                raise MalformedResponse(f"{self.url} rejected the request: HTTP {exc.code}") from exc
            raise Unreachable(f"{self.url} answered HTTP {exc.code}") from exc
        except (socket.timeout, TimeoutError) as exc:
            raise Timeout(f"{self.url} timed out after {self.timeout}s") from exc
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                raise Timeout(f"{self.url} timed out after {self.timeout}s") from exc
            raise Unreachable(f"{self.url}: {exc.reason}") from exc
        except OSError as exc:
            raise Unreachable(f"{self.url}: {exc}") from exc

    def translate(self, request: BackendRequest) -> TranslationResult:
        payload = {
            "src": request.source_lang,
            "tgt": request.target_lang,
            "text": request.text,
            "logprobs": request.want_logprobs,
        }
        for attempt in range(self.retries + 1):
            try:
                body = self._post(payload)
                break
            except (Timeout, Unreachable) as exc:
                if attempt == self.retries:
                    raise
                logger.warning("retrying %s after %s", self.url, exc)
                time.sleep(self.backoff * (2 ** attempt))
        return self._decode(body)

    def _decode(self, body: bytes) -> TranslationResult:
        try:
            data = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MalformedResponse(f"{self.url} returned invalid JSON") from exc
        if not isinstance(data, dict) or not isinstance(data.get("text"), str):
            raise MalformedResponse(f"{self.url} response has no text field")
        scores = data.get("token_logprobs")
        if scores is not None:
            if not isinstance(scores, list) or not all(
                isinstance(s, (int, float)) and not isinstance(s, bool) and math.isfinite(s) and s <= 0
                for s in scores
            ):
                raise MalformedResponse(f"{self.url} returned invalid token_logprobs")
            scores = tuple(float(s) for s in scores) or None
        return TranslationResult(data["text"], scores, self.backend_id)


class GlossaryWrappedBackend:
    """Mask glossary terms before calling ``inner`` and put target terms back after."""

    def __init__(self, inner, glossary: Glossary):
        self.inner = inner
        self.glossary = glossary
        self.backend_id = f"glossary+{inner.backend_id}"
        self.max_concurrency = inner.max_concurrency

    def translate(self, request: BackendRequest) -> TranslationResult:
        masked, restore = protect_terms(request.text, self.glossary)
        inner = self.inner.translate(
            BackendRequest(masked, request.source_lang, request.target_lang, request.want_logprobs)
        )
        return TranslationResult(unprotect_terms(inner.text, restore), inner.token_logprobs, self.backend_id)
