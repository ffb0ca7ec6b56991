import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from texmt.backends import GlossaryWrappedBackend, HttpBackend, IdentityBackend, MockDictionaryBackend
from texmt.errors import MalformedResponse, Timeout, Unreachable
from texmt.glossary import Glossary
from texmt.results import BackendRequest, TranslationResult


class StubHandler(BaseHTTPRequestHandler):
    calls = []

    def log_message(self, *args):
        pass

    def _reply(self, status, body: bytes):
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        try:
            self.wfile.write(body)
        except BrokenPipeError:
            pass  # the client already gave up (timeout test)

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        payload = json.loads(self.rfile.read(length))
        StubHandler.calls.append((self.path, payload, self.headers.get("Authorization")))
        if self.path == "/echo":
            words = payload["text"].split()
            body = {"text": payload["text"], "token_logprobs": [-0.1] * len(words) if payload["logprobs"] else None}
            self._reply(200, json.dumps(body).encode())
        elif self.path == "/nolog":
            self._reply(200, json.dumps({"text": payload["text"]}).encode())
        elif self.path == "/bad-json":
            self._reply(200, b"not json")
        elif self.path == "/bad-scores":
            self._reply(200, json.dumps({"text": "x", "token_logprobs": [0.5]}).encode())
        elif self.path == "/client-error":
            self._reply(400, b"{}")
        elif self.path == "/server-error":
            self._reply(503, b"{}")
        elif self.path == "/slow":
            time.sleep(1.0)
            self._reply(200, json.dumps({"text": "late"}).encode())
        else:
            self._reply(404, b"{}")


@pytest.fixture(scope="module")
def stub_url():
    server = ThreadingHTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


def test_request_rejects_blank_text():
    with pytest.raises(ValueError):
        BackendRequest("   ")


def test_translation_result_perplexity():
    assert TranslationResult("x", (0.0, 0.0)).perplexity == 1.0
    assert TranslationResult("x", None).perplexity is None


def test_mock_dictionary_example():
    backend = MockDictionaryBackend({"cat": "chat"})
    result = backend.translate(BackendRequest("the cat"))
    assert result.text == "the chat"
    assert result.token_logprobs == (0.0, 0.0)
    assert result.backend_id == "mock"


def test_mock_passes_tokens_and_keeps_punctuation_and_case():
    backend = MockDictionaryBackend({"cat": "chat", "is": "est"})
    assert backend.translate(BackendRequest("Cat, MATH1X is RAW2X.")).text == "Chat, MATH1X est RAW2X."


def test_mock_logprob_modes():
    assert MockDictionaryBackend({}, logprobs=None).translate(BackendRequest("a b")).token_logprobs is None
    scored = MockDictionaryBackend({}, logprobs=lambda text: [-1.0] * len(text.split()))
    assert scored.translate(BackendRequest("a b c")).token_logprobs == (-1.0, -1.0, -1.0)
    no_scores = MockDictionaryBackend({}).translate(BackendRequest("a", want_logprobs=False))
    assert no_scores.token_logprobs is None


def test_mock_from_tsv(tmp_path):
    path = tmp_path / "d.tsv"
    path.write_text("# comment\ncat\tchat\n\ndog\tchien\n", encoding="utf-8")
    backend = MockDictionaryBackend.from_tsv(path)
    assert backend.translate(BackendRequest("cat dog")).text == "chat chien"


def test_identity_backend():
    assert IdentityBackend().translate(BackendRequest("same MATH1X text")).text == "same MATH1X text"


def test_glossary_wrapped_identity():
    backend = GlossaryWrappedBackend(IdentityBackend(), Glossary.from_pairs([("field", "corps")]))
    result = backend.translate(BackendRequest("a perfect field"))
    assert result.text == "a perfect corps"
    assert result.backend_id == "glossary+identity"


def test_glossary_never_touches_math_tokens():
    backend = GlossaryWrappedBackend(IdentityBackend(), Glossary.from_pairs([("x", "y")]))
    assert backend.translate(BackendRequest("MATH1X x")).text == "MATH1X y"


def test_http_echo_is_identity(stub_url):
    backend = HttpBackend(stub_url + "/echo", api_key="secret")
    result = backend.translate(BackendRequest("hello MATH1X world"))
    assert result.text == "hello MATH1X world"
    assert result.token_logprobs == (-0.1, -0.1, -0.1)
    path, payload, auth = StubHandler.calls[-1]
    assert payload == {"src": "en", "tgt": "fr", "text": "hello MATH1X world", "logprobs": True}
    assert auth == "Bearer secret"


def test_http_without_scores(stub_url):
    assert HttpBackend(stub_url + "/nolog").translate(BackendRequest("a")).token_logprobs is None


@pytest.mark.parametrize("path", ["/bad-json", "/bad-scores", "/client-error"])
def test_http_malformed(stub_url, path):
    with pytest.raises(MalformedResponse):
        HttpBackend(stub_url + path, retries=0).translate(BackendRequest("a"))


def test_http_server_error_is_retried_then_unreachable(stub_url):
    before = len(StubHandler.calls)
    with pytest.raises(Unreachable):
        HttpBackend(stub_url + "/server-error", retries=2, backoff=0.0).translate(BackendRequest("a"))
    assert len(StubHandler.calls) - before == 3


def test_http_timeout(stub_url):
    with pytest.raises(Timeout):
        HttpBackend(stub_url + "/slow", timeout=0.2, retries=0).translate(BackendRequest("a"))


def test_http_unreachable():
    with pytest.raises(Unreachable):
        HttpBackend("http://127.0.0.1:9/none", timeout=1, retries=0).translate(BackendRequest("a"))
