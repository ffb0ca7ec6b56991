"""A LaTeX-subset parser producing the block/inline tree in ``nodes``.

The parser does not expand macros.  It recognises paragraphs, sectioning
commands, lists, environments, math in all the usual delimiters, comments and
verbatim material; anything else is kept as a command node or raw text so the
document renders back without loss.
"""

from __future__ import annotations

import re

from ..config import DEFAULT_CONFIG, ParserConfig
from ..errors import ParseError, UnbalancedDelimiter, UnmatchedEnvironment
from .nodes import (
    DISPLAY,
    INLINE,
    Arg,
    Command,
    DisplayMathBlock,
    DocumentAst,
    EnvironmentBlock,
    Group,
    Heading,
    ListBlock,
    ListItem,
    Math,
    Paragraph,
    RawBlock,
    RawInline,
    Space,
    Str,
    VerbatimBlock,
)

_BLANK_LINE = re.compile(r"\n[ \t\r\f\v]*\n")
_PAR = re.compile(r"\\par(?![A-Za-z])")
_ENV_TOKEN = r"\\(begin|end)\s*\{%s\}|\\.|%%[^\n]*"
_SYMBOL_ACCENTS = "'`^\"~=."


def parse_document(source: str, config: ParserConfig = DEFAULT_CONFIG) -> DocumentAst:
    """Parse ``source`` into a :class:`DocumentAst`.

    A source without ``\\begin{document}`` is treated as a bare body
    fragment with an empty preamble.
    """
    parser = _Parser(source, config)
    try:
        return parser.document()
    except ParseError as exc:
        raise exc.locate(source)


def parse_inlines(text: str, config: ParserConfig = DEFAULT_CONFIG) -> list:
    """Parse a run of text as inlines only (no paragraph or block structure)."""
    parser = _Parser(text, config)
    try:
        return parser.inlines(0, len(text))
    except ParseError as exc:
        raise exc.locate(text)


def _find_uncommented(text: str, needle: str, start: int = 0) -> int:
    pattern = re.compile(re.escape(needle) + r"|\\.|%[^\n]*")
    for m in pattern.finditer(text, start):
        if m.group() == needle:
            return m.start()
    return -1


class _Parser:
    def __init__(self, src: str, config: ParserConfig):
        self.src = src
        self.n = len(src)
        self.cfg = config

    # -- document and blocks ---------------------------------------------------

    def document(self) -> DocumentAst:
        begin = _find_uncommented(self.src, "\\begin{document}")
        if begin < 0:
            blocks, _, _ = self.blocks(0, None, False, 0)
            return DocumentAst(preamble="", blocks=blocks, trailer="", has_document=False)
        body = begin + len("\\begin{document}")
        blocks, pos, _ = self.blocks(body, "document", False, begin)
        return DocumentAst(
            preamble=self.src[:begin], blocks=blocks, trailer=self.src[pos:], has_document=True
        )

    def blocks(self, pos: int, stop_env: str | None, in_list: bool, begin_pos: int):
        """Parse blocks until ``\\end{stop_env}`` (or ``\\item`` in a list).

        Returns ``(blocks, position, reason)`` with reason one of ``"end"``,
        ``"item"`` or ``"eof"``.  On ``"end"`` the position is past the
        ``\\end{...}``; on ``"item"`` it points at the ``\\item``.
        """
        src = self.src
        out: list = []
        para: list = []
        para_sep = True
        gap = True
        after_comment = False

        def flush():
            nonlocal gap
            while para and isinstance(para[-1], Space):
                para.pop()
            if para:
                out.append(_make_paragraph(list(para), para_sep))
                para.clear()
                gap = False

        while pos < self.n:
            c = src[pos]
            if c.isspace():
                j = pos
                while j < self.n and src[j].isspace():
                    j += 1
                newlines = src.count("\n", pos, j)
                if newlines >= 2 or (newlines and after_comment):
                    flush()
                    gap = True
                elif para:
                    para.append(Space())
                after_comment = False
                pos = j
                continue

            word = self._control_word(pos)
            if word == "begin":
                name, after = self._env_name(pos)
                if name in self.cfg.math_environments:
                    node, pos = self._math_environment(name, pos, after)
                    if not para:
                        para_sep = gap
                    para.append(node)
                    after_comment = False
                    continue
                flush()
                block, pos = self._environment(name, pos, after, gap)
                out.append(block)
                gap = False
                after_comment = False
                continue
            if word == "end":
                name, after = self._env_name(pos)
                if name != stop_env:
                    raise UnmatchedEnvironment(name, pos)
                flush()
                return out, after, "end"
            if word == "item" and in_list:
                flush()
                return out, pos, "item"
            if word in self.cfg.heading_commands:
                heading = self._heading(word, pos, gap and not para)
                if heading is not None:
                    flush()
                    block, pos = heading
                    out.append(block)
                    gap = False
                    after_comment = False
                    continue

            node, pos = self.inline_at(pos, self.n)
            if not para:
                para_sep = gap
            para.append(node)
            after_comment = isinstance(node, RawInline) and node.raw.startswith("%") and node.raw.endswith("\n")

        flush()
        if stop_env is not None:
            raise UnmatchedEnvironment(stop_env, begin_pos)
        return out, pos, "eof"

    def _environment(self, name: str, begin: int, after: int, separated: bool):
        cfg = self.cfg
        if name in cfg.verbatim_environments:
            closer = "\\end{%s}" % name
            end = self.src.find(closer, after)
            if end < 0:
                raise UnmatchedEnvironment(name, begin)
            return VerbatimBlock(self.src[after:end], name, separated), end + len(closer)
        if name in cfg.opaque_environments:
            end = self._env_end(name, after, begin)
            return RawBlock(self.src[begin:end], separated), end
        args, pos = self._env_args(name, after)
        if name in cfg.list_environments:
            lead, pos, reason = self.blocks(pos, name, True, begin)
            items = []
            while reason == "item":
                pos += len("\\item")
                label = None
                if pos < self.n and self.src[pos] == "[":
                    close = self._match_bracket(pos, self.n)
                    if close is not None:
                        label, pos = self.src[pos:close], close
                blocks, pos, reason = self.blocks(pos, name, True, begin)
                items.append(ListItem(blocks, label))
            block = ListBlock(cfg.list_environments[name], items, name, args, lead, separated)
            return block, pos
        blocks, pos, _ = self.blocks(pos, name, False, begin)
        return EnvironmentBlock(name, args, blocks, separated), pos

    def _env_args(self, name: str, pos: int):
        start = pos
        shape = self.cfg.environment_args.get(name)
        if shape is None:
            pos = self._adjacent_groups(pos, self.n)
            return self.src[start:pos], pos
        for opener in shape:
            j = pos
            while j < self.n and self.src[j] in " \t":
                j += 1
            if j >= self.n or self.src[j] != opener:
                continue
            close = self._match_brace(j, self.n) if opener == "{" else self._match_bracket(j, self.n)
            if close is None:
                break
            pos = close
        return self.src[start:pos], pos

    def _heading(self, name: str, pos: int, separated: bool):
        src = self.src
        j = pos + 1 + len(name)
        starred = j < self.n and src[j] == "*"
        if starred:
            j += 1
        k = self._skip_spaces(j)
        short = None
        if k < self.n and src[k] == "[":
            close = self._match_bracket(k, self.n)
            if close is not None:
                short = src[k:close]
                k = self._skip_spaces(close)
        if k >= self.n or src[k] != "{":
            return None
        close = self._match_brace(k, self.n)
        inlines = _strip_spaces(self.inlines(k + 1, close - 1))
        level = self.cfg.heading_commands[name]
        return Heading(level, inlines, starred, short, separated), close

    # -- inlines ---------------------------------------------------------------

    def inlines(self, start: int, end: int) -> list:
        out: list = []
        pos = start
        while pos < end:
            if self.src[pos].isspace():
                while pos < end and self.src[pos].isspace():
                    pos += 1
                if not (out and isinstance(out[-1], Space)):
                    out.append(Space())
                continue
            if self._control_word(pos) == "end":
                name, _ = self._env_name(pos)
                raise UnmatchedEnvironment(name, pos)
            node, pos = self.inline_at(pos, end)
            out.append(node)
        return out

    def inline_at(self, pos: int, end: int):
        """Parse one non-whitespace inline starting at ``pos``."""
        src = self.src
        c = src[pos]
        if c == "%":
            nl = src.find("\n", pos, end)
            stop = end if nl < 0 else nl + 1
            return RawInline(src[pos:stop]), stop
        if c == "$":
            return self._dollar_math(pos, end)
        if c == "{":
            close = self._match_brace(pos, end)
            inner = src[pos + 1:close - 1]
            if _needs_raw(inner):
                return RawInline(src[pos:close]), close
            return Group(self.inlines(pos + 1, close - 1)), close
        if c == "}":
            raise UnbalancedDelimiter("}", pos)
        if c == "\\":
            nxt = src[pos + 1] if pos + 1 < end else ""
            if nxt == "\\":
                stop = pos + 2
                if stop < end and src[stop] == "*":
                    stop += 1
                if stop < end and src[stop] == "[":
                    close = self._match_bracket(stop, end)
                    if close is not None:
                        stop = close
                return RawInline(src[pos:stop]), stop
            if nxt == "(":
                close = self._find_closer(pos + 2, end, "\\)", "\\(")
                return Math(INLINE, src[pos + 2:close], "\\("), close + 2
            if nxt == "[":
                close = self._find_closer(pos + 2, end, "\\]", "\\[")
                return Math(DISPLAY, src[pos + 2:close], "\\["), close + 2
            if nxt in (")", "]"):
                raise UnbalancedDelimiter("\\" + nxt, pos)
            if nxt == "" or nxt.isspace():
                return RawInline(src[pos:pos + 2]), pos + 2
            if _is_letter(nxt):
                return self._command(pos, end)
        return self._string(pos, end)

    def _string(self, pos: int, end: int):
        src = self.src
        i = pos
        while i < end:
            c = src[i]
            if c.isspace() or c in "$%{}":
                break
            if c == "\\":
                nxt = src[i + 1] if i + 1 < end else ""
                if nxt == "" or nxt.isspace() or _is_letter(nxt) or nxt in "\\()[]":
                    break
                i += 2
                if nxt in _SYMBOL_ACCENTS and i < end and src[i] == "{":
                    close = self._match_brace(i, end)
                    if not any(ch.isspace() for ch in src[i:close]):
                        i = close
                continue
            i += 1
        return Str(src[pos:i]), i

    def _command(self, pos: int, end: int):
        src = self.src
        name = self._control_word(pos)
        j = pos + 1 + len(name)
        if name == "begin":
            env, after = self._env_name(pos)
            if env in self.cfg.math_environments:
                return self._math_environment(env, pos, after)
            if env in self.cfg.verbatim_environments:
                closer = "\\end{%s}" % env
                stop = src.find(closer, after)
                if stop < 0:
                    raise UnmatchedEnvironment(env, pos)
                stop += len(closer)
            else:
                stop = self._env_end(env, after, pos)
            return RawInline(src[pos:stop]), stop
        if name == "verb":
            k = j + 1 if j < end and src[j] == "*" else j
            if k >= end:
                raise UnbalancedDelimiter("\\verb", pos)
            delim = src[k]
            close = src.find(delim, k + 1, end)
            if close < 0 or "\n" in src[k + 1:close]:
                raise UnbalancedDelimiter("\\verb" + delim, pos)
            return RawInline(src[pos:close + 1]), close + 1
        if j < end and src[j] == "*":
            name += "*"
            j += 1
        raw_only = name.rstrip("*") in self.cfg.raw_arg_commands
        args = []
        while j < end and src[j] in "{[":
            if src[j] == "{":
                close = self._match_brace(j, end)
                inner = src[j + 1:close - 1]
                if raw_only or _needs_raw(inner):
                    args.append(Arg("{", inner))
                else:
                    args.append(Arg("{", "", self.inlines(j + 1, close - 1)))
            else:
                close = self._match_bracket(j, end)
                if close is None:
                    break
                args.append(Arg("[", src[j + 1:close - 1]))
            j = close
        return Command(name, args), j

    # -- math --------------------------------------------------------------------

    def _dollar_math(self, pos: int, end: int):
        src = self.src
        if src.startswith("$$", pos):
            close = self._find_closer(pos + 2, end, "$$", "$$")
            return Math(DISPLAY, src[pos + 2:close], "$$"), close + 2
        close = self._find_closer(pos + 1, end, "$", "$")
        return Math(INLINE, src[pos + 1:close], "$"), close + 1

    def _math_environment(self, name: str, begin: int, after: int):
        stop = self._env_end(name, after, begin)
        closer_start = self.src.rfind("\\end", after, stop)
        mode = self.cfg.math_environments[name]
        return Math(mode, self.src[after:closer_start], name), stop

    def _find_closer(self, pos: int, end: int, closer: str, opener: str) -> int:
        """Index of ``closer`` ending a formula body that starts at ``pos``."""
        src = self.src
        depth = 0
        i = pos
        while i < end:
            c = src[i]
            if depth == 0 and src.startswith(closer, i):
                return i
            if c == "\\":
                i += 2
                continue
            if c == "%":
                nl = src.find("\n", i, end)
                i = end if nl < 0 else nl + 1
                continue
            if c == "{":
                depth += 1
            elif c == "}":
                depth = max(depth - 1, 0)
            i += 1
        raise UnbalancedDelimiter(opener, pos - len(opener))

    # -- scanning helpers --------------------------------------------------------

    def _control_word(self, pos: int) -> str | None:
        src = self.src
        if pos + 1 >= self.n or src[pos] != "\\" or not _is_letter(src[pos + 1]):
            return None
        j = pos + 1
        while j < self.n and _is_letter(src[j]):
            j += 1
        return src[pos + 1:j]

    def _env_name(self, pos: int):
        word = self._control_word(pos)
        j = self._skip_spaces(pos + 1 + len(word))
        if j >= self.n or self.src[j] != "{":
            raise UnbalancedDelimiter("\\" + word, pos)
        close = self.src.find("}", j)
        if close < 0:
            raise UnbalancedDelimiter("{", j)
        return self.src[j + 1:close].strip(), close + 1

    def _env_end(self, name: str, pos: int, begin: int) -> int:
        """Position just past the ``\\end{name}`` matching an open ``\\begin{name}``."""
        depth = 1
        for m in re.compile(_ENV_TOKEN % re.escape(name)).finditer(self.src, pos):
            kind = m.group(1)
            if kind == "begin":
                depth += 1
            elif kind == "end":
                depth -= 1
                if depth == 0:
                    return m.end()
        raise UnmatchedEnvironment(name, begin)

    def _skip_spaces(self, pos: int) -> int:
        while pos < self.n and self.src[pos] in " \t":
            pos += 1
        return pos

    def _adjacent_groups(self, pos: int, end: int) -> int:
        while pos < end and self.src[pos] in "{[":
            if self.src[pos] == "{":
                pos = self._match_brace(pos, end)
            else:
                close = self._match_bracket(pos, end)
                if close is None:
                    break
                pos = close
        return pos

    def _match_brace(self, pos: int, end: int) -> int:
        """Position just past the ``}`` matching the ``{`` at ``pos``."""
        src = self.src
        depth = 0
        i = pos
        while i < end:
            c = src[i]
            if c == "\\":
                i += 2
                continue
            if c == "%":
                nl = src.find("\n", i, end)
                if nl < 0:
                    break
                i = nl + 1
                continue
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    return i + 1
            i += 1
        raise UnbalancedDelimiter("{", pos)

    def _match_bracket(self, pos: int, end: int) -> int | None:
        """Position past the ``]`` closing an optional argument, or None."""
        src = self.src
        depth = 0
        i = pos + 1
        while i < end:
            c = src[i]
            if c == "\\":
                i += 2
                continue
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth < 0:
                    return None
            elif c == "]" and depth == 0:
                return i + 1
            elif c == "\n" and src.startswith("\n", i + 1):
                return None
            i += 1
        return None


def _needs_raw(text: str) -> bool:
    # Paragraph breaks and nested environments cannot live in an inline list.
    return bool(_BLANK_LINE.search(text) or _PAR.search(text)) or "\\begin" in text


def _is_letter(ch: str) -> bool:
    return ch.isascii() and ch.isalpha()


def _strip_spaces(inlines: list) -> list:
    while inlines and isinstance(inlines[0], Space):
        inlines.pop(0)
    while inlines and isinstance(inlines[-1], Space):
        inlines.pop()
    return inlines


def _make_paragraph(inlines: list, separated: bool):
    content = [n for n in inlines if not isinstance(n, Space)]
    if len(content) == 1 and isinstance(content[0], Math) and content[0].mode == DISPLAY:
        return DisplayMathBlock(content[0].tex, content[0].delim, separated)
    return Paragraph(inlines, separated)
