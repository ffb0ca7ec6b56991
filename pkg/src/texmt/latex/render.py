"""Render a document tree back to LaTeX source."""

from __future__ import annotations

from .nodes import (
    DISPLAY,
    INLINE,
    Command,
    DisplayMathBlock,
    DocumentAst,
    EnvironmentBlock,
    Group,
    Heading,
    ListBlock,
    Math,
    Paragraph,
    RawBlock,
    RawInline,
    Space,
    Str,
    VerbatimBlock,
)

_HEADING_NAMES = {1: "section", 2: "subsection", 3: "subsubsection", 4: "paragraph", 5: "subparagraph"}

_MATH_DELIMS = {"$": ("$", "$"), "\\(": ("\\(", "\\)"), "$$": ("$$", "$$"), "\\[": ("\\[", "\\]")}


def render_document(ast: DocumentAst) -> str:
    body = render_blocks(ast.blocks)
    if not ast.has_document:
        return body
    return f"{ast.preamble}\\begin{{document}}\n{body}\n\\end{{document}}{ast.trailer}"


def render_blocks(blocks: list) -> str:
    out = ""
    for i, block in enumerate(blocks):
        text = render_block(block)
        if i:
            sep = "\n\n" if block.separated else "\n"
            # a trailing comment already ends its line
            if out.endswith("\n"):
                sep = sep[1:]
            out += sep
        out += text
    return out


def render_block(block) -> str:
    if isinstance(block, Paragraph):
        return render_inlines(block.inlines)
    if isinstance(block, Heading):
        star = "*" if block.starred else ""
        return f"\\{_HEADING_NAMES[block.level]}{star}{block.short or ''}{{{render_inlines(block.inlines)}}}"
    if isinstance(block, DisplayMathBlock):
        if not block.delim:
            return f"\\[\n{block.tex}\n\\]"
        return render_math(Math(DISPLAY, block.tex, block.delim))
    if isinstance(block, EnvironmentBlock):
        return _wrap(block.name, block.args, render_blocks(block.blocks))
    if isinstance(block, ListBlock):
        parts = []
        if block.lead:
            parts.append(render_blocks(block.lead))
        for item in block.items:
            head = "\\item" + (item.label or "")
            body = render_blocks(item.blocks)
            parts.append(f"{head} {body}" if body else head)
        return _wrap(block.name, block.args, _join_lines(parts))
    if isinstance(block, VerbatimBlock):
        return f"\\begin{{{block.name}}}{block.raw}\\end{{{block.name}}}"
    if isinstance(block, RawBlock):
        return block.raw
    raise TypeError(f"not a block node: {block!r}")


def _join_lines(parts: list[str]) -> str:
    out = ""
    for i, part in enumerate(parts):
        if i and not out.endswith("\n"):
            out += "\n"
        out += part
    return out


def _wrap(name: str, args: str, body: str) -> str:
    return _join_lines([f"\\begin{{{name}}}{args}", body, f"\\end{{{name}}}"] if body else
                       [f"\\begin{{{name}}}{args}", f"\\end{{{name}}}"])


def render_math(node: Math) -> str:
    delim = node.delim or ("$" if node.mode == INLINE else "\\[")
    if delim in _MATH_DELIMS:
        left, right = _MATH_DELIMS[delim]
        return f"{left}{node.tex}{right}"
    return f"\\begin{{{delim}}}{node.tex}\\end{{{delim}}}"


def render_inlines(inlines: list) -> str:
    out = []
    last = ""
    for i, node in enumerate(inlines):
        if isinstance(node, Space):
            prev = inlines[i - 1] if i else None
            nxt = inlines[i + 1] if i + 1 < len(inlines) else None
            if isinstance(prev, RawInline) and prev.raw.endswith("\n"):
                text = ""  # a comment already ended the line
            else:
                text = "\n" if _is_display(prev) or _is_display(nxt) else " "
        elif isinstance(node, Str):
            text = node.text
            # keep "\foo" + "bar" from fusing into "\foobar"
            if text[:1].isalpha() and _ends_with_control_word(last):
                out.append("{}")
        elif isinstance(node, Math):
            text = render_math(node)
            # "$a$" + "$b$" would reopen as display math
            if text.startswith("$") and last.endswith("$"):
                out.append("{}")
        elif isinstance(node, Command):
            text = "\\" + node.name + "".join(_render_arg(a) for a in node.args)
        elif isinstance(node, Group):
            text = "{" + render_inlines(node.inlines) + "}"
        elif isinstance(node, RawInline):
            text = node.raw
        else:
            raise TypeError(f"not an inline node: {node!r}")
        out.append(text)
        last = text
    return "".join(out)


def _render_arg(arg) -> str:
    close = "}" if arg.open == "{" else "]"
    body = arg.raw if arg.inlines is None else render_inlines(arg.inlines)
    return arg.open + body + close


def _is_display(node) -> bool:
    return isinstance(node, Math) and node.mode == DISPLAY


def _ends_with_control_word(text: str) -> bool:
    i = len(text)
    while i and text[i - 1].isascii() and text[i - 1].isalpha():
        i -= 1
    return i < len(text) and i > 0 and text[i - 1] == "\\" and (i < 2 or text[i - 2] != "\\")
