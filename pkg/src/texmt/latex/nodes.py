"""Block/inline node types for parsed LaTeX documents.

Every node is a frozen dataclass.  Nodes serialise to JSON as an object with a
``"t"`` key naming the node type plus one key per dataclass field; see
``to_json``/``from_json`` and the README for the field list.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Union

INLINE = "inline"
DISPLAY = "display"


# -- inline nodes ------------------------------------------------------------


@dataclass(frozen=True)
class Str:
    text: str


@dataclass(frozen=True)
class Space:
    pass


@dataclass(frozen=True)
class Math:
    """A formula.  ``tex`` is the body without delimiters.

    ``delim`` records the delimiter style: ``"$"``, ``"\\("``, ``"$$"``,
    ``"\\["`` or an environment name such as ``"equation*"``.  An empty
    string means the canonical delimiter for ``mode``.
    """

    mode: str
    tex: str
    delim: str = ""


@dataclass(frozen=True)
class Arg:
    """One command argument.  ``open`` is ``"{"`` or ``"["``.

    When ``inlines`` is None the argument renders from ``raw``.
    """

    open: str
    raw: str
    inlines: list | None = None


@dataclass(frozen=True)
class Command:
    name: str
    args: list = field(default_factory=list)

    def brace_args(self) -> list[Arg]:
        return [a for a in self.args if a.open == "{"]


@dataclass(frozen=True)
class Group:
    """A bare ``{...}`` group in running text."""

    inlines: list = field(default_factory=list)


@dataclass(frozen=True)
class RawInline:
    raw: str


Inline = Union[Str, Space, Math, Command, Group, RawInline]


# -- block nodes -------------------------------------------------------------
# ``separated`` is True when the block was preceded by a blank line (a TeX
# paragraph break); the renderer uses a single newline otherwise.


@dataclass(frozen=True)
class Paragraph:
    inlines: list
    separated: bool = True


@dataclass(frozen=True)
class Heading:
    level: int
    inlines: list
    starred: bool = False
    short: str | None = None
    separated: bool = True


@dataclass(frozen=True)
class ListItem:
    blocks: list
    label: str | None = None


@dataclass(frozen=True)
class ListBlock:
    ordered: bool
    items: list
    name: str = "itemize"
    args: str = ""
    lead: list = field(default_factory=list)
    separated: bool = True


@dataclass(frozen=True)
class DisplayMathBlock:
    tex: str
    delim: str = ""
    separated: bool = True


@dataclass(frozen=True)
class EnvironmentBlock:
    name: str
    args: str
    blocks: list
    separated: bool = True


@dataclass(frozen=True)
class VerbatimBlock:
    raw: str
    name: str = "verbatim"
    separated: bool = True


@dataclass(frozen=True)
class RawBlock:
    raw: str
    separated: bool = True


Block = Union[Paragraph, Heading, ListBlock, DisplayMathBlock, EnvironmentBlock, VerbatimBlock, RawBlock]


@dataclass(frozen=True)
class DocumentAst:
    preamble: str
    blocks: list
    trailer: str
    has_document: bool = True


_NODE_TYPES = {
    cls.__name__: cls
    for cls in (
        Str, Space, Math, Arg, Command, Group, RawInline,
        Paragraph, Heading, ListItem, ListBlock, DisplayMathBlock,
        EnvironmentBlock, VerbatimBlock, RawBlock, DocumentAst,
    )
}


def to_json(node: Any) -> Any:
    if isinstance(node, list):
        return [to_json(n) for n in node]
    if dataclasses.is_dataclass(node):
        out = {"t": type(node).__name__}
        for f in dataclasses.fields(node):
            out[f.name] = to_json(getattr(node, f.name))
        return out
    return node


def from_json(obj: Any) -> Any:
    if isinstance(obj, list):
        return [from_json(o) for o in obj]
    if isinstance(obj, dict):
        kwargs = {k: from_json(v) for k, v in obj.items() if k != "t"}
        return _NODE_TYPES[obj["t"]](**kwargs)
    return obj


def dumps(ast: DocumentAst, indent: int | None = 2) -> str:
    return json.dumps(to_json(ast), indent=indent, ensure_ascii=False)


def loads(text: str) -> DocumentAst:
    return from_json(json.loads(text))


def walk_inlines(inlines: list) -> Iterator[Inline]:
    """Yield every inline in ``inlines``, descending into groups and command args."""
    for node in inlines:
        yield node
        if isinstance(node, Group):
            yield from walk_inlines(node.inlines)
        elif isinstance(node, Command):
            for arg in node.args:
                if arg.inlines is not None:
                    yield from walk_inlines(arg.inlines)


def walk_blocks(blocks: list) -> Iterator[Block]:
    for block in blocks:
        yield block
        if isinstance(block, EnvironmentBlock):
            yield from walk_blocks(block.blocks)
        elif isinstance(block, ListBlock):
            yield from walk_blocks(block.lead)
            for item in block.items:
                yield from walk_blocks(item.blocks)


def math_bodies(ast: DocumentAst) -> list[str]:
    """All formula bodies in document order, block-level and inline."""
    out = []
    for block in walk_blocks(ast.blocks):
        if isinstance(block, DisplayMathBlock):
            out.append(block.tex)
        elif isinstance(block, (Paragraph, Heading)):
            out.extend(n.tex for n in walk_inlines(block.inlines) if isinstance(n, Math))
    return out
