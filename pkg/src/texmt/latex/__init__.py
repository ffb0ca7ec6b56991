"""LaTeX document tree: parsing, rendering and JSON dumps."""

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
    dumps,
    from_json,
    loads,
    math_bodies,
    to_json,
    walk_blocks,
    walk_inlines,
)
from .parser import parse_document, parse_inlines
from .render import render_blocks, render_document, render_inlines

__all__ = [
    "DISPLAY", "INLINE", "Arg", "Command", "DisplayMathBlock", "DocumentAst",
    "EnvironmentBlock", "Group", "Heading", "ListBlock", "ListItem", "Math",
    "Paragraph", "RawBlock", "RawInline", "Space", "Str", "VerbatimBlock",
    "dumps", "from_json", "loads", "math_bodies", "to_json", "walk_blocks",
    "walk_inlines", "parse_document", "parse_inlines", "render_blocks",
    "render_document", "render_inlines",
]
