import json

import pytest

from texmt.errors import ParseError, UnbalancedDelimiter, UnmatchedEnvironment
from texmt.latex import (
    DISPLAY,
    INLINE,
    Command,
    DisplayMathBlock,
    EnvironmentBlock,
    Group,
    ListBlock,
    Math,
    Paragraph,
    RawBlock,
    RawInline,
    Space,
    Str,
    VerbatimBlock,
    dumps,
    loads,
    math_bodies,
    parse_document,
    parse_inlines,
    render_document,
)
from texmt.latex.render import render_block, render_inlines


def doc(body: str) -> str:
    return "\\documentclass{article}\n\\begin{document}\n" + body + "\n\\end{document}\n"


def body_blocks(body: str):
    return parse_document(doc(body)).blocks


def test_inline_example_sentence():
    [para] = body_blocks("Let $x$ be real.")
    assert isinstance(para, Paragraph)
    assert para.inlines == [
        Str("Let"), Space(), Math(INLINE, "x", "$"), Space(), Str("be"), Space(), Str("real."),
    ]


def test_empty_body():
    ast = parse_document("\\documentclass{article}\n\\begin{document}\n\\end{document}")
    assert ast.blocks == []
    assert ast.preamble == "\\documentclass{article}\n"


def test_verbatim_is_opaque():
    [block] = body_blocks("\\begin{verbatim}$x$\\end{verbatim}")
    assert block == VerbatimBlock("$x$", "verbatim", separated=True)
    assert math_bodies(parse_document(doc("\\begin{verbatim}$x$\\end{verbatim}"))) == []


def test_preamble_and_trailer_kept():
    source = "\\documentclass{article}\n% pre\n\\begin{document}\nHi.\n\\end{document}\n% after\n"
    ast = parse_document(source)
    assert ast.preamble == "\\documentclass{article}\n% pre\n"
    assert ast.trailer == "\n% after\n"
    assert render_document(ast) == source


def test_fragment_without_document_environment():
    ast = parse_document("Just $a$ fragment.")
    assert not ast.has_document
    assert render_document(ast) == "Just $a$ fragment."


@pytest.mark.parametrize(
    "source, mode, tex",
    [
        ("$a$", INLINE, "a"),
        ("\\(a\\)", INLINE, "a"),
        ("$$a$$", DISPLAY, "a"),
        ("\\[a\\]", DISPLAY, "a"),
        ("\\begin{equation}a\\end{equation}", DISPLAY, "a"),
        ("\\begin{align*}a &= b\\end{align*}", DISPLAY, "a &= b"),
        ("x \\begin{math}a\\end{math} y", INLINE, "a"),
    ],
)
def test_math_delimiters(source, mode, tex):
    ast = parse_document(doc(source))
    nodes = [n for b in ast.blocks for n in getattr(b, "inlines", [])] + [
        b for b in ast.blocks if isinstance(b, DisplayMathBlock)
    ]
    found = [(n.mode, n.tex) for n in nodes if isinstance(n, Math)]
    found += [(DISPLAY, n.tex) for n in nodes if isinstance(n, DisplayMathBlock)]
    assert found == [(mode, tex)]


def test_lone_display_math_becomes_block():
    [block] = body_blocks("\\[\nS_r(x)=\\{y\\}\n\\]")
    assert isinstance(block, DisplayMathBlock)
    assert block.tex == "\nS_r(x)=\\{y\\}\n"


def test_canonical_display_rendering():
    assert render_block(DisplayMathBlock("S_r(x)=\\{y\\}")) == "\\[\nS_r(x)=\\{y\\}\n\\]"


def test_escaped_dollar_is_text():
    [para] = body_blocks("costs \\$5 and 100\\%")
    assert not any(isinstance(n, Math) for n in para.inlines)


def test_heading_levels_and_star():
    blocks = body_blocks("\\section{A}\n\\subsection*{B}\n\\subsubsection[s]{C}")
    assert [(b.level, b.starred, b.short) for b in blocks] == [(1, False, None), (2, True, None), (3, False, "[s]")]
    assert blocks[0].inlines == [Str("A")]


def test_lists():
    [lst] = body_blocks("\\begin{enumerate}\n\\item one\n\\item[b)] two $x$\n\\end{enumerate}")
    assert isinstance(lst, ListBlock) and lst.ordered
    assert [i.label for i in lst.items] == [None, "[b)]"]
    assert lst.items[0].blocks == [Paragraph([Str("one")])]


def test_nested_environment():
    [env] = body_blocks("\\begin{theorem}[Name]\nText $a$.\n\\end{theorem}")
    assert isinstance(env, EnvironmentBlock)
    assert env.name == "theorem" and env.args == "[Name]"
    assert isinstance(env.blocks[0], Paragraph)


def test_opaque_environment_is_raw():
    source = "\\begin{tabular}{cc}\n$a$ & b \\\\\n\\end{tabular}"
    [block] = body_blocks(source)
    assert block == RawBlock(source)


def test_comment_is_raw_inline():
    [para] = body_blocks("a % note $x$\nb")
    assert RawInline("% note $x$\n") in para.inlines
    assert math_bodies(parse_document(doc("a % note $x$\nb"))) == []


def test_translatable_command_args_are_parsed():
    [para] = body_blocks("an \\emph{important $x$} point")
    cmd = next(n for n in para.inlines if isinstance(n, Command))
    assert cmd.name == "emph"
    assert cmd.args[0].inlines == [Str("important"), Space(), Math(INLINE, "x", "$")]


def test_raw_arg_commands_keep_raw_text():
    [para] = body_blocks("see \\cite{a_b} and \\label{x:y}")
    cites = [n for n in para.inlines if isinstance(n, Command)]
    assert [c.args[0].raw for c in cites] == ["a_b", "x:y"]
    assert all(c.args[0].inlines is None for c in cites)


def test_group_inline():
    [para] = body_blocks("a {\\em b} c")
    assert any(isinstance(n, Group) for n in para.inlines)


def test_str_never_holds_whitespace():
    ast = parse_document(doc("Words  spread\tover\nlines and $m$ math."))
    for block in ast.blocks:
        for node in block.inlines:
            if isinstance(node, Str):
                assert not any(ch.isspace() for ch in node.text)


@pytest.mark.parametrize(
    "body, delimiter",
    [("$x", "$"), ("{open", "{"), ("$$x", "$$"), ("\\(x", "\\("), ("close}", "}")],
)
def test_unbalanced_delimiters(body, delimiter):
    with pytest.raises(UnbalancedDelimiter) as info:
        parse_document(doc(body))
    assert info.value.delimiter == delimiter
    assert info.value.line == 3


def test_unmatched_environment():
    with pytest.raises(UnmatchedEnvironment) as info:
        parse_document("\\begin{theorem}\nno end")
    assert info.value.name == "theorem"
    assert info.value.position == 0
    with pytest.raises(UnmatchedEnvironment) as info:
        parse_document(doc("\\begin{theorem}\nno end"))
    assert info.value.name == "document"
    with pytest.raises(UnmatchedEnvironment):
        parse_document(doc("text \\end{proof}"))


def test_parse_error_position_is_located():
    with pytest.raises(ParseError) as info:
        parse_document("\\begin{document}\nok\nbad $x\n\\end{document}")
    assert (info.value.line, info.value.column) == (3, 5)


def test_parse_inlines():
    assert parse_inlines("a $b$") == [Str("a"), Space(), Math(INLINE, "b", "$")]


def test_render_guards_control_word_before_letter():
    assert render_inlines([RawInline("\\LaTeX"), Str("rocks")]) == "\\LaTeX{}rocks"
    assert render_inlines([Math(INLINE, "a", "$"), Math(INLINE, "b", "$")]) == "$a${}$b$"


def test_json_dump_round_trip():
    ast = parse_document(doc("\\section{T}\nLet $x$ be \\emph{real}.\n\n\\begin{itemize}\n\\item a\n\\end{itemize}"))
    text = dumps(ast)
    data = json.loads(text)
    assert data["t"] == "DocumentAst"
    assert data["blocks"][0]["t"] == "Heading"
    assert loads(text) == ast


def test_json_field_names_for_example_sentence():
    ast = parse_document(doc("Let $Y$ have mean $\\mu$."))
    inlines = json.loads(dumps(ast))["blocks"][0]["inlines"]
    assert inlines[:3] == [
        {"t": "Str", "text": "Let"},
        {"t": "Space"},
        {"t": "Math", "mode": "inline", "tex": "Y", "delim": "$"},
    ]
