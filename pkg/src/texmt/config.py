"""Tables that drive parsing and sentence extraction.

Everything here is plain data so a caller can build a variant with
``dataclasses.replace`` instead of patching the parser.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources

FLATTEN = "flatten"
SEPARATE = "separate"

MATH_ENVIRONMENTS = {
    "equation": "display", "equation*": "display",
    "align": "display", "align*": "display",
    "alignat": "display", "alignat*": "display",
    "flalign": "display", "flalign*": "display",
    "gather": "display", "gather*": "display",
    "multline": "display", "multline*": "display",
    "eqnarray": "display", "eqnarray*": "display",
    "displaymath": "display",
    "math": "inline",
}

LIST_ENVIRONMENTS = {"itemize": False, "enumerate": True, "description": False}

VERBATIM_ENVIRONMENTS = frozenset({"verbatim", "verbatim*", "Verbatim", "lstlisting", "minted", "comment"})

OPAQUE_ENVIRONMENTS = frozenset({
    "tikzpicture", "pspicture", "picture",
    "tabular", "tabular*", "tabularx", "longtable", "array",
    "thebibliography",
})

# Argument shapes for environments whose \begin takes arguments that are not
# glued to it; anything else takes the brace/bracket groups that immediately
# follow \begin{name}.
ENVIRONMENT_ARGS = {
    "figure": "[", "figure*": "[", "table": "[", "table*": "[",
    "minipage": "[[[{", "wrapfigure": "[{{",
}

HEADING_COMMANDS = {
    "section": 1, "subsection": 2, "subsubsection": 3,
    "paragraph": 4, "subparagraph": 5,
}

# Commands whose arguments are never parsed as text (labels, keys, paths, code).
RAW_ARG_COMMANDS = frozenset({
    "label", "ref", "eqref", "pageref", "cref", "Cref", "autoref", "nameref",
    "cite", "citep", "citet", "citealp", "citeauthor", "citeyear", "nocite",
    "url", "href", "includegraphics", "input", "include", "includeonly",
    "bibliography", "bibliographystyle", "usepackage", "documentclass",
    "newcommand", "renewcommand", "providecommand", "newenvironment",
    "renewenvironment", "newtheorem", "DeclareMathOperator", "def",
    "hspace", "vspace", "setlength", "addtolength", "setcounter",
    "addtocounter", "color", "textcolor", "definecolor", "pagestyle",
    "thispagestyle", "numberwithin", "graphicspath",
})

# Commands whose (last) brace argument holds natural language.  ``flatten``
# splices the argument into the enclosing sentence; ``separate`` translates it
# as its own phrase and keeps the command in place.
TRANSLATABLE_COMMANDS = {
    "emph": FLATTEN, "textbf": FLATTEN, "textit": FLATTEN,
    "textsl": FLATTEN, "textsc": FLATTEN, "underline": FLATTEN,
    "caption": SEPARATE, "footnote": SEPARATE, "title": SEPARATE,
    "thanks": SEPARATE, "chapter": SEPARATE, "part": SEPARATE,
}


@dataclass(frozen=True)
class ParserConfig:
    math_environments: dict = field(default_factory=lambda: dict(MATH_ENVIRONMENTS))
    list_environments: dict = field(default_factory=lambda: dict(LIST_ENVIRONMENTS))
    verbatim_environments: frozenset = VERBATIM_ENVIRONMENTS
    opaque_environments: frozenset = OPAQUE_ENVIRONMENTS
    environment_args: dict = field(default_factory=lambda: dict(ENVIRONMENT_ARGS))
    heading_commands: dict = field(default_factory=lambda: dict(HEADING_COMMANDS))
    raw_arg_commands: frozenset = RAW_ARG_COMMANDS
    translatable_commands: dict = field(default_factory=lambda: dict(TRANSLATABLE_COMMANDS))

    def with_translatable(self, names, mode: str = SEPARATE) -> "ParserConfig":
        table = dict(self.translatable_commands)
        table.update({n: mode for n in names})
        return replace(self, translatable_commands=table)


DEFAULT_CONFIG = ParserConfig()


def _data_lines(name: str) -> list[str]:
    text = resources.files("texmt.data").joinpath(name).read_text(encoding="utf-8")
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


@lru_cache(maxsize=None)
def default_abbreviations() -> frozenset:
    """Abbreviations (lower-cased, with their final period) that never end a sentence."""
    return frozenset(a.lower() for a in _data_lines("abbreviations.txt"))


def seed_glossary_path():
    return resources.files("texmt.data").joinpath("glossary_en_fr.tsv")
