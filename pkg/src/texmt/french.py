"""French typographic conventions for a translated document."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import NoDocumentClass

_DOCUMENTCLASS = re.compile(r"\\documentclass\s*(?:\[(?P<opts>[^\]]*)\])?\s*\{(?P<cls>[^}]*)\}")
_QUOTE = re.compile(r"``|''")


@dataclass(frozen=True)
class PreamblePatch:
    documentclass_option: str = "french"
    packages_to_add: tuple = ("\\usepackage[T1]{fontenc}", "\\usepackage{babel}")


FRENCH_PATCH = PreamblePatch()


def _uncommented(text: str, pattern: re.Pattern):
    """First match of ``pattern`` that does not sit after a ``%`` on its line."""
    for m in pattern.finditer(text):
        line_start = text.rfind("\n", 0, m.start()) + 1
        if not re.search(r"(?<!\\)%", text[line_start:m.start()]):
            return m
    return None


def _has_package(preamble: str, name: str, option: str | None = None) -> bool:
    pattern = re.compile(r"\\usepackage\s*(?:\[([^\]]*)\])?\s*\{([^}]*)\}")
    for m in pattern.finditer(preamble):
        line_start = preamble.rfind("\n", 0, m.start()) + 1
        if re.search(r"(?<!\\)%", preamble[line_start:m.start()]):
            continue
        names = [n.strip() for n in m.group(2).split(",")]
        opts = [o.strip() for o in (m.group(1) or "").split(",")]
        if name in names and (option is None or option in opts):
            return True
    return False


def patch_preamble(preamble: str, patch: PreamblePatch = FRENCH_PATCH) -> str:
    m = _uncommented(preamble, _DOCUMENTCLASS)
    if m is None:
        raise NoDocumentClass("the preamble has no \\documentclass declaration")
    opts = [o.strip() for o in (m.group("opts") or "").split(",") if o.strip()]
    if patch.documentclass_option not in opts:
        opts.append(patch.documentclass_option)
    declaration = f"\\documentclass[{','.join(opts)}]{{{m.group('cls')}}}"

    wanted = []
    if not _has_package(preamble, "fontenc", "T1"):
        wanted.append(patch.packages_to_add[0])
    if not _has_package(preamble, "babel"):
        wanted.append(patch.packages_to_add[1])
    addition = "".join("\n" + line for line in wanted)
    return preamble[:m.start()] + declaration + addition + preamble[m.end():]


def add_french_preamble(ast):
    """Return ``ast`` with the ``french`` class option and fontenc/babel lines.

    Applying it twice gives the same preamble as applying it once.
    """
    return replace(ast, preamble=patch_preamble(ast.preamble))


def convert_quotes(text: str, warnings: list | None = None) -> str:
    """Turn each balanced ````...''`` pair into ``\\og ...\\fg{}``.

    Pairs nest and are all converted in one pass.  An opener without a closer
    (or the reverse) is left as it is and noted in ``warnings`` when a list is
    given.
    """
    marks = list(_QUOTE.finditer(text))
    if not marks:
        return text
    stack, kinds, lone = [], {}, []
    for m in marks:
        if m.group() == "``":
            stack.append(m)
        elif stack:
            kinds[stack.pop().start()] = "open"
            kinds[m.start()] = "close"
        else:
            lone.append(m)
    if warnings is not None:
        for m in sorted(lone + stack, key=lambda m: m.start()):
            warnings.append(f"unbalanced {m.group()} at offset {m.start()} left unchanged")
    out = ""
    floors = []  # where each open quote's content starts in ``out``
    pos = 0
    for m in marks:
        kind = kinds.get(m.start())
        if kind is None:
            continue
        out += text[pos:m.start()]
        pos = m.end()
        if kind == "open":
            out += "\\og "
            floors.append(len(out))
            while pos < len(text) and text[pos].isspace():
                pos += 1
        else:
            out = out[: max(len(out.rstrip()), floors.pop())] + "\\fg{}"
    return out + text[pos:]
