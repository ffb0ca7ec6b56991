"""Regenerate ten_pages.tex, a long synthetic document (about ten printed pages)."""

import random
from pathlib import Path

SUBJECTS = ["the group $G$", "every ring $R$", "the field $K$", "a vector space $V$", "the map $f$",
            "the sequence $(a_n)$", "the closed ball $B_r(x)$", "each eigenvalue $\\lambda$"]
VERBS = ["is finite", "is compact", "has a basis", "is continuous", "converges", "is bounded",
         "admits an inverse", "is nonzero"]
TAILS = ["by the previous lemma", "whenever $n \\ge 1$", "as shown in the proof", "for all $x \\in X$",
         "by construction", "since $\\varepsilon > 0$ is arbitrary"]


def sentence(rng):
    s = f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)} {rng.choice(TAILS)}."
    return s[0].upper() + s[1:]


def main():
    rng = random.Random(2024)
    out = ["\\documentclass[11pt]{article}", "\\usepackage{amsmath,amsthm}",
           "\\newtheorem{theorem}{Theorem}", "\\begin{document}"]
    for sec in range(1, 11):
        out.append(f"\\section{{Section {sec}}}")
        for para in range(5):
            out.append(" ".join(sentence(rng) for _ in range(7)) + "\n")
        out.append("\\begin{theorem}\n" + " ".join(sentence(rng) for _ in range(3)) + "\n\\end{theorem}\n")
        out.append(f"\\begin{{equation}}\n\\sum_{{k=1}}^{{{sec}}} k^2 = \\frac{{n(n+1)(2n+1)}}{{6}}\n\\end{{equation}}\n")
        out.append("\\begin{itemize}\n" + "".join(f"\\item {sentence(rng)}\n" for _ in range(4)) + "\\end{itemize}\n")
        out.append(" ".join(sentence(rng) for _ in range(6)) + "\n")
    out.append("\\end{document}")
    Path(__file__).with_name("ten_pages.tex").write_text("\n".join(out) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
