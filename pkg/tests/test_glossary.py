import pytest

from texmt.config import seed_glossary_path
from texmt.errors import EmptyGlossary, MalformedLine
from texmt.glossary import (
    Glossary,
    count_term_matches,
    find_terms,
    load_glossary,
    protect_terms,
    unprotect_terms,
)

G = Glossary.from_pairs([("ring", "anneau"), ("field", "corps"), ("vector space", "espace vectoriel"), ("vector", "vecteur")])


def write(tmp_path, text):
    path = tmp_path / "g.tsv"
    path.write_text(text, encoding="utf-8")
    return path


def test_load_single_entry(tmp_path):
    g = load_glossary(write(tmp_path, "field\tcorps\n"))
    assert g.entries == (("field", "corps"),)


def test_load_comments_only(tmp_path):
    with pytest.raises(EmptyGlossary):
        load_glossary(write(tmp_path, "# nothing\n\n# here\n"))


def test_load_duplicates(tmp_path):
    g = load_glossary(write(tmp_path, "ring\tanneau\nring\tanneau\nRing\tautre\n"))
    assert g.entries == (("ring", "anneau"),)


def test_load_malformed(tmp_path):
    with pytest.raises(MalformedLine) as info:
        load_glossary(write(tmp_path, "ok\tbien\nbroken line\n"))
    assert info.value.lineno == 2


def test_entries_sorted_longest_first():
    assert G.entries[0][0] == "vector space"
    reordered = Glossary.from_pairs(list(reversed(G.entries)))
    assert reordered.entries == G.entries


def test_seed_glossary_loads():
    g = load_glossary(seed_glossary_path())
    assert len(g) >= 100
    assert g.target_for("field") == "corps"
    assert g.target_for("closed ball") == "boule fermée"


@pytest.mark.parametrize(
    "sentence, expected",
    [
        ("The ring is a field.", 2),
        ("Fields of wheat", 0),
        ("", 0),
        ("A vector space over a field", 2),
        ("RING and Field", 2),
        ("a ringside seat", 0),
    ],
)
def test_count_term_matches(sentence, expected):
    assert count_term_matches(sentence, G) == expected


def test_multiword_term_matches_across_whitespace():
    assert [m.group() for m in find_terms("a vector\n  space", G)] == ["vector\n  space"]


def test_protect_example():
    g = Glossary.from_pairs([("field", "corps")])
    assert protect_terms("a perfect field", g) == ("a perfect TERM1X", {"TERM1X": "corps"})


def test_protect_without_terms():
    assert protect_terms("nothing relevant", G) == ("nothing relevant", {})


def test_longest_match_wins():
    masked, restore = protect_terms("every vector space", G)
    assert masked == "every TERM1X"
    assert restore == {"TERM1X": "espace vectoriel"}


def test_capitalised_term_gets_capitalised_target():
    masked, restore = protect_terms("Field theory", G)
    assert unprotect_terms(masked, restore) == "Corps theory"


def test_unprotect_leaves_unknown_placeholders():
    assert unprotect_terms("TERM1X and TERM2X", {"TERM1X": "x"}) == "x and TERM2X"
