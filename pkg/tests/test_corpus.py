import pytest

from texmt.corpus import (
    ParallelCorpus,
    filter_by_glossary,
    read_parallel,
    read_tsv,
    shuffle_split,
    split_sizes,
    vocab_size,
    word_tokenize,
    write_parallel,
    write_tsv,
)
from texmt.errors import BadRatios, MismatchedLengths
from texmt.glossary import Glossary

from oracles import GLOSSARY_TERMS, planted_glossary_corpus, planted_vocab_sentences


@pytest.mark.parametrize(
    "text, tokens",
    [
        ("Let MATH1X, then.", ["Let", "MATH1X", ",", "then", "."]),
        ("", []),
        ("p.d.f.", ["p.d.f", "."]),
        ("(TERM2X) isn't x-y!", ["(", "TERM2X", ")", "isn't", "x-y", "!"]),
        ("«guillemets»", ["«", "guillemets", "»"]),
    ],
)
def test_word_tokenize(text, tokens):
    assert word_tokenize(text) == tokens


def test_filter_examples():
    g = Glossary.from_pairs([("ring", "anneau"), ("field", "corps")])
    corpus = ParallelCorpus([("The ring is a field.", "x"), ("Only a ring.", "y")], "t")
    kept = filter_by_glossary(corpus, g)
    assert kept.pairs == [("The ring is a field.", "x")]
    assert kept.provenance == "t"
    assert filter_by_glossary(corpus, g, min_terms=1).pairs == corpus.pairs
    with pytest.raises(ValueError):
        filter_by_glossary(corpus, g, min_terms=0)


def test_filter_planted_corpus():
    pairs, planted = planted_glossary_corpus()
    kept = filter_by_glossary(ParallelCorpus(pairs), Glossary.from_pairs(GLOSSARY_TERMS), 2)
    assert kept.pairs == [pairs[i] for i in planted]


def test_filter_is_idempotent():
    pairs, _ = planted_glossary_corpus(n_pairs=300, n_planted=40, seed=1)
    g = Glossary.from_pairs(GLOSSARY_TERMS)
    once = filter_by_glossary(ParallelCorpus(pairs), g)
    assert filter_by_glossary(once, g).pairs == once.pairs


def test_split_sizes():
    assert split_sizes(10) == (8, 1, 1)
    assert split_sizes(267842) == (214274, 26784, 26784)
    assert split_sizes(0) == (0, 0, 0)
    assert split_sizes(7, (0.5, 0.25, 0.25)) == (5, 1, 1)


@pytest.mark.parametrize("ratios", [(0.8, 0.1), (0.8, 0.1, 0.2), (1.2, -0.1, -0.1), (0.5, float("nan"), 0.5)])
def test_bad_ratios(ratios):
    with pytest.raises(BadRatios):
        shuffle_split(ParallelCorpus([("a", "b")]), ratios)


def test_shuffle_split_deterministic_partition():
    corpus = ParallelCorpus([(f"s{i}", f"t{i}") for i in range(50)], "demo")
    a = shuffle_split(corpus, seed=5)
    b = shuffle_split(corpus, seed=5)
    assert [p.pairs for p in a] == [p.pairs for p in b]
    assert sorted(sum((p.pairs for p in a), [])) == sorted(corpus.pairs)
    assert [p.provenance for p in a] == ["demo:train", "demo:valid", "demo:test"]
    assert shuffle_split(corpus, seed=6)[0].pairs != a[0].pairs


def test_vocab_size():
    assert vocab_size(["a b", "b c"]) == 3
    assert vocab_size([]) == 0
    assert vocab_size(["A a"]) == 2
    assert vocab_size(["A a"], casefold=True) == 1
    assert vocab_size(planted_vocab_sentences()) == 500


def test_parallel_files_round_trip(tmp_path):
    corpus = ParallelCorpus([("one", "un"), ("two", "deux")])
    write_parallel(corpus, tmp_path / "a.en", tmp_path / "a.fr")
    assert read_parallel(tmp_path / "a.en", tmp_path / "a.fr").pairs == corpus.pairs
    write_tsv(corpus, tmp_path / "a.tsv")
    assert read_tsv(tmp_path / "a.tsv").pairs == corpus.pairs


def test_parallel_files_must_align(tmp_path):
    (tmp_path / "a.en").write_text("one\ntwo\n", encoding="utf-8")
    (tmp_path / "a.fr").write_text("un\n", encoding="utf-8")
    with pytest.raises(MismatchedLengths):
        read_parallel(tmp_path / "a.en", tmp_path / "a.fr")
    (tmp_path / "b.tsv").write_text("no tab here\n", encoding="utf-8")
    with pytest.raises(MismatchedLengths):
        read_tsv(tmp_path / "b.tsv")
