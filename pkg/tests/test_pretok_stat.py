import math
import random

import pytest
from hypothesis import given, strategies as st

from entok.corpus import Corpus, Sentence
from entok.ngram_stats import count_ngrams, span_entropies, utility
from entok.pretok_stat import (
    CandidateTable,
    Segmentation,
    build_candidates,
    pretokenize_corpus,
    segment_sentence,
)


def corpus_of(*texts):
    return Corpus(tuple(Sentence(i, t) for i, t in enumerate(texts)))


def table_of(entries, n_max=6):
    return CandidateTable(lam=0.0, min_count=1, n_max=n_max, entries=entries)


def segments(text, candidates):
    seg = segment_sentence(Sentence(0, text), candidates)
    return [text[a:b] for a, b in seg.spans()]


def test_worked_example():
    candidates = table_of({"ab": 2.0, "abc": 5.0, "cd": 3.0})
    assert segments("abcd", candidates) == ["abc", "d"]


def test_no_candidates_all_singletons():
    assert segments("abc", table_of({})) == ["a", "b", "c"]


def test_abab():
    assert segments("abab", table_of({"ab": 0.69})) == ["ab", "ab"]


def test_tie_goes_to_longer_span():
    candidates = table_of({"ab": 1.0, "abc": 1.0})
    assert segments("abcd", candidates) == ["abc", "d"]


def test_segmentation_invariants():
    with pytest.raises(ValueError):
        Segmentation(0, 4, (0,))  # 0 is implicit, never emitted
    with pytest.raises(ValueError):
        Segmentation(0, 4, (4,))  # == length
    with pytest.raises(ValueError):
        Segmentation(0, 4, (2, 2))  # not strictly increasing
    assert Segmentation(0, 0, ()).spans() == ()


def test_candidate_table_rejects_singletons():
    with pytest.raises(ValueError):
        table_of({"a": 1.0})


def test_by_prefix_ordering():
    candidates = table_of({"ab": 1.0, "abc": 1.0, "ax": 5.0, "bz": 2.0})
    index = candidates.by_prefix
    assert index["a"] == ["ax", "abc", "ab"]
    assert index["b"] == ["bz"]


def test_build_candidates_abab():
    table = count_ngrams(corpus_of("abab"), n_max=2)
    candidates = build_candidates(table, lam=0.0, min_count=2)
    assert set(candidates.entries) == {"ab"}
    assert candidates.entries["ab"] == pytest.approx(math.log(2))


def test_build_candidates_min_count_one_admits_all():
    table = count_ngrams(corpus_of("abc"), n_max=3)
    candidates = build_candidates(table, lam=0.0, min_count=1)
    assert set(candidates.entries) == {"ab", "bc", "abc"}


def test_build_candidates_lambda_linearity():
    table = count_ngrams(corpus_of("xaby", "zabw", "abab"), n_max=3)
    base = build_candidates(table, lam=0.0, min_count=1)
    shifted = build_candidates(table, lam=4.0, min_count=1)
    for w, u0 in base.entries.items():
        assert shifted.entries[w] == pytest.approx(u0 + 4.0 * min(span_entropies(table, w)))


def test_build_candidates_entropy_only():
    table = count_ngrams(corpus_of("xaby", "zabw"), n_max=2)
    candidates = build_candidates(table, lam=4.0, min_count=1, entropy_only=True)
    assert candidates.entries["ab"] == pytest.approx(min(span_entropies(table, "ab")))


def test_build_candidates_negative_lambda():
    table = count_ngrams(corpus_of("abab"), n_max=2)
    with pytest.raises(ValueError):
        build_candidates(table, lam=-1.0)


def test_build_candidates_scores_match_utility():
    table = count_ngrams(corpus_of("abcabc", "bca"), n_max=3)
    candidates = build_candidates(table, lam=2.5, min_count=2)
    for w, score in candidates.entries.items():
        assert score == pytest.approx(utility(table, w, 2.5))


@given(st.data())
def test_fuzzed_spans_tile_sentence(data):
    alphabet = "abcd"
    text = data.draw(st.text(alphabet=alphabet, min_size=1, max_size=30))
    n_entries = data.draw(st.integers(0, 12))
    entries = {}
    for _ in range(n_entries):
        w = data.draw(st.text(alphabet=alphabet, min_size=2, max_size=5))
        entries[w] = data.draw(st.floats(-5, 5, allow_nan=False))
    seg = segment_sentence(Sentence(0, text), table_of(entries, n_max=5))
    spans = seg.spans()
    assert spans[0][0] == 0 and spans[-1][1] == len(text)
    for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
        assert b1 == a2 and b1 > a1
    assert spans[-1][1] > spans[-1][0]


def test_greedy_deterministic():
    rng = random.Random(5)
    entries = {
        "".join(rng.choice("ab") for _ in range(rng.randint(2, 4))): rng.random()
        for _ in range(10)
    }
    text = "".join(rng.choice("ab") for _ in range(40))
    a = segment_sentence(Sentence(0, text), table_of(entries, n_max=4))
    b = segment_sentence(Sentence(0, text), table_of(entries, n_max=4))
    assert a == b


def test_pretokenize_strip_spaces_is_identity():
    corpus = corpus_of("abcab", "bcbc")
    table = count_ngrams(corpus, n_max=3)
    candidates = build_candidates(table, lam=1.0, min_count=1)
    pretok = pretokenize_corpus(corpus, candidates)
    for before, after in zip(corpus.sentences, pretok.sentences):
        assert "".join(after.words()) == before.chars


def test_pretokenize_empty_table_spaces_everything():
    corpus = corpus_of("abc")
    pretok = pretokenize_corpus(corpus, table_of({}))
    assert pretok.sentences[0].words() == ["a", "b", "c"]


def test_pretokenize_idempotent_after_strip():
    from entok.corpus import strip_gold

    corpus = corpus_of("abcabcab", "cabab")
    table = count_ngrams(corpus, n_max=4)
    candidates = build_candidates(table, lam=2.0, min_count=1)
    once = pretokenize_corpus(corpus, candidates)
    twice = pretokenize_corpus(strip_gold(once), candidates)
    assert once == twice


def test_mean_segment_length_grows_with_lambda():
    # qualitative direction on a synthetic corpus
    from entok.synth import make_corpus

    corpus = make_corpus(n_sentences=120, seed=3)
    from entok.corpus import strip_gold

    raw = strip_gold(corpus)
    table = count_ngrams(raw, n_max=6)

    def mean_len(lam):
        candidates = build_candidates(table, lam=lam, min_count=2)
        pretok = pretokenize_corpus(raw, candidates)
        spans = [b - a for s in pretok.sentences for a, b in s.spans]
        return sum(spans) / len(spans)

    assert mean_len(15.0) >= mean_len(0.0)
