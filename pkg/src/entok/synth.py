"""Synthetic gold-segmented corpora with news-like word statistics.

Generates sentences over a CJK character inventory using a Zipfian word
lexicon (mostly one- and two-character words, a few longer ones, a small
set of very frequent single-character function words) plus a layer of
frequent word collocations.  The result approximates the word-length and
frequency profile of segmented Chinese news text closely enough to
exercise the full pipeline; it backs the acceptance suite whenever a real
annotated corpus is not supplied, and the demo scripts.
"""

from __future__ import annotations

import random

from .corpus import Corpus, Sentence

_INVENTORY_SIZE = 900
_N_FUNCTION = 12
_N_SINGLE = 160
_N_DOUBLE = 850
_N_TRIPLE = 120
_N_QUAD = 40

# token-level probability of each word-length class (function words are
# single characters drawn from their own reserved pool)
_CLASS_PROBS = (
    ("function", 0.22),
    ("single", 0.28),
    ("double", 0.42),
    ("triple", 0.06),
    ("quad", 0.02),
)

_N_COLLOCATIONS = 180
_COLLOCATION_PROB = 0.35

# verbatim multi-word fragments (agency taglines, dates, set phrases) that
# recur across many sentences, as news text does
_N_FRAGMENTS = 60
_FRAGMENT_WORDS = (3, 6)
_FRAGMENT_PROB = 0.40


def _zipf_cum_weights(n: int, exponent: float) -> list[float]:
    total = 0.0
    cum = []
    for rank in range(1, n + 1):
        total += rank**-exponent
        cum.append(total)
    return cum


class _WordSampler:
    def __init__(self, words: list[str], exponent: float):
        self.words = words
        self.cum = _zipf_cum_weights(len(words), exponent)

    def draw(self, rng: random.Random) -> str:
        return rng.choices(self.words, cum_weights=self.cum, k=1)[0]


def _build_lexicon(rng: random.Random) -> dict[str, list[str]]:
    inventory = [chr(0x4E00 + i) for i in range(_INVENTORY_SIZE)]
    function_chars = inventory[:_N_FUNCTION]
    content_chars = inventory[_N_FUNCTION:]
    char_cum = _zipf_cum_weights(len(content_chars), 0.8)

    def draw_chars(k: int) -> str:
        return "".join(rng.choices(content_chars, cum_weights=char_cum, k=k))

    singles: list[str] = []
    seen_singles: set[str] = set()
    while len(singles) < _N_SINGLE:
        c = draw_chars(1)
        if c not in seen_singles:
            seen_singles.add(c)
            singles.append(c)

    def draw_words(n: int, length: int, taken: set[str]) -> list[str]:
        words: list[str] = []
        while len(words) < n:
            w = draw_chars(length)
            if w not in taken and len(set(w)) > 1:
                taken.add(w)
                words.append(w)
        return words

    taken: set[str] = set()
    return {
        "function": list(function_chars),
        "single": singles,
        "double": draw_words(_N_DOUBLE, 2, taken),
        "triple": draw_words(_N_TRIPLE, 3, taken),
        "quad": draw_words(_N_QUAD, 4, taken),
    }


def make_corpus(
    n_sentences: int = 2255,
    seed: int = 7,
    min_words: int = 15,
    max_words: int = 34,
) -> Corpus:
    """Deterministic gold-segmented corpus of n_sentences lines."""
    rng = random.Random(seed)
    lexicon = _build_lexicon(rng)
    samplers = {name: _WordSampler(words, 1.05) for name, words in lexicon.items()}
    class_names = [name for name, _ in _CLASS_PROBS]
    class_cum = []
    total = 0.0
    for _, p in _CLASS_PROBS:
        total += p
        class_cum.append(total)

    def draw_word() -> str:
        cls = rng.choices(class_names, cum_weights=class_cum, k=1)[0]
        return samplers[cls].draw(rng)

    # frequent word collocations: after some words, a fixed partner tends
    # to follow, which natural text exhibits and pure iid sampling lacks
    partners: dict[str, str] = {}
    while len(partners) < _N_COLLOCATIONS:
        head = draw_word()
        tail = draw_word()
        if head not in partners and head != tail:
            partners[head] = tail

    fragments: list[list[str]] = [
        [draw_word() for _ in range(rng.randint(*_FRAGMENT_WORDS))]
        for _ in range(_N_FRAGMENTS)
    ]

    sentences: list[Sentence] = []
    for idx in range(n_sentences):
        n_words = rng.randint(min_words, max_words)
        words: list[str] = []
        while len(words) < n_words:
            w = draw_word()
            words.append(w)
            partner = partners.get(w)
            if partner is not None and len(words) < n_words and rng.random() < _COLLOCATION_PROB:
                words.append(partner)
        if rng.random() < _FRAGMENT_PROB:
            fragment = fragments[rng.randrange(_N_FRAGMENTS)]
            pos = rng.randrange(len(words) + 1)
            words[pos:pos] = fragment
        chars = "".join(words)
        spans: list[tuple[int, int]] = []
        pos = 0
        for w in words:
            spans.append((pos, pos + len(w)))
            pos += len(w)
        sentences.append(Sentence(idx, chars, tuple(spans)))
    return Corpus(tuple(sentences))
