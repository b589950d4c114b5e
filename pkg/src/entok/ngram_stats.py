"""N-gram counting with PMI and left/right branching entropy.

For a span w the table answers three questions:

* how strongly do its adjacent characters attract each other
  (``pmi``: log of observed bigram frequency over the independence
  expectation, natural log),
* how diverse are the contexts it appears in (``span_entropies``:
  Shannon entropy of the left / right neighbor distributions, in nats),
* how good a segmentation unit is it overall (``utility``: minimum
  internal PMI plus lambda times the smaller side entropy).

Counts never cross sentence boundaries.  Occurrences touching a sentence
edge record the pseudo-neighbors BOS / EOS so that each span's neighbor
histogram mass stays equal to its frequency.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus

# Neighbor pseudo-symbols for sentence edges.  Real neighbors are single
# characters, so these multi-character markers can never collide.
BOS = "<s>"
EOS = "</s>"

_NORMALIZERS = ("chars", "ngrams")


@dataclass
class NGramTable:
    """Frequencies and neighbor histograms for all n-grams up to n_max."""

    n_max: int
    total_chars: int
    total_ngrams: int
    freq: dict[str, int]
    left_neighbors: dict[str, dict[str, int]]
    right_neighbors: dict[str, dict[str, int]]
    pmi_normalizer: str = "chars"

    @property
    def normalizer(self) -> int:
        """The T used in PMI: total unigrams or total n-gram tokens."""
        return self.total_chars if self.pmi_normalizer == "chars" else self.total_ngrams


def count_ngrams(corpus: Corpus, n_max: int = 6, pmi_normalizer: str = "chars") -> NGramTable:
    """Count every within-sentence n-gram of length 1..n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if not corpus.sentences:
        raise ValueError("cannot count an empty corpus")
    if pmi_normalizer not in _NORMALIZERS:
        raise ValueError(f"pmi_normalizer must be one of {_NORMALIZERS}, got {pmi_normalizer!r}")

    freq: dict[str, int] = {}
    left: dict[str, dict[str, int]] = {}
    right: dict[str, dict[str, int]] = {}
    total_ngrams = 0
    for sent in corpus.sentences:
        s = sent.chars
        length = len(s)
        for n in range(1, n_max + 1):
            if n > length:
                break
            total_ngrams += length - n + 1
            for j in range(length - n + 1):
                w = s[j : j + n]
                freq[w] = freq.get(w, 0) + 1
                l_sym = s[j - 1] if j > 0 else BOS
                r_sym = s[j + n] if j + n < length else EOS
                hist = left.get(w)
                if hist is None:
                    hist = left[w] = {}
                hist[l_sym] = hist.get(l_sym, 0) + 1
                hist = right.get(w)
                if hist is None:
                    hist = right[w] = {}
                hist[r_sym] = hist.get(r_sym, 0) + 1
    return NGramTable(
        n_max=n_max,
        total_chars=corpus.char_count,
        total_ngrams=total_ngrams,
        freq=freq,
        left_neighbors=left,
        right_neighbors=right,
        pmi_normalizer=pmi_normalizer,
    )


def pmi(table: NGramTable, c1: str, c2: str) -> float:
    """ln( f(c1 c2) * T / (f(c1) * f(c2)) ).  KeyError if the bigram is unseen."""
    bigram = c1 + c2
    f_pair = table.freq.get(bigram)
    if f_pair is None:
        raise KeyError(f"bigram {bigram!r} not present in the table")
    return math.log(f_pair * table.normalizer / (table.freq[c1] * table.freq[c2]))


def _entropy(hist: dict[str, int], total: int) -> float:
    h = 0.0
    for count in hist.values():
        p = count / total
        h -= p * math.log(p)
    return h


def span_entropies(table: NGramTable, w: str) -> tuple[float, float]:
    """(H_left, H_right) of the span's neighbor distributions, in nats."""
    f_w = table.freq.get(w)
    if f_w is None:
        raise KeyError(f"span {w!r} not present in the table")
    return (
        _entropy(table.left_neighbors[w], f_w),
        _entropy(table.right_neighbors[w], f_w),
    )


def utility(table: NGramTable, w: str, lam: float) -> float:
    """min internal PMI + lam * min(H_left, H_right) for a span of length >= 2."""
    if len(w) < 2:
        raise ValueError(f"utility is defined for spans of length >= 2, got {w!r}")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    min_pmi = min(pmi(table, a, b) for a, b in zip(w, w[1:]))
    h_left, h_right = span_entropies(table, w)
    return min_pmi + lam * min(h_left, h_right)


def dump_stats(table: NGramTable, path: str | Path, min_count: int = 1) -> None:
    """Write `kind,span,value` CSV rows: PMI per bigram, entropies per multi-char span."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        for w, count in table.freq.items():
            if len(w) < 2 or count < min_count:
                continue
            if len(w) == 2:
                writer.writerow(["pmi", w, pmi(table, w[0], w[1])])
            h_left, h_right = span_entropies(table, w)
            writer.writerow(["left_entropy", w, h_left])
            writer.writerow(["right_entropy", w, h_right])
