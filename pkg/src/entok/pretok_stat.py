"""Greedy maximal-matching segmentation driven by span utility scores.

One left-to-right pass per sentence: at each position the highest-utility
candidate span starting there is emitted and the cursor jumps past it;
positions where no candidate matches become singleton segments.  Ties go
to the longer span (two candidates at the same position and length are
the same string, so no further rule is ever exercised).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

from .corpus import Corpus, Sentence
from .ngram_stats import NGramTable, span_entropies, utility


@dataclass(frozen=True)
class Segmentation:
    """Interior cut positions for one sentence; cuts are in 1..length-1."""

    sentence_id: int
    length: int
    boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = 0
        for b in self.boundaries:
            if not 0 < b < self.length or b <= prev:
                raise ValueError(
                    f"sentence {self.sentence_id}: boundaries must be strictly "
                    f"increasing within 1..{self.length - 1}, got {self.boundaries}"
                )
            prev = b

    def spans(self) -> tuple[tuple[int, int], ...]:
        if self.length == 0:
            return ()
        edges = (0, *self.boundaries, self.length)
        return tuple(zip(edges, edges[1:]))


@dataclass(frozen=True)
class CandidateTable:
    """Utility-scored spans (length 2..n_max) eligible for matching."""

    lam: float
    min_count: int
    n_max: int
    entries: dict[str, float]
    entropy_only: bool = False

    def __post_init__(self) -> None:
        for w in self.entries:
            if len(w) < 2:
                raise ValueError(f"candidate spans must have length >= 2, got {w!r}")

    @cached_property
    def by_prefix(self) -> dict[str, list[str]]:
        """First character -> candidates sorted by utility desc, length desc, text."""
        index: dict[str, list[str]] = {}
        for w in self.entries:
            index.setdefault(w[0], []).append(w)
        for spans in index.values():
            spans.sort(key=lambda w: (-self.entries[w], -len(w), w))
        return index


def build_candidates(
    table: NGramTable,
    lam: float,
    min_count: int = 2,
    entropy_only: bool = False,
) -> CandidateTable:
    """Score every observed span of length 2..n_max with frequency >= min_count.

    entropy_only=True scores by min(H_left, H_right) alone, dropping the
    cohesion term (and ignoring lam).
    """
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if table.n_max < 2:
        raise ValueError("candidate table requires an n-gram table with n_max >= 2")
    entries: dict[str, float] = {}
    for w, count in table.freq.items():
        if len(w) < 2 or count < min_count:
            continue
        if entropy_only:
            entries[w] = min(span_entropies(table, w))
        else:
            entries[w] = utility(table, w, lam)
    return CandidateTable(
        lam=lam,
        min_count=min_count,
        n_max=table.n_max,
        entries=entries,
        entropy_only=entropy_only,
    )


def segment_sentence(sentence: Sentence, candidates: CandidateTable) -> Segmentation:
    s = sentence.chars
    length = len(s)
    entries = candidates.entries
    n_max = candidates.n_max
    cuts: list[int] = []
    i = 0
    while i < length:
        best_u: float | None = None
        best_n = 1
        # longest-first scan makes the tie rule (longer span wins) implicit
        for n in range(min(n_max, length - i), 1, -1):
            u = entries.get(s[i : i + n])
            if u is not None and (best_u is None or u > best_u):
                best_u = u
                best_n = n
        i += best_n
        if i < length:
            cuts.append(i)
    return Segmentation(sentence.id, length, tuple(cuts))


def apply_segmentation(sentence: Sentence, segmentation: Segmentation) -> Sentence:
    if segmentation.length != len(sentence.chars):
        raise ValueError(
            f"sentence {sentence.id}: segmentation length {segmentation.length} "
            f"does not match {len(sentence.chars)} characters"
        )
    return replace(sentence, spans=segmentation.spans())


def pretokenize_corpus(corpus: Corpus, candidates: CandidateTable) -> Corpus:
    """Replace every sentence's spans with its greedy segmentation."""
    return Corpus(
        tuple(
            apply_segmentation(s, segment_sentence(s, candidates))
            for s in corpus.sentences
        )
    )
