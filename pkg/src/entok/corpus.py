"""Corpus loading, word-span handling, and deterministic splitting.

File format: UTF-8 text with LF line endings, one sentence per line.
Segmented files (gold standard or pre-tokenized output) separate words
with ASCII spaces (0x20), following the SIGHAN bake-off convention.
Blank lines are skipped; leading/trailing whitespace is trimmed.

The train/test shuffle uses Fisher-Yates driven by MT19937 as implemented
by CPython's ``random.Random(seed)``, so a (corpus, fraction, seed) triple
always reproduces the same split.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path


class CorpusFormatError(ValueError):
    """Undecodable or structurally invalid corpus file."""


@dataclass(frozen=True)
class Sentence:
    """One line of a corpus: a character string plus optional word spans.

    ``spans`` are half-open (start, end) character intervals that must tile
    [0, len(chars)) with no gaps or overlaps.  They hold gold boundaries
    when loaded from an annotated file and predicted boundaries when
    produced by a segmenter.
    """

    id: int
    chars: str
    spans: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.spans is not None:
            pos = 0
            for start, end in self.spans:
                if start != pos or end <= start:
                    raise ValueError(
                        f"sentence {self.id}: spans must tile [0, {len(self.chars)}) "
                        f"contiguously, got span ({start}, {end}) at offset {pos}"
                    )
                pos = end
            if pos != len(self.chars):
                raise ValueError(
                    f"sentence {self.id}: spans cover [0, {pos}), "
                    f"expected [0, {len(self.chars)})"
                )

    def words(self) -> list[str]:
        if self.spans is None:
            raise ValueError(f"sentence {self.id} carries no spans")
        return [self.chars[a:b] for a, b in self.spans]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]

    def __post_init__(self) -> None:
        for i, sent in enumerate(self.sentences):
            if sent.id != i:
                raise ValueError(f"sentence ids must be 0..N-1 in order, got {sent.id} at {i}")

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def char_count(self) -> int:
        return sum(len(s.chars) for s in self.sentences)


def load_corpus(path: str | Path, gold: bool) -> Corpus:
    """Read a corpus file; with gold=True, spaces become word spans."""
    data = Path(path).read_bytes()
    sentences: list[Sentence] = []
    for lineno, raw in enumerate(data.split(b"\n"), start=1):
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusFormatError(f"{path}: line {lineno}: invalid UTF-8 ({exc.reason})") from exc
        line = line.strip()
        if not line:
            continue
        idx = len(sentences)
        if gold:
            # split(" ") + filter collapses runs of spaces into one separator
            words = [w for w in line.split(" ") if w]
            chars = "".join(words)
            spans: list[tuple[int, int]] = []
            pos = 0
            for w in words:
                spans.append((pos, pos + len(w)))
                pos += len(w)
            sentences.append(Sentence(idx, chars, tuple(spans)))
        else:
            sentences.append(Sentence(idx, line, None))
    return Corpus(tuple(sentences))


def save_corpus(corpus: Corpus, path: str | Path, spaced: bool) -> None:
    """Write one sentence per line; spaced=True joins word spans with spaces."""
    lines = []
    for sent in corpus.sentences:
        if spaced:
            lines.append(" ".join(sent.words()))
        else:
            lines.append(sent.chars)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _reindexed(sentences: list[Sentence]) -> Corpus:
    return Corpus(tuple(dataclasses.replace(s, id=i) for i, s in enumerate(sentences)))


def split_indices(
    n: int,
    train_fraction: float = 0.70,
    seed: int = 42,
    mode: str = "random",
) -> tuple[list[int], list[int]]:
    """Index-level split: which original positions go to train vs test."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if n <= 0:
        raise ValueError("cannot split an empty corpus")
    if mode not in ("random", "sequential"):
        raise ValueError(f"unknown split mode {mode!r}")
    order = list(range(n))
    if mode == "random":
        random.Random(seed).shuffle(order)
    # exact decimal arithmetic so e.g. 10 * 0.7 floors to 7, not 6
    cut = int(Fraction(str(train_fraction)) * n)
    return order[:cut], order[cut:]


def split_corpus(
    corpus: Corpus,
    train_fraction: float = 0.70,
    seed: int = 42,
    mode: str = "random",
) -> tuple[Corpus, Corpus]:
    """Split into (train, test) with floor(N * train_fraction) train sentences.

    mode="random" shuffles with the seeded PRNG documented above;
    mode="sequential" keeps file order.  Ids are reassigned contiguously
    within each half.
    """
    train_idx, test_idx = split_indices(len(corpus.sentences), train_fraction, seed, mode)
    train = [corpus.sentences[i] for i in train_idx]
    test = [corpus.sentences[i] for i in test_idx]
    return _reindexed(train), _reindexed(test)


def subset_corpus(corpus: Corpus, n: int, seed: int = 42, mode: str = "random") -> Corpus:
    """Keep n sentences (seeded sample in original order, or the first n)."""
    if n <= 0:
        raise ValueError(f"subset size must be positive, got {n}")
    if mode not in ("random", "head"):
        raise ValueError(f"unknown subset mode {mode!r}")
    n = min(n, len(corpus.sentences))
    if mode == "head":
        picked = list(corpus.sentences[:n])
    else:
        order = list(range(len(corpus.sentences)))
        random.Random(seed).shuffle(order)
        picked = [corpus.sentences[i] for i in sorted(order[:n])]
    return _reindexed(picked)


def strip_gold(corpus: Corpus) -> Corpus:
    """Drop all spans, keeping characters and ids unchanged."""
    return Corpus(
        tuple(dataclasses.replace(s, spans=None) for s in corpus.sentences)
    )
