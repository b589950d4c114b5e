"""Next-character conditional entropy: providers, traces, and peak cuts.

A provider maps a character prefix to the entropy (in nats) of the
distribution over the next character.  Two providers are supported: a
built-in add-alpha smoothed character n-gram model, and traces imported
from a file produced by an external model.  Boundaries are inserted where
the per-position entropy has a local maximum: uncertainty spiking at
position t marks t as the likely start of a new unit, so the default cut
goes before t (the opposite convention is available via cut_side).

Trace file format (the contract with external exporters): UTF-8,
line-delimited JSON, one object per sentence:

    {"id": 0, "chars": ["a", "b"], "H": [2.1, 0.3]}

with len(chars) == len(H) and H in nats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

from .corpus import Corpus, Sentence
from .pretok_stat import Segmentation

# Context padding symbol for positions before the sentence start.  Kept
# distinct from every real character by construction (not a str).
_PAD = None


class TraceFormatError(ValueError):
    """Malformed or corpus-inconsistent entropy trace file."""


class TraceError(RuntimeError):
    """Provider failure while tracing a sentence; carries the position."""

    def __init__(self, sentence_id: int, position: int, cause: Exception):
        super().__init__(
            f"entropy provider failed at sentence {sentence_id}, position {position}: {cause}"
        )
        self.sentence_id = sentence_id
        self.position = position


@dataclass(frozen=True)
class EntropyTrace:
    """values[t] = H(next char | chars[0..t)) in nats, one per character."""

    sentence_id: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        for t, v in enumerate(self.values):
            if not math.isfinite(v) or v < 0:
                raise ValueError(
                    f"sentence {self.sentence_id}: entropy at position {t} "
                    f"must be finite and >= 0, got {v}"
                )


@dataclass(frozen=True)
class PeakConfig:
    """min_prominence: required excess of a peak over its higher neighbor.

    0 accepts any strict local maximum.  Plateaus always resolve to their
    leftmost index.
    """

    min_prominence: float = 0.0

    def __post_init__(self) -> None:
        if self.min_prominence < 0:
            raise ValueError(f"min_prominence must be >= 0, got {self.min_prominence}")


@dataclass
class CharLM:
    """Add-alpha smoothed character n-gram model over an observed alphabet.

    P(x | ctx) = (count(ctx, x) + alpha) / (total(ctx) + alpha * V), with
    contexts padded at sentence starts.  Unseen contexts therefore yield
    the uniform distribution and entropy ln(V).
    """

    order: int
    alpha: float
    alphabet: tuple[str, ...]
    context_counts: dict[tuple, dict[str, int]]
    context_totals: dict[tuple, int]

    def _context(self, prefix: str) -> tuple:
        tail = prefix[-self.order :] if self.order <= len(prefix) else prefix
        return (_PAD,) * (self.order - len(tail)) + tuple(tail)

    def entropy(self, prefix: str) -> float:
        ctx = self._context(prefix)
        hist = self.context_counts.get(ctx)
        v = len(self.alphabet)
        if not hist:
            return math.log(v)
        denom = self.context_totals[ctx] + self.alpha * v
        h = 0.0
        for count in hist.values():
            p = (count + self.alpha) / denom
            h -= p * math.log(p)
        rest = v - len(hist)
        if rest and self.alpha > 0:
            p0 = self.alpha / denom
            h -= rest * p0 * math.log(p0)
        return h


def train_char_lm(corpus: Corpus, order: int = 3, alpha: float = 0.1) -> CharLM:
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if not corpus.sentences:
        raise ValueError("cannot train on an empty corpus")
    counts: dict[tuple, dict[str, int]] = {}
    totals: dict[tuple, int] = {}
    seen: dict[str, None] = {}
    for sent in corpus.sentences:
        ctx = (_PAD,) * order
        for ch in sent.chars:
            seen[ch] = None
            hist = counts.get(ctx)
            if hist is None:
                hist = counts[ctx] = {}
            hist[ch] = hist.get(ch, 0) + 1
            totals[ctx] = totals.get(ctx, 0) + 1
            ctx = ctx[1:] + (ch,)
    return CharLM(
        order=order,
        alpha=alpha,
        alphabet=tuple(sorted(seen)),
        context_counts=counts,
        context_totals=totals,
    )


def next_char_entropy(lm: CharLM, prefix: str) -> float:
    """Entropy in nats of the smoothed next-character distribution."""
    return lm.entropy(prefix)


def trace_sentence(sentence: Sentence, provider: Callable[[str], float]) -> EntropyTrace:
    """values[t] = provider(chars[0..t)) for every character position."""
    values: list[float] = []
    s = sentence.chars
    for t in range(len(s)):
        try:
            values.append(float(provider(s[:t])))
        except Exception as exc:  # noqa: BLE001 - contract: wrap with position
            raise TraceError(sentence.id, t, exc) from exc
    return EntropyTrace(sentence.id, tuple(values))


def trace_corpus(corpus: Corpus, provider: Callable[[str], float]) -> dict[int, EntropyTrace]:
    return {s.id: trace_sentence(s, provider) for s in corpus.sentences}


def save_entropy_file(corpus: Corpus, traces: dict[int, EntropyTrace], path: str | Path) -> None:
    """Write one JSON object per sentence, in corpus order."""
    with open(path, "w", encoding="utf-8") as fh:
        for sent in corpus.sentences:
            trace = traces[sent.id]
            record = {"id": sent.id, "chars": list(sent.chars), "H": list(trace.values)}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_entropy_file(path: str | Path, corpus: Corpus | None = None) -> dict[int, EntropyTrace]:
    """Parse a trace file; with a corpus, enforce id/length/character agreement."""
    traces: dict[int, EntropyTrace] = {}
    chars_by_id: dict[int, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceFormatError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            try:
                sid = int(record["id"])
                chars = record["chars"]
                values = [float(v) for v in record["H"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise TraceFormatError(f"{path}: line {lineno}: malformed record ({exc})") from exc
            if not isinstance(chars, list) or any(not isinstance(c, str) for c in chars):
                raise TraceFormatError(f"{path}: line {lineno}: 'chars' must be a list of strings")
            if len(chars) != len(values):
                raise TraceFormatError(
                    f"{path}: sentence {sid}: {len(values)} entropies for {len(chars)} characters"
                )
            if sid in traces:
                raise TraceFormatError(f"{path}: duplicate sentence id {sid}")
            try:
                traces[sid] = EntropyTrace(sid, tuple(values))
            except ValueError as exc:
                raise TraceFormatError(f"{path}: {exc}") from exc
            chars_by_id[sid] = "".join(chars)
    if corpus is not None:
        for sent in corpus.sentences:
            if sent.id not in traces:
                raise TraceFormatError(f"{path}: missing trace for sentence {sent.id}")
            if chars_by_id[sent.id] != sent.chars:
                raise TraceFormatError(
                    f"{path}: sentence {sent.id}: trace characters do not match the corpus"
                )
        known = {s.id for s in corpus.sentences}
        for sid in traces:
            if sid not in known:
                raise TraceFormatError(f"{path}: trace for unknown sentence id {sid}")
    return traces


def detect_peaks(trace: EntropyTrace, config: PeakConfig = PeakConfig()) -> tuple[int, ...]:
    """Cut positions: leftmost indices of local-maximum runs in the trace.

    A run of equal values [a..b] is a peak iff values[a] > values[a-1]
    (so a >= 1) and either b is the last position or values[b] > values[b+1].
    With min_prominence > 0 the run must additionally exceed its higher
    neighbor by at least that much.  A cut at t places a boundary before
    character t; 0 and len are implicit and never emitted.
    """
    v = trace.values
    length = len(v)
    if length == 0:
        raise ValueError("cannot detect peaks in an empty trace")
    cuts: list[int] = []
    i = 0
    while i < length:
        j = i
        while j + 1 < length and v[j + 1] == v[i]:
            j += 1
        if i > 0 and v[i] > v[i - 1] and (j == length - 1 or v[j] > v[j + 1]):
            higher_neighbor = v[i - 1] if j == length - 1 else max(v[i - 1], v[j + 1])
            if config.min_prominence == 0 or v[i] - higher_neighbor >= config.min_prominence:
                cuts.append(i)
        i = j + 1
    return tuple(cuts)


def _cuts_for(trace: EntropyTrace, config: PeakConfig, cut_side: str) -> tuple[int, ...]:
    peaks = detect_peaks(trace, config)
    if cut_side == "before":
        return peaks
    if cut_side == "after":
        length = len(trace.values)
        return tuple(t + 1 for t in peaks if t + 1 <= length - 1)
    raise ValueError(f"cut_side must be 'before' or 'after', got {cut_side!r}")


def pretokenize_corpus_entropy(
    corpus: Corpus,
    traces: dict[int, EntropyTrace],
    config: PeakConfig = PeakConfig(),
    cut_side: str = "before",
) -> Corpus:
    """Space the corpus at entropy-peak boundaries; characters unchanged."""
    sentences = []
    for sent in corpus.sentences:
        trace = traces.get(sent.id)
        if trace is None:
            raise TraceFormatError(f"missing entropy trace for sentence {sent.id}")
        if len(trace.values) != len(sent.chars):
            raise TraceFormatError(
                f"sentence {sent.id}: trace length {len(trace.values)} "
                f"does not match {len(sent.chars)} characters"
            )
        seg = Segmentation(sent.id, len(sent.chars), _cuts_for(trace, config, cut_side))
        sentences.append(replace(sent, spans=seg.spans()))
    return Corpus(tuple(sentences))
