"""Segmentation scoring against gold word boundaries.

The primary metric counts a predicted segment as correct only when both
its start and end coincide with a gold word (exact-span matching, as in
the SIGHAN bake-off scorer), micro-averaged over the corpus.  A
boundary-level variant compares interior cut positions instead and is
reported as a diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus, Sentence
from .pretok_stat import Segmentation


class AlignmentError(ValueError):
    """Predicted and gold sides disagree on the underlying characters."""


def harmonic_f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    predicted_count: int
    gold_count: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(
        cls, tp: int, predicted: int, gold: int, perfect_when_empty: bool = False
    ) -> "EvalReport":
        if perfect_when_empty and predicted == 0 and gold == 0:
            return cls(0, 0, 0, 1.0, 1.0, 1.0)
        p = tp / predicted if predicted else 0.0
        r = tp / gold if gold else 0.0
        return cls(tp, predicted, gold, p, r, harmonic_f1(p, r))

    def as_percentages(self) -> tuple[float, float, float]:
        return (100 * self.precision, 100 * self.recall, 100 * self.f1)


def _paired(predicted: Corpus, gold: Corpus) -> list[tuple[Sentence, Sentence]]:
    if len(predicted.sentences) != len(gold.sentences):
        raise AlignmentError(
            f"predicted has {len(predicted.sentences)} sentences, "
            f"gold has {len(gold.sentences)}"
        )
    pairs = []
    for p, g in zip(predicted.sentences, gold.sentences):
        if p.chars != g.chars:
            raise AlignmentError(f"sentence {g.id}: predicted and gold characters differ")
        if p.spans is None or g.spans is None:
            raise AlignmentError(f"sentence {g.id}: both sides must carry spans")
        pairs.append((p, g))
    return pairs


def word_level_eval(predicted: Corpus, gold: Corpus) -> EvalReport:
    """Exact-span word matching, micro-averaged."""
    tp = pred_n = gold_n = 0
    for p, g in _paired(predicted, gold):
        tp += len(set(p.spans) & set(g.spans))
        pred_n += len(p.spans)
        gold_n += len(g.spans)
    return EvalReport.from_counts(tp, pred_n, gold_n)


def _cuts(sentence: Sentence) -> set[int]:
    return {start for start, _ in sentence.spans if start != 0}


def boundary_level_eval(predicted: Corpus, gold: Corpus) -> EvalReport:
    """Interior cut-position matching; both sides cut-free counts as perfect."""
    tp = pred_n = gold_n = 0
    for p, g in _paired(predicted, gold):
        pc, gc = _cuts(p), _cuts(g)
        tp += len(pc & gc)
        pred_n += len(pc)
        gold_n += len(gc)
    return EvalReport.from_counts(tp, pred_n, gold_n, perfect_when_empty=True)


def tokens_to_segmentation(
    tokens: list[str], sentence: Sentence, unk_token: str = "<unk>"
) -> Segmentation:
    """Token list -> spans at cumulative token lengths.

    The unknown token consumes exactly one character.  Raises
    AlignmentError when the tokens do not reproduce the sentence.
    """
    cuts: list[int] = []
    pos = 0
    chars = sentence.chars
    for tok in tokens:
        width = 1 if tok == unk_token else len(tok)
        if tok != unk_token and chars[pos : pos + width] != tok:
            raise AlignmentError(
                f"sentence {sentence.id}: token {tok!r} does not match "
                f"characters at position {pos}"
            )
        pos += width
        if pos < len(chars):
            cuts.append(pos)
    if pos != len(chars):
        raise AlignmentError(
            f"sentence {sentence.id}: tokens cover {pos} of {len(chars)} characters"
        )
    return Segmentation(sentence.id, len(chars), tuple(cuts))
