"""Byte-pair encoding confined to whitespace-delimited pre-tokens.

Training repeatedly merges the most frequent adjacent symbol pair, where
adjacency is only counted inside pre-tokens, until the vocabulary reaches
its target size or the best pair falls below min_pair_count (default 2).
Ties break lexicographically on the (left, right) token strings so the
merge list is identical across runs, processes, and machines.

Model file: UTF-8 JSON {"base_vocab": [...], "merges": [["l","r"], ...],
"target_vocab_size": N}.  base_vocab lists the unknown token first and
then the training characters in sorted order; token ids are assigned
densely in base_vocab order followed by merge order.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus

UNK = "<unk>"


class ModelFormatError(ValueError):
    """Malformed or self-inconsistent serialized model."""


@dataclass
class BpeModel:
    base_vocab: tuple[str, ...]
    merges: tuple[tuple[str, str], ...]
    target_vocab_size: int
    vocab: dict[str, int] = field(init=False, repr=False)
    _ranks: dict[tuple[str, str], int] = field(init=False, repr=False)
    _cache: dict[str, tuple[str, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        vocab: dict[str, int] = {}
        for token in self.base_vocab:
            if token in vocab:
                raise ModelFormatError(f"duplicate base token {token!r}")
            vocab[token] = len(vocab)
        ranks: dict[tuple[str, str], int] = {}
        for k, (left, right) in enumerate(self.merges):
            if left not in vocab or right not in vocab:
                raise ModelFormatError(
                    f"merge {k} ({left!r}, {right!r}) references a token "
                    f"not yet defined at that point"
                )
            merged = left + right
            if merged in vocab:
                raise ModelFormatError(f"merge {k} re-creates existing token {merged!r}")
            vocab[merged] = len(vocab)
            ranks[(left, right)] = k
        if len(vocab) > self.target_vocab_size:
            raise ModelFormatError(
                f"vocabulary of {len(vocab)} exceeds target size {self.target_vocab_size}"
            )
        self.vocab = vocab
        self._ranks = ranks
        self._cache = {}

    @property
    def unk_token(self) -> str:
        return UNK

    def id_of(self, token: str) -> int:
        return self.vocab[token]

    def _encode_pretoken(self, pretoken: str) -> tuple[str, ...]:
        cached = self._cache.get(pretoken)
        if cached is not None:
            return cached
        vocab = self.vocab
        symbols = [c if c in vocab else UNK for c in pretoken]
        ranks = self._ranks
        while len(symbols) > 1:
            best_rank = None
            best_pair = None
            for pair in zip(symbols, symbols[1:]):
                rank = ranks.get(pair)
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
                    best_pair = pair
            if best_pair is None:
                break
            symbols = _replace_pair(symbols, best_pair)
        result = tuple(symbols)
        self._cache[pretoken] = result
        return result


def _replace_pair(symbols: list[str], pair: tuple[str, str]) -> list[str]:
    """Left-to-right, non-overlapping replacement of pair with its merge."""
    left, right = pair
    merged = left + right
    out: list[str] = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == left and symbols[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _pretokens(corpus: Corpus) -> dict[str, int]:
    """Distinct pre-tokens with frequencies; span-less sentences count whole."""
    freqs: dict[str, int] = {}
    for sent in corpus.sentences:
        if sent.spans is None:
            words = [sent.chars] if sent.chars else []
        else:
            words = sent.words()
        for w in words:
            freqs[w] = freqs.get(w, 0) + 1
    return freqs


def train_bpe(
    pretokenized: Corpus,
    target_vocab_size: int = 12000,
    min_pair_count: int = 2,
) -> BpeModel:
    """Learn merges from the pre-tokenized corpus; pairs never span pre-tokens."""
    if min_pair_count < 1:
        raise ValueError(f"min_pair_count must be >= 1, got {min_pair_count}")
    word_freqs = _pretokens(pretokenized)
    chars = sorted({c for w in word_freqs for c in w})
    base = (UNK, *chars)
    if target_vocab_size < len(base):
        raise ValueError(
            f"target_vocab_size {target_vocab_size} is below the base "
            f"vocabulary of {len(base)} (characters plus {UNK!r})"
        )

    words: list[list[str]] = [list(w) for w in word_freqs]
    freqs: list[int] = list(word_freqs.values())
    pair_counts: dict[tuple[str, str], int] = {}
    occ: dict[tuple[str, str], set[int]] = {}
    heap: list[tuple[int, str, str]] = []

    def bump(pair: tuple[str, str], delta: int) -> None:
        new = pair_counts.get(pair, 0) + delta
        if new > 0:
            pair_counts[pair] = new
        else:
            pair_counts.pop(pair, None)

    for wid, word in enumerate(words):
        f = freqs[wid]
        for pair in zip(word, word[1:]):
            bump(pair, f)
            occ.setdefault(pair, set()).add(wid)
    for pair, count in pair_counts.items():
        heapq.heappush(heap, (-count, pair[0], pair[1]))

    vocab_size = len(base)
    merges: list[tuple[str, str]] = []
    existing = set(base)
    while vocab_size < target_vocab_size and heap:
        neg_count, left, right = heapq.heappop(heap)
        pair = (left, right)
        if pair_counts.get(pair) != -neg_count:
            continue  # stale heap entry
        if -neg_count < min_pair_count:
            break
        merged = left + right
        if merged in existing:
            # merging would duplicate an existing token string; retire the pair
            pair_counts.pop(pair, None)
            occ.pop(pair, None)
            continue
        merges.append(pair)
        existing.add(merged)
        vocab_size += 1

        touched: dict[tuple[str, str], None] = {}
        for wid in sorted(occ.pop(pair, ())):
            word = words[wid]
            f = freqs[wid]
            new_word = _replace_pair(word, pair)
            if len(new_word) == len(word):
                continue  # stale occurrence, pair no longer present
            for p in zip(word, word[1:]):
                bump(p, -f)
                touched[p] = None
            for p in zip(new_word, new_word[1:]):
                bump(p, f)
                touched[p] = None
                occ.setdefault(p, set()).add(wid)
            words[wid] = new_word
        for p in touched:
            count = pair_counts.get(p)
            if count is not None:
                heapq.heappush(heap, (-count, p[0], p[1]))

    return BpeModel(base_vocab=base, merges=tuple(merges), target_vocab_size=target_vocab_size)


def encode(model: BpeModel, text: str) -> list[str]:
    """Tokenize text whose spaces (if any) delimit pre-tokens.

    Merges apply within pre-tokens only; characters never seen in training
    come out as the unknown token, one per character.
    """
    tokens: list[str] = []
    for pretoken in text.split(" "):
        if pretoken:
            tokens.extend(model._encode_pretoken(pretoken))
    return tokens


def decode(model: BpeModel, tokens: list[str] | list[int]) -> str:
    """Concatenate token strings; accepts token strings or integer ids."""
    if any(isinstance(t, int) for t in tokens):
        by_id = {i: t for t, i in model.vocab.items()}
        parts = []
        for t in tokens:
            if not isinstance(t, int) or t not in by_id:
                raise ValueError(f"invalid token id {t!r}")
            parts.append(by_id[t])
        return "".join(parts)
    for t in tokens:
        if t not in model.vocab:
            raise ValueError(f"unknown token {t!r}")
    return "".join(tokens)


def save_model(model: BpeModel, path: str | Path) -> None:
    payload = {
        "base_vocab": list(model.base_vocab),
        "merges": [list(m) for m in model.merges],
        "target_vocab_size": model.target_vocab_size,
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> BpeModel:
    """Read a model file, re-validating the merge-order invariant."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: line {exc.lineno}: invalid JSON ({exc.msg})") from exc
    try:
        base = tuple(str(t) for t in payload["base_vocab"])
        merges = tuple((str(l), str(r)) for l, r in payload["merges"])
        target = int(payload["target_vocab_size"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: malformed model payload ({exc})") from exc
    try:
        return BpeModel(base_vocab=base, merges=merges, target_vocab_size=target)
    except ModelFormatError as exc:
        raise ModelFormatError(f"{path}: {exc}") from exc
