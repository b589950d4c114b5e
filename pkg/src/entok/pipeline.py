"""End-to-end experiment pipeline: pre-tokenize, train BPE, segment, score.

A run loads a gold corpus, splits it (seeded shuffle by default), applies
the configured pre-tokenization to the *training* half only, trains a
boundary-constrained BPE model on it, encodes the raw test half with the
trained model, and scores the resulting token spans against the held-out
gold words.  Gold spans never reach any training stage.

Every artifact is a pure function of (corpus bytes, RunConfig): two runs
with the same inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace as dc_replace
from pathlib import Path

from . import bpe as bpe_mod
from . import entropy_model as em
from . import ngram_stats as ns
from . import pretok_stat as ps
from . import seg_eval as ev
from .corpus import (
    Corpus,
    load_corpus,
    save_corpus,
    split_indices,
    strip_gold,
    subset_corpus,
)

METHODS = ("baseline", "statistical", "llm-entropy")


@dataclass(frozen=True)
class RunConfig:
    method: str
    corpus_path: Path
    out_dir: Path
    seed: int = 42
    train_fraction: float = 0.70
    split_mode: str = "random"
    subset: int = 0  # 0 = use the whole file
    vocab_size: int = 12000
    min_pair_count: int = 2
    # statistical pre-tokenization
    lam: float = 4.0
    min_count: int = 2
    n_max: int = 6
    entropy_only: bool = False
    pmi_normalizer: str = "chars"
    # entropy pre-tokenization
    provider: str = "charlm"  # charlm | file
    lm_order: int = 3
    lm_alpha: float = 0.1
    min_prominence: float = 0.0
    cut_side: str = "before"
    entropy_file: Path | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.method == "llm-entropy" and self.provider == "file" and self.entropy_file is None:
            raise ValueError("provider 'file' requires entropy_file")

    def label(self) -> str:
        if self.method == "statistical":
            if self.entropy_only:
                return "entropy-only"
            return f"lambda={self.lam:g}"
        return self.method


@dataclass(frozen=True)
class PipelineResult:
    label: str
    word: ev.EvalReport
    boundary: ev.EvalReport
    out_dir: Path


def _load_and_split(config: RunConfig) -> tuple[Corpus, Corpus, Corpus, list[int]]:
    """(full corpus, gold train, gold test, train origin indices)."""
    corpus = load_corpus(config.corpus_path, gold=True)
    if config.subset:
        corpus = subset_corpus(corpus, config.subset, seed=config.seed)
    train_idx, test_idx = split_indices(
        len(corpus.sentences), config.train_fraction, config.seed, config.split_mode
    )
    train_gold = Corpus(
        tuple(dc_replace(corpus.sentences[i], id=k) for k, i in enumerate(train_idx))
    )
    test_gold = Corpus(
        tuple(dc_replace(corpus.sentences[i], id=k) for k, i in enumerate(test_idx))
    )
    return corpus, train_gold, test_gold, train_idx


def _statistical_pretok(config: RunConfig, train: Corpus) -> Corpus:
    table = ns.count_ngrams(train, config.n_max, config.pmi_normalizer)
    candidates = ps.build_candidates(table, config.lam, config.min_count, config.entropy_only)
    return ps.pretokenize_corpus(train, candidates)


def _entropy_pretok(config: RunConfig, train: Corpus, full_corpus: Corpus, train_origins: list[int]) -> Corpus:
    peak = em.PeakConfig(config.min_prominence)
    if config.provider == "charlm":
        lm = em.train_char_lm(train, config.lm_order, config.lm_alpha)
        traces = em.trace_corpus(train, lm.entropy)
    elif config.provider == "file":
        by_origin = em.load_entropy_file(config.entropy_file, full_corpus)
        traces = {
            new_id: dc_replace(by_origin[origin], sentence_id=new_id)
            for new_id, origin in enumerate(train_origins)
        }
    else:
        raise ValueError(f"provider must be 'charlm' or 'file', got {config.provider!r}")
    return em.pretokenize_corpus_entropy(train, traces, peak, config.cut_side)


def _identity_pretok(train: Corpus) -> Corpus:
    # one pre-token per sentence: merges may happen anywhere within it
    sentences = []
    for s in train.sentences:
        spans = ((0, len(s.chars)),) if s.chars else ()
        sentences.append(dc_replace(s, spans=spans))
    return Corpus(tuple(sentences))


def _encode_test(model: bpe_mod.BpeModel, test: Corpus) -> tuple[Corpus, list[list[str]]]:
    """Encode raw test sentences (one pre-token each) into predicted spans."""
    predicted = []
    token_lists = []
    for sent in test.sentences:
        tokens = bpe_mod.encode(model, sent.chars)
        token_lists.append(tokens)
        seg = ev.tokens_to_segmentation(tokens, sent, model.unk_token)
        predicted.append(dc_replace(sent, spans=seg.spans()))
    return Corpus(tuple(predicted)), token_lists


def _write_report_csv(path: Path, rows: list[tuple[str, ev.EvalReport]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["method", "precision", "recall", "f1", "tp", "pred", "gold"])
    for label, report in rows:
        p, r, f1 = report.as_percentages()
        writer.writerow(
            [label, f"{p:.2f}", f"{r:.2f}", f"{f1:.2f}",
             report.true_positives, report.predicted_count, report.gold_count]
        )
    path.write_text(buf.getvalue(), encoding="utf-8")


def _format_table(rows: list[tuple[str, ev.EvalReport]]) -> str:
    lines = [f"{'method':<16} {'P':>7} {'R':>7} {'F1':>7} {'tp':>8} {'pred':>8} {'gold':>8}"]
    for label, report in rows:
        p, r, f1 = report.as_percentages()
        lines.append(
            f"{label:<16} {p:7.2f} {r:7.2f} {f1:7.2f} "
            f"{report.true_positives:8d} {report.predicted_count:8d} {report.gold_count:8d}"
        )
    return "\n".join(lines)


def run_pipeline(config: RunConfig) -> PipelineResult:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    corpus, train_gold, test_gold, train_idx = _load_and_split(config)
    train = strip_gold(train_gold)
    test = strip_gold(test_gold)

    if config.method == "baseline":
        pretok = _identity_pretok(train)
    elif config.method == "statistical":
        pretok = _statistical_pretok(config, train)
    else:
        pretok = _entropy_pretok(config, train, corpus, train_idx)

    model = bpe_mod.train_bpe(pretok, config.vocab_size, config.min_pair_count)
    predicted, token_lists = _encode_test(model, test)
    word = ev.word_level_eval(predicted, test_gold)
    boundary = ev.boundary_level_eval(predicted, test_gold)

    save_corpus(train, out / "train_raw.txt", spaced=False)
    save_corpus(test, out / "test_raw.txt", spaced=False)
    save_corpus(test_gold, out / "test_gold.txt", spaced=True)
    save_corpus(pretok, out / "pretok_train.txt", spaced=True)
    bpe_mod.save_model(model, out / "bpe_model.json")
    (out / "test_tokens.txt").write_text(
        "\n".join(" ".join(tokens) for tokens in token_lists) + "\n", encoding="utf-8"
    )
    save_corpus(predicted, out / "test_pred.txt", spaced=True)

    label = config.label()
    _write_report_csv(out / "report.csv", [(label, word)])
    _write_report_csv(out / "report_boundary.csv", [(label, boundary)])
    (out / "report.txt").write_text(
        "word-level (exact span match)\n"
        + _format_table([(label, word)])
        + "\n\nboundary-level (interior cuts)\n"
        + _format_table([(label, boundary)])
        + "\n",
        encoding="utf-8",
    )
    return PipelineResult(label, word, boundary, out)


def grid_search(
    config: RunConfig,
    lambdas: list[float],
    include_entropy_only: bool = False,
) -> list[PipelineResult]:
    """One statistical run per lambda with a shared split and n-gram table.

    Results (and the grid.csv summary) are sorted by F1 descending, ties
    by lambda ascending (entropy-only sorts after the lambda rows on ties).
    """
    if not lambdas and not include_entropy_only:
        raise ValueError("grid search needs at least one lambda")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    _, train_gold, test_gold, _ = _load_and_split(config)
    train = strip_gold(train_gold)
    test = strip_gold(test_gold)
    table = ns.count_ngrams(train, config.n_max, config.pmi_normalizer)

    variants: list[RunConfig] = [
        dc_replace(config, method="statistical", lam=lam, entropy_only=False)
        for lam in lambdas
    ]
    if include_entropy_only:
        variants.append(dc_replace(config, method="statistical", entropy_only=True))

    results = []
    for cfg in variants:
        candidates = ps.build_candidates(table, cfg.lam, cfg.min_count, cfg.entropy_only)
        pretok = ps.pretokenize_corpus(train, candidates)
        model = bpe_mod.train_bpe(pretok, cfg.vocab_size, cfg.min_pair_count)
        predicted, _ = _encode_test(model, test)
        word = ev.word_level_eval(predicted, test_gold)
        boundary = ev.boundary_level_eval(predicted, test_gold)
        results.append(PipelineResult(cfg.label(), word, boundary, out))

    def sort_key(res: PipelineResult) -> tuple:
        lam = float("inf") if res.label == "entropy-only" else float(res.label.split("=")[1])
        return (-res.word.f1, lam)

    results.sort(key=sort_key)
    _write_report_csv(out / "grid.csv", [(r.label, r.word) for r in results])
    return results


def emit_figure_data(
    kind: str,
    out_dir: Path,
    table: ns.NGramTable | None = None,
    corpus: Corpus | None = None,
    trace: em.EntropyTrace | None = None,
    sentence=None,
    peaks: tuple[int, ...] = (),
    bins: int = 10,
) -> Path:
    """Plottable CSVs for the feature-distribution and trace figures."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if kind == "pmi-hist":
        if table is None:
            raise ValueError("pmi-hist requires an n-gram table")
        values = [
            ns.pmi(table, w[0], w[1]) for w in table.freq if len(w) == 2
        ]
        path = out_dir / "pmi_hist.csv"
        _write_hist(path, [("pmi", values)], bins)
        return path
    if kind == "entropy-hist":
        if table is None:
            raise ValueError("entropy-hist requires an n-gram table")
        lefts, rights = [], []
        for w in table.freq:
            if len(w) < 2:
                continue
            h_left, h_right = ns.span_entropies(table, w)
            lefts.append(h_left)
            rights.append(h_right)
        path = out_dir / "entropy_hist.csv"
        _write_hist(path, [("left", lefts), ("right", rights)], bins)
        return path
    if kind == "trace":
        if trace is None or sentence is None:
            raise ValueError("trace requires a trace and its sentence")
        path = out_dir / f"trace_{sentence.id}.csv"
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["position", "char", "entropy", "is_peak"])
        peak_set = set(peaks)
        for t, (ch, h) in enumerate(zip(sentence.chars, trace.values)):
            writer.writerow([t, ch, h, int(t in peak_set)])
        path.write_text(buf.getvalue(), encoding="utf-8")
        return path
    raise ValueError(f"unknown figure kind {kind!r}")


def _write_hist(path: Path, series: list[tuple[str, list[float]]], bins: int) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["series", "bin_lo", "bin_hi", "count"])
    for name, values in series:
        if not values:
            continue
        lo = min(values)
        hi = max(values)
        width = (hi - lo) / bins if hi > lo else 1.0
        counts = [0] * bins
        for v in values:
            idx = min(int((v - lo) / width), bins - 1)
            counts[idx] += 1
        for b in range(bins):
            writer.writerow([name, lo + b * width, lo + (b + 1) * width, counts[b]])
    path.write_text(buf.getvalue(), encoding="utf-8")


def hist_lowest_bin_share(path: Path, series: str) -> float:
    """Fraction of a histogram series' mass in its first bin."""
    rows = [r for r in csv.reader(path.read_text(encoding="utf-8").splitlines()) if r]
    counts = [int(r[3]) for r in rows[1:] if r[0] == series]
    total = sum(counts)
    return counts[0] / total if total else 0.0
