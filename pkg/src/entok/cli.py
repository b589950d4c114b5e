"""Command-line interface.

Subcommands: stats, pretok-stat, pretok-entropy, train-bpe, encode, eval,
run, grid, figdata.  Exit code 0 on success; failures print a
stage-tagged message on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bpe as bpe_mod
from . import entropy_model as em
from . import ngram_stats as ns
from . import pretok_stat as ps
from . import seg_eval as ev
from .corpus import load_corpus, save_corpus, subset_corpus
from .pipeline import RunConfig, emit_figure_data, grid_search, run_pipeline


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", required=True, type=Path, help="input corpus file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--subset", type=int, default=0,
                   help="keep only N sentences (seeded sample); 0 = all")


def _add_stat_args(p: argparse.ArgumentParser, suppress: bool = False) -> None:
    def dflt(value):
        # SUPPRESS leaves the attribute absent unless the flag was given, so
        # `run` can reject options that belong to a different method
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--lambda", dest="lam", type=float, default=dflt(4.0),
                   help="weight of the separability (entropy) term")
    p.add_argument("--min-count", type=int, default=dflt(2),
                   help="minimum span frequency to become a candidate")
    p.add_argument("--nmax", type=int, default=dflt(6), help="maximum candidate span length")
    p.add_argument("--entropy-only", action="store_true", default=dflt(False),
                   help="score candidates by min side entropy alone")
    p.add_argument("--pmi-normalizer", choices=("chars", "ngrams"), default=dflt("chars"))


def _add_entropy_args(p: argparse.ArgumentParser, suppress: bool = False) -> None:
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--provider", choices=("charlm", "file"), default=dflt("charlm"))
    p.add_argument("--lm-order", type=int, default=dflt(3))
    p.add_argument("--lm-alpha", type=float, default=dflt(0.1))
    p.add_argument("--min-prominence", type=float, default=dflt(0.0))
    p.add_argument("--cut-side", choices=("before", "after"), default=dflt("before"))
    p.add_argument("--entropy-file", type=Path, default=dflt(None))


def _add_bpe_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vocab-size", type=int, default=12000)
    p.add_argument("--min-pair-count", type=int, default=2)


def _cmd_stats(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, gold=False)
    if args.subset:
        corpus = subset_corpus(corpus, args.subset, seed=args.seed)
    table = ns.count_ngrams(corpus, args.nmax, args.pmi_normalizer)
    ns.dump_stats(table, args.out, args.min_count)
    print(f"wrote {args.out}")
    return 0


def _cmd_pretok_stat(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, gold=False)
    if args.subset:
        corpus = subset_corpus(corpus, args.subset, seed=args.seed)
    table = ns.count_ngrams(corpus, args.nmax, args.pmi_normalizer)
    candidates = ps.build_candidates(table, args.lam, args.min_count, args.entropy_only)
    save_corpus(ps.pretokenize_corpus(corpus, candidates), args.out, spaced=True)
    print(f"wrote {args.out}")
    return 0


def _cmd_pretok_entropy(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, gold=False)
    if args.subset:
        corpus = subset_corpus(corpus, args.subset, seed=args.seed)
    if args.provider == "file":
        if args.entropy_file is None:
            raise ValueError("--provider file requires --entropy-file")
        traces = em.load_entropy_file(args.entropy_file, corpus)
    else:
        lm = em.train_char_lm(corpus, args.lm_order, args.lm_alpha)
        traces = em.trace_corpus(corpus, lm.entropy)
    config = em.PeakConfig(args.min_prominence)
    save_corpus(
        em.pretokenize_corpus_entropy(corpus, traces, config, args.cut_side),
        args.out,
        spaced=True,
    )
    print(f"wrote {args.out}")
    return 0


def _cmd_train_bpe(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, gold=True)  # spaces delimit pre-tokens
    model = bpe_mod.train_bpe(corpus, args.vocab_size, args.min_pair_count)
    bpe_mod.save_model(model, args.out)
    print(f"wrote {args.out} ({len(model.vocab)} tokens, {len(model.merges)} merges)")
    return 0


def _cmd_encode(args: argparse.Namespace) -> int:
    model = bpe_mod.load_model(args.model)
    lines = []
    for raw in Path(args.input).read_text(encoding="utf-8").splitlines():
        raw = raw.strip()
        if raw:
            lines.append(" ".join(bpe_mod.encode(model, raw)))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    predicted = load_corpus(args.pred, gold=True)
    gold = load_corpus(args.gold, gold=True)
    word = ev.word_level_eval(predicted, gold)
    boundary = ev.boundary_level_eval(predicted, gold)
    for name, report in (("word", word), ("boundary", boundary)):
        p, r, f1 = report.as_percentages()
        print(f"{name:<9} P={p:.2f} R={r:.2f} F1={f1:.2f} "
              f"(tp={report.true_positives} pred={report.predicted_count} "
              f"gold={report.gold_count})")
    return 0


_STAT_FLAGS = ("lam", "min_count", "nmax", "entropy_only", "pmi_normalizer")
_ENTROPY_FLAGS = ("provider", "lm_order", "lm_alpha", "min_prominence", "cut_side", "entropy_file")


def _config_from_args(args: argparse.Namespace, method: str | None = None) -> RunConfig:
    optional = {}
    for name in _STAT_FLAGS + _ENTROPY_FLAGS:
        if hasattr(args, name):
            key = "n_max" if name == "nmax" else name
            optional[key] = getattr(args, name)
    return RunConfig(
        method=method or args.method,
        corpus_path=args.corpus,
        out_dir=args.out_dir,
        seed=args.seed,
        train_fraction=args.train_fraction,
        split_mode=args.split_mode,
        subset=args.subset,
        vocab_size=args.vocab_size,
        min_pair_count=args.min_pair_count,
        **optional,
    )


def _check_method_flags(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Reject options that belong to a different method."""
    given = {k for k in _STAT_FLAGS + _ENTROPY_FLAGS if hasattr(args, k)}
    if args.method != "statistical":
        bad = sorted(given & set(_STAT_FLAGS))
        if bad:
            parser.error(f"options {bad} are only valid with --method statistical")
    if args.method != "llm-entropy":
        bad = sorted(given & set(_ENTROPY_FLAGS))
        if bad:
            parser.error(f"options {bad} are only valid with --method llm-entropy")


def _cmd_run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _check_method_flags(parser, args)
    result = run_pipeline(_config_from_args(args))
    p, r, f1 = result.word.as_percentages()
    print(f"{result.label}: P={p:.2f} R={r:.2f} F1={f1:.2f} -> {result.out_dir}")
    return 0


def _cmd_grid(args: argparse.Namespace) -> int:
    lambdas = [float(x) for x in args.lambdas.split(",") if x != ""]
    config = _config_from_args(args, method="statistical")
    results = grid_search(config, lambdas, args.include_entropy_only)
    for res in results:
        p, r, f1 = res.word.as_percentages()
        print(f"{res.label:<14} P={p:.2f} R={r:.2f} F1={f1:.2f}")
    print(f"wrote {Path(args.out_dir) / 'grid.csv'}")
    return 0


def _cmd_figdata(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus, gold=False)
    if args.subset:
        corpus = subset_corpus(corpus, args.subset, seed=args.seed)
    if args.kind in ("pmi-hist", "entropy-hist"):
        table = ns.count_ngrams(corpus, args.nmax, args.pmi_normalizer)
        path = emit_figure_data(args.kind, args.out_dir, table=table, bins=args.bins)
    elif args.kind == "trace":
        sent = corpus.sentences[args.sentence_id]
        if args.provider == "file":
            if args.entropy_file is None:
                raise ValueError("--provider file requires --entropy-file")
            traces = em.load_entropy_file(args.entropy_file, corpus)
            trace = traces[sent.id]
        else:
            lm = em.train_char_lm(corpus, args.lm_order, args.lm_alpha)
            trace = em.trace_sentence(sent, lm.entropy)
        peaks = em.detect_peaks(trace, em.PeakConfig(args.min_prominence))
        path = emit_figure_data(
            "trace", args.out_dir, trace=trace, sentence=sent, peaks=peaks
        )
    else:
        raise ValueError(f"unknown figure kind {args.kind!r}")
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entok",
        description="entropy-guided pre-tokenization, boundary-constrained BPE, "
                    "and segmentation evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="dump per-span PMI / entropy values as CSV")
    _add_corpus_args(p)
    _add_stat_args(p)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("pretok-stat", help="segment a corpus by span utility")
    _add_corpus_args(p)
    _add_stat_args(p)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_cmd_pretok_stat)

    p = sub.add_parser("pretok-entropy", help="segment a corpus at entropy peaks")
    _add_corpus_args(p)
    _add_entropy_args(p)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_cmd_pretok_entropy)

    p = sub.add_parser("train-bpe", help="train BPE on a space-delimited corpus")
    p.add_argument("--corpus", required=True, type=Path)
    _add_bpe_args(p)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_cmd_train_bpe)

    p = sub.add_parser("encode", help="tokenize a file with a trained model")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("eval", help="score a predicted segmentation against gold")
    p.add_argument("--pred", required=True, type=Path)
    p.add_argument("--gold", required=True, type=Path)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("run", help="full pipeline: pre-tokenize, train BPE, segment, evaluate")
    _add_corpus_args(p)
    p.add_argument("--out-dir", required=True, type=Path)
    p.add_argument("--train-fraction", type=float, default=0.70)
    p.add_argument("--split-mode", choices=("random", "sequential"), default="random")
    p.add_argument("--method", choices=("baseline", "statistical", "llm-entropy"),
                   required=True)
    _add_stat_args(p, suppress=True)
    _add_entropy_args(p, suppress=True)
    _add_bpe_args(p)
    p.set_defaults(func=None, _run_parser=p)

    p = sub.add_parser("grid", help="run the statistical pipeline across a lambda list")
    _add_corpus_args(p)
    p.add_argument("--out-dir", required=True, type=Path)
    p.add_argument("--train-fraction", type=float, default=0.70)
    p.add_argument("--split-mode", choices=("random", "sequential"), default="random")
    _add_stat_args(p)
    _add_bpe_args(p)
    p.add_argument("--lambdas", default="0,1,4,15", help="comma-separated lambda values")
    p.add_argument("--include-entropy-only", action="store_true")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("figdata", help="emit plottable CSVs (histograms, traces)")
    _add_corpus_args(p)
    _add_stat_args(p)
    _add_entropy_args(p)
    p.add_argument("--kind", choices=("pmi-hist", "entropy-hist", "trace"), required=True)
    p.add_argument("--sentence-id", type=int, default=0)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--out-dir", required=True, type=Path)
    p.set_defaults(func=_cmd_figdata)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        if command == "run":
            return _cmd_run(args, args._run_parser)
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single exit point with stage tag
        print(f"entok {command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
