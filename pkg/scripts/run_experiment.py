#!/usr/bin/env python3
"""Compare all tokenization configurations on one gold corpus.

Runs the frequency-only baseline, the utility-scored statistical method
across a lambda grid, the entropy-only variant, and (optionally) the
entropy-peak method fed by an external trace file, then prints a single
word-level P/R/F1 table.

Usage:
    python scripts/run_experiment.py --corpus data/gold.txt --out-dir runs/exp1
    python scripts/run_experiment.py --corpus data/gold.txt --out-dir runs/exp2 \
        --entropy-file traces.jsonl
Without --corpus, a synthetic surrogate corpus is generated first.
"""

import argparse
from pathlib import Path

from entok.corpus import save_corpus
from entok.pipeline import RunConfig, grid_search, run_pipeline
from entok.synth import make_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", type=Path, default=None,
                        help="gold corpus file (default: generate a surrogate)")
    parser.add_argument("--out-dir", required=True, type=Path)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--vocab-size", type=int, default=12000)
    parser.add_argument("--lambdas", default="0,1,4,15")
    parser.add_argument("--entropy-file", type=Path, default=None,
                        help="trace file for the llm-entropy configuration")
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    corpus_path = args.corpus
    if corpus_path is None:
        corpus_path = args.out_dir / "gold.txt"
        save_corpus(make_corpus(n_sentences=2255, seed=7), corpus_path, spaced=True)
        print(f"generated surrogate corpus at {corpus_path}")

    rows: list[tuple[str, object]] = []

    base = RunConfig(
        method="baseline", corpus_path=corpus_path, out_dir=args.out_dir / "baseline",
        seed=args.seed, vocab_size=args.vocab_size,
    )
    rows.append(("baseline", run_pipeline(base)))

    charlm = RunConfig(
        method="llm-entropy", corpus_path=corpus_path, out_dir=args.out_dir / "charlm",
        seed=args.seed, vocab_size=args.vocab_size,
    )
    rows.append(("charlm-entropy", run_pipeline(charlm)))

    if args.entropy_file is not None:
        llm = RunConfig(
            method="llm-entropy", corpus_path=corpus_path,
            out_dir=args.out_dir / "llm-entropy", seed=args.seed,
            vocab_size=args.vocab_size, provider="file", entropy_file=args.entropy_file,
        )
        rows.append(("llm-entropy", run_pipeline(llm)))

    grid = RunConfig(
        method="statistical", corpus_path=corpus_path, out_dir=args.out_dir / "grid",
        seed=args.seed, vocab_size=args.vocab_size,
    )
    lambdas = [float(x) for x in args.lambdas.split(",") if x != ""]
    rows.extend((res.label, res) for res in grid_search(grid, lambdas, include_entropy_only=True))

    print(f"\n{'method':<16} {'P':>7} {'R':>7} {'F1':>7}")
    for label, res in rows:
        p, r, f1 = res.word.as_percentages()
        print(f"{label:<16} {p:7.2f} {r:7.2f} {f1:7.2f}")


if __name__ == "__main__":
    main()
