#!/usr/bin/env python3
"""Write a gold-segmented synthetic corpus with news-like word statistics.

Usage:
    python scripts/make_synthetic_corpus.py --out data/gold.txt
    python scripts/make_synthetic_corpus.py --out small.txt --sentences 200 --seed 3
"""

import argparse
from pathlib import Path

from entok.corpus import save_corpus
from entok.synth import make_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, type=Path)
    parser.add_argument("--sentences", type=int, default=2255)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    corpus = make_corpus(n_sentences=args.sentences, seed=args.seed)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, args.out, spaced=True)
    print(f"wrote {args.out}: {len(corpus)} sentences, {corpus.char_count} characters")


if __name__ == "__main__":
    main()
