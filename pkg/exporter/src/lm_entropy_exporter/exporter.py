"""Per-character next-token entropy traces from a pretrained causal LM.

For each sentence (UTF-8 file, one sentence per line, no spaces) and each
character position t, the exporter records the Shannon entropy, in nats,
of the model's full-vocabulary next-token distribution given the tokens of
the first t characters.  Position 0 conditions on the model's
start-of-sequence convention ([CLS]/BOS).  Characters that the tokenizer
expands into several tokens extend the context by all of them, but the
recorded entropy is the one predicted at their first token; characters
with no encoding fall back to the unknown token.  Both cases are counted
and logged.

Output is line-delimited JSON, one object per sentence:

    {"id": 0, "chars": ["a", "b"], "H": [2.1, 0.3]}

with len(chars) == len(H), which is the trace-file contract of the
segmentation pipeline that consumes these traces.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import AutoModelForCausalLM, AutoTokenizer

# 24-layer / 1024-hidden Chinese GPT-2 family (BERT vocabulary, 21,128 tokens)
DEFAULT_MODEL = "uer/gpt2-chinese-cluecorpussmall"

log = logging.getLogger("lm_entropy_exporter")


@dataclass
class ExportConfig:
    corpus: Path
    out: Path
    model: str = DEFAULT_MODEL
    batch_size: int = 8
    device: str | None = None

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


def read_sentences(path: str | Path) -> list[str]:
    """One sentence per line; blank lines skipped, surrounding space trimmed."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


def start_token_id(tokenizer) -> int:
    for tid in (tokenizer.cls_token_id, tokenizer.bos_token_id, tokenizer.eos_token_id):
        if tid is not None:
            return tid
    raise ValueError("tokenizer provides no CLS/BOS/EOS token to condition position 0 on")


def build_sequence(tokenizer, sentence: str) -> tuple[list[int], list[int], int, int]:
    """(token ids incl. start token, per-char logit positions, multi, missing).

    The entropy for character t is read from the logits at the position of
    the last token preceding the character's first token.
    """
    ids = [start_token_id(tokenizer)]
    positions: list[int] = []
    multi = missing = 0
    for ch in sentence:
        char_ids = tokenizer.encode(ch, add_special_tokens=False)
        if not char_ids:
            char_ids = [tokenizer.unk_token_id]
            missing += 1
        elif len(char_ids) > 1:
            multi += 1
        positions.append(len(ids) - 1)
        ids.extend(char_ids)
    return ids, positions, multi, missing


def _entropies_for_batch(model, device, sequences, position_lists) -> list[list[float]]:
    max_len = max(len(ids) for ids in sequences)
    input_ids = torch.zeros((len(sequences), max_len), dtype=torch.long)
    attention_mask = torch.zeros((len(sequences), max_len), dtype=torch.long)
    for row, ids in enumerate(sequences):
        input_ids[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        attention_mask[row, : len(ids)] = 1
    with torch.no_grad():
        logits = model(
            input_ids=input_ids.to(device), attention_mask=attention_mask.to(device)
        ).logits.float()
    out = []
    for row, positions in enumerate(position_lists):
        if not positions:
            out.append([])
            continue
        rows = logits[row, torch.tensor(positions, dtype=torch.long)]
        log_probs = torch.log_softmax(rows, dim=-1)
        entropy = -(log_probs.exp() * log_probs).sum(dim=-1)
        out.append([float(v) for v in entropy])
    return out


def export_traces(config: ExportConfig) -> Path:
    """Write one trace record per corpus sentence; returns the output path."""
    device = config.device or ("cuda" if torch.cuda.is_available() else "cpu")
    tokenizer = AutoTokenizer.from_pretrained(config.model)
    model = AutoModelForCausalLM.from_pretrained(config.model)
    model.to(device)
    model.eval()

    sentences = read_sentences(config.corpus)
    total_multi = total_missing = 0
    records: list[str] = []
    for batch_start in range(0, len(sentences), config.batch_size):
        batch = sentences[batch_start : batch_start + config.batch_size]
        sequences, position_lists = [], []
        for sentence in batch:
            ids, positions, multi, missing = build_sequence(tokenizer, sentence)
            sequences.append(ids)
            position_lists.append(positions)
            total_multi += multi
            total_missing += missing
        for offset, values in enumerate(
            _entropies_for_batch(model, device, sequences, position_lists)
        ):
            idx = batch_start + offset
            record = {"id": idx, "chars": list(sentences[idx]), "H": values}
            records.append(json.dumps(record, ensure_ascii=False))
    if total_multi:
        log.warning("%d characters expanded to multiple tokens", total_multi)
    if total_missing:
        log.warning("%d characters had no encoding and used the unknown token", total_missing)
    Path(config.out).write_text("\n".join(records) + "\n", encoding="utf-8")
    return Path(config.out)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lm-entropy-export",
        description="export per-character next-token entropy traces from a causal LM",
    )
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help="model id or local checkpoint directory")
    parser.add_argument("--corpus", required=True, type=Path,
                        help="UTF-8 corpus, one unsegmented sentence per line")
    parser.add_argument("--out", required=True, type=Path, help="trace file to write")
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--device", default=None, help="cpu / cuda (default: auto)")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        out = export_traces(
            ExportConfig(
                corpus=args.corpus,
                out=args.out,
                model=args.model,
                batch_size=args.batch_size,
                device=args.device,
            )
        )
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"lm-entropy-export: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
