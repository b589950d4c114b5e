"""Tiny deterministic causal LM saved in pretrained-directory layout."""

from pathlib import Path


def build_tiny_model(model_dir: Path, chars: list[str], zero_logits: bool = False) -> int:
    """Create a 2-layer GPT-2 with a character vocabulary; returns vocab size."""
    import torch
    from transformers import BertTokenizer, GPT2Config, GPT2LMHeadModel

    model_dir = Path(model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", *chars]
    vocab_file = model_dir / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(vocab_file))
    tokenizer.save_pretrained(model_dir)

    torch.manual_seed(0)
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=512,
        n_embd=32,
        n_layer=2,
        n_head=2,
    )
    model = GPT2LMHeadModel(config)
    if zero_logits:
        # tied embeddings: zeroing wte makes every logit zero -> uniform
        with torch.no_grad():
            model.transformer.wte.weight.zero_()
    model.save_pretrained(model_dir)
    return len(vocab)
