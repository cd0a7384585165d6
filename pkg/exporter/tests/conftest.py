"""Builds a tiny deterministic encoder on disk so tests run fully offline.

Set EMBX_EXPORT_TEST_MODEL to a model id/path to run the suite against a real
encoder instead.
"""

from __future__ import annotations

import os

import pytest
import torch

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "cat", "sle", "##eps", "dog", "runs",
    "le", "chat", "dort", "chien", "court", "a", "##b",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> str:
    override = os.environ.get("EMBX_EXPORT_TEST_MODEL")
    if override:
        return override
    from transformers import BertConfig, BertModel, BertTokenizerFast

    path = tmp_path_factory.mktemp("tiny-encoder")
    vocab_file = path / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(str(vocab_file), do_lower_case=True)
    tokenizer.save_pretrained(str(path))
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(0)
    model = BertModel(config)
    model.save_pretrained(str(path))
    return str(path)


@pytest.fixture
def fixture_files(tmp_path):
    """Golden three-pair fixture: 'sleeps' splits into two subwords."""
    src = tmp_path / "corpus.en"
    tgt = tmp_path / "corpus.fr"
    pairs = tmp_path / "pairs.tsv"
    src.write_text("the cat sleeps\n", encoding="utf-8")
    tgt.write_text("le chat dort\n", encoding="utf-8")
    pairs.write_text(
        "pair_id\tsent\tsrc_idx\ttgt_idx\tsrc_word\ttgt_word\n"
        "0\t0\t0\t0\tthe\tle\n"
        "1\t0\t1\t1\tcat\tchat\n"
        "2\t0\t2\t2\tsleeps\tdort\n",
        encoding="utf-8",
    )
    return str(src), str(tgt), str(pairs)
