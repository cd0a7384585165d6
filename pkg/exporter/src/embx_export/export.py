"""Run a pretrained encoder over paired sentences and pool per-layer word
vectors into an EMBX file.

Words are the whitespace tokens of the corpus; each word's vector at every
layer (layer 0 is the embedding layer) is the mean of its subword vectors,
located through the fast tokenizer's character offsets. Pairs whose words
cannot be mapped (unknown spans, or truncated away by the maximum sequence
length) are dropped and reported, never guessed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
import torch

from .formats import (
    SIDE_SRC,
    SIDE_TGT,
    read_pairs_tsv,
    read_tokenized_corpus,
    write_embx,
)

POOL_MEAN = "mean"
POOL_FIRST = "first"


class ModelLoadError(RuntimeError):
    pass


class TokenizerSpanMismatch(RuntimeError):
    def __init__(self, pair_id: int, detail: str):
        self.pair_id = pair_id
        super().__init__(f"pair {pair_id}: {detail}")


@dataclass
class ExportJob:
    model: str
    pairs_tsv: str
    src_corpus: str
    tgt_corpus: str
    out_path: str
    max_seq_len: int = 96
    pooling: str = POOL_MEAN
    batch_size: int = 8
    src_lang: str = ""
    tgt_lang: str = ""
    device: str = "cpu"

    def __post_init__(self) -> None:
        if self.pooling not in (POOL_MEAN, POOL_FIRST):
            raise ValueError(f"unknown pooling {self.pooling!r}")
        if self.max_seq_len < 4:
            raise ValueError("max_seq_len must be >= 4")


@dataclass
class ExportReport:
    exported_pairs: int
    layer_count: int
    dim: int
    dropped: list[tuple[int, str]] = field(default_factory=list)

    @property
    def dropped_count(self) -> int:
        return len(self.dropped)


def _word_spans(tokens: list[str]) -> list[tuple[int, int]]:
    """Character spans of each whitespace token in ' '.join(tokens)."""
    spans = []
    offset = 0
    for tok in tokens:
        spans.append((offset, offset + len(tok)))
        offset += len(tok) + 1
    return spans


def _load_encoder(name_or_path: str, device: str):
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(name_or_path)
        model = AutoModel.from_pretrained(name_or_path)
    except Exception as exc:
        raise ModelLoadError(f"cannot load {name_or_path!r}: {exc}") from exc
    if not getattr(tokenizer, "is_fast", False):
        raise ModelLoadError(
            f"{name_or_path!r} has no fast tokenizer; character offsets are required"
        )
    model.eval()
    model.to(device)
    return tokenizer, model


@torch.no_grad()
def _sentence_word_vectors(
    tokenizer,
    model,
    sentences: dict[int, list[str]],
    wanted: dict[int, set[int]],
    max_seq_len: int,
    pooling: str,
    batch_size: int,
    device: str,
) -> dict[tuple[int, int], np.ndarray]:
    """(sentence_index, word_index) -> (L, D) float32 or absent when unmappable."""
    out: dict[tuple[int, int], np.ndarray] = {}
    order = sorted(sentences)
    for start in range(0, len(order), batch_size):
        chunk = order[start : start + batch_size]
        texts = [" ".join(sentences[idx]) for idx in chunk]
        enc = tokenizer(
            texts,
            return_offsets_mapping=True,
            return_special_tokens_mask=True,
            truncation=True,
            max_length=max_seq_len,
            padding=True,
            return_tensors="pt",
        )
        offsets = enc.pop("offset_mapping").numpy()
        special = enc.pop("special_tokens_mask").numpy().astype(bool)
        attention = enc["attention_mask"].numpy().astype(bool)
        enc = {k: v.to(device) for k, v in enc.items()}
        result = model(**enc, output_hidden_states=True)
        # (L+1, B, T, H): hidden_states[0] is the embedding layer
        hidden = torch.stack(result.hidden_states, dim=0).cpu().numpy()
        for row, sent_idx in enumerate(chunk):
            usable = ~special[row] & attention[row]
            spans = _word_spans(sentences[sent_idx])
            for word_idx in wanted[sent_idx]:
                w_start, w_end = spans[word_idx]
                positions = [
                    t
                    for t in np.flatnonzero(usable)
                    if min(offsets[row, t, 1], w_end)
                    > max(offsets[row, t, 0], w_start)
                ]
                if not positions:
                    continue  # truncated away or unmappable: caller drops the pair
                block = hidden[:, row, positions, :]
                if pooling == POOL_MEAN:
                    vec = block.mean(axis=1)
                else:
                    vec = block[:, 0, :]
                out[(sent_idx, word_idx)] = vec.astype(np.float32)
    return out


def export(job: ExportJob) -> ExportReport:
    """Produce one src and one tgt EMBX record per mappable pair."""
    pairs = read_pairs_tsv(job.pairs_tsv)
    src_sentences = read_tokenized_corpus(job.src_corpus)
    tgt_sentences = read_tokenized_corpus(job.tgt_corpus)

    wanted_src: dict[int, set[int]] = defaultdict(set)
    wanted_tgt: dict[int, set[int]] = defaultdict(set)
    for p in pairs:
        if p.sentence_index >= len(src_sentences) or p.sentence_index >= len(
            tgt_sentences
        ):
            raise ValueError(f"pair {p.pair_id}: sentence {p.sentence_index} not in corpus")
        wanted_src[p.sentence_index].add(p.src_word_index)
        wanted_tgt[p.sentence_index].add(p.tgt_word_index)

    tokenizer, model = _load_encoder(job.model, job.device)
    layer_count = model.config.num_hidden_layers + 1
    dim = model.config.hidden_size

    src_vecs = _sentence_word_vectors(
        tokenizer,
        model,
        {i: src_sentences[i] for i in wanted_src},
        wanted_src,
        job.max_seq_len,
        job.pooling,
        job.batch_size,
        job.device,
    )
    tgt_vecs = _sentence_word_vectors(
        tokenizer,
        model,
        {i: tgt_sentences[i] for i in wanted_tgt},
        wanted_tgt,
        job.max_seq_len,
        job.pooling,
        job.batch_size,
        job.device,
    )

    records: dict[tuple[int, int], np.ndarray] = {}
    dropped: list[tuple[int, str]] = []
    for p in pairs:
        src = src_vecs.get((p.sentence_index, p.src_word_index))
        tgt = tgt_vecs.get((p.sentence_index, p.tgt_word_index))
        if src is None:
            dropped.append((p.pair_id, "source word outside the encoded window"))
            continue
        if tgt is None:
            dropped.append((p.pair_id, "target word outside the encoded window"))
            continue
        records[(p.pair_id, SIDE_SRC)] = src
        records[(p.pair_id, SIDE_TGT)] = tgt

    write_embx(
        job.out_path,
        layer_count,
        dim,
        records,
        src_lang=job.src_lang,
        tgt_lang=job.tgt_lang,
        model_name=job.model.rstrip("/").rsplit("/", 1)[-1],
    )
    return ExportReport(
        exported_pairs=len(records) // 2,
        layer_count=layer_count,
        dim=dim,
        dropped=dropped,
    )
