"""Readers and the EMBX writer for the interchange formats this tool speaks.

These are standalone implementations of the documented layouts (pair TSV,
tokenized parallel text, EMBX v1), so the exporter works against the formats
rather than against any particular library that also implements them.
"""

from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass

import numpy as np

PAIR_TSV_HEADER = "pair_id\tsent\tsrc_idx\ttgt_idx\tsrc_word\ttgt_word"
EMBX_MAGIC = b"EMBX"
EMBX_VERSION = 1
SIDE_SRC = 0
SIDE_TGT = 1


@dataclass(frozen=True)
class PairRow:
    pair_id: int
    sentence_index: int
    src_word_index: int
    tgt_word_index: int
    src_word: str
    tgt_word: str


def read_pairs_tsv(path: str) -> list[PairRow]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != PAIR_TSV_HEADER:
        raise ValueError(f"{path}: missing pair TSV header")
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 6:
            raise ValueError(f"{path}:{line_no}: expected 6 fields")
        rows.append(
            PairRow(
                int(fields[0]), int(fields[1]), int(fields[2]), int(fields[3]),
                fields[4], fields[5],
            )
        )
    return rows


def read_tokenized_corpus(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        return [line.split() for line in fh.read().splitlines()]


def _pack_string(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<H", len(raw)) + raw


def write_embx(
    path: str,
    layer_count: int,
    dim: int,
    records: dict[tuple[int, int], np.ndarray],
    src_lang: str = "",
    tgt_lang: str = "",
    model_name: str = "",
) -> None:
    """Serialize records ((pair_id, side) -> float32 (L, D)) in EMBX v1 layout."""
    parts = [
        EMBX_MAGIC,
        struct.pack("<IIII", EMBX_VERSION, layer_count, dim, len(records)),
        _pack_string(src_lang),
        _pack_string(tgt_lang),
        _pack_string(model_name),
    ]
    for pair_id, side in sorted(records):
        payload = np.ascontiguousarray(records[(pair_id, side)], dtype="<f4")
        if payload.shape != (layer_count, dim):
            raise ValueError(f"record ({pair_id}, {side}) has shape {payload.shape}")
        if not np.isfinite(payload).all():
            raise ValueError(f"record ({pair_id}, {side}) has non-finite values")
        parts.append(struct.pack("<IB3x", pair_id, side))
        parts.append(payload.tobytes())
    blob = b"".join(parts)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
