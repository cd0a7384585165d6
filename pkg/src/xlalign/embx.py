"""EMBX: the binary interchange format for per-layer contextualized word
vectors, one src and one tgt record per word pair.

Layout (integers little-endian):
  magic ``EMBX`` | version u32=1 | L u32 | D u32 | N u32
  | 3 x (u16 length + UTF-8 bytes) for src_lang, tgt_lang, model_name
  | N records: pair_id u32, side u8 (0=src, 1=tgt), 3 zero bytes,
    payload L*D float32.
Records are sorted ascending by (pair_id, side). Layer 0 is the embedding
layer; layer L-1 is the last transformer layer.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .corpus import WordPairSet, atomic_write_bytes
from .errors import (
    BadMagic,
    IncompleteRecord,
    InvariantViolation,
    NonFiniteValue,
    Truncated,
    UnsupportedVersion,
)

MAGIC = b"EMBX"
VERSION = 1
SIDE_SRC = 0
SIDE_TGT = 1
_SIDE_NAMES = {SIDE_SRC: "src", SIDE_TGT: "tgt"}


@dataclass
class EmbxHeader:
    layer_count: int
    dim: int
    record_count: int
    src_lang: str
    tgt_lang: str
    model_name: str


@dataclass
class EmbeddingSet:
    """In-memory EMBX content: (pair_id, side) -> float32 array of shape (L, D)."""

    layer_count: int
    dim: int
    src_lang: str = ""
    tgt_lang: str = ""
    model_name: str = ""
    vectors: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)

    @property
    def header(self) -> EmbxHeader:
        return EmbxHeader(
            self.layer_count,
            self.dim,
            len(self.vectors),
            self.src_lang,
            self.tgt_lang,
            self.model_name,
        )

    def pair_ids(self) -> list[int]:
        return sorted({pid for pid, _ in self.vectors})

    def put(self, pair_id: int, side: int, payload: np.ndarray) -> None:
        arr = np.asarray(payload, dtype=np.float32).reshape(self.layer_count, self.dim)
        self.vectors[(pair_id, side)] = arr

    def get(self, pair_id: int, side: int, layer: int) -> np.ndarray:
        return self.vectors[(pair_id, side)][layer]

    def validate(self) -> None:
        if self.layer_count < 1 or self.dim < 1:
            raise InvariantViolation("layer_count and dim must be >= 1")
        by_pair: dict[int, set[int]] = {}
        for (pid, side), arr in self.vectors.items():
            if side not in _SIDE_NAMES:
                raise InvariantViolation(f"bad side {side} for pair {pid}")
            if arr.shape != (self.layer_count, self.dim):
                raise InvariantViolation(
                    f"pair {pid} payload shape {arr.shape}, "
                    f"expected {(self.layer_count, self.dim)}"
                )
            finite = np.isfinite(arr)
            if not finite.all():
                layer, index = np.argwhere(~finite)[0]
                raise NonFiniteValue(pid, int(layer), int(index))
            by_pair.setdefault(pid, set()).add(side)
        for pid, sides in sorted(by_pair.items()):
            if sides != {SIDE_SRC, SIDE_TGT}:
                raise IncompleteRecord(pid)


@dataclass
class ValidationReport:
    """Ids present in the pair set but not the embedding set, and vice versa."""

    missing: list[int]
    extra: list[int]

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra


def _pack_string(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise InvariantViolation("header string longer than 65535 bytes")
    return struct.pack("<H", len(raw)) + raw


def write_embx(embeddings: EmbeddingSet, path: str) -> None:
    """Serialize an EmbeddingSet to the bit-exact EMBX layout."""
    embeddings.validate()
    parts = [
        MAGIC,
        struct.pack(
            "<IIII",
            VERSION,
            embeddings.layer_count,
            embeddings.dim,
            len(embeddings.vectors),
        ),
        _pack_string(embeddings.src_lang),
        _pack_string(embeddings.tgt_lang),
        _pack_string(embeddings.model_name),
    ]
    for (pid, side) in sorted(embeddings.vectors):
        payload = embeddings.vectors[(pid, side)]
        parts.append(struct.pack("<IB3x", pid, side))
        parts.append(np.ascontiguousarray(payload, dtype="<f4").tobytes())
    atomic_write_bytes(path, b"".join(parts))


def read_embx(path: str) -> EmbeddingSet:
    """Parse an EMBX file, re-validating every invariant."""
    with open(path, "rb") as fh:
        data = fh.read()
    offset = 0

    def take(n: int) -> bytes:
        nonlocal offset
        if offset + n > len(data):
            raise Truncated(offset)
        chunk = data[offset : offset + n]
        offset += n
        return chunk

    magic = take(4)
    if magic != MAGIC:
        raise BadMagic(magic)
    version, layer_count, dim, n_records = struct.unpack("<IIII", take(16))
    if version != VERSION:
        raise UnsupportedVersion(version)

    def take_string() -> str:
        (length,) = struct.unpack("<H", take(2))
        return take(length).decode("utf-8")

    src_lang = take_string()
    tgt_lang = take_string()
    model_name = take_string()

    out = EmbeddingSet(layer_count, dim, src_lang, tgt_lang, model_name)
    payload_len = layer_count * dim * 4
    for _ in range(n_records):
        pid, side = struct.unpack("<IB3x", take(8))
        payload = np.frombuffer(take(payload_len), dtype="<f4").reshape(
            layer_count, dim
        )
        if (pid, side) in out.vectors:
            raise InvariantViolation(f"duplicate record ({pid}, {side})")
        out.vectors[(pid, side)] = payload.copy()
    if offset != len(data):
        raise InvariantViolation(f"{len(data) - offset} trailing bytes")
    out.validate()
    return out


def validate_against(embeddings: EmbeddingSet, pairs: WordPairSet) -> ValidationReport:
    """Report pair_ids missing from the embedding set and extra ids not in pairs."""
    have = set(embeddings.pair_ids())
    want = set(pairs.pair_ids())
    return ValidationReport(
        missing=sorted(want - have),
        extra=sorted(have - want),
    )
