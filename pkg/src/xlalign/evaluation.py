"""Top-1 cosine nearest-neighbor alignment accuracy over sampled word pairs.

Weak alignment searches a word's translation only among other-language
candidates; strong alignment adds the word's own language (minus the query
itself) to the search space and is therefore never easier. The search space is
restricted to the sampled pairs' vectors. Ties on the maximum similarity count
as misses.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .corpus import WordPair, WordPairSet
from .embx import SIDE_SRC, SIDE_TGT, EmbeddingSet
from .errors import EmptyPairSet, MissingVectors, RangeError, ZeroVector

DIRECTION_SRC_TGT = "src-tgt"
DIRECTION_TGT_SRC = "tgt-src"
MODE_WEAK = "weak"
MODE_STRONG = "strong"


@dataclass
class EvalConfig:
    n_sample: int = 1000
    seed: int = 0
    direction: str = DIRECTION_SRC_TGT
    mode: str = MODE_WEAK
    layer: int = 0

    def __post_init__(self) -> None:
        if self.n_sample < 1:
            raise RangeError("n_sample must be >= 1")
        if self.direction not in (DIRECTION_SRC_TGT, DIRECTION_TGT_SRC):
            raise RangeError(f"unknown direction {self.direction!r}")
        if self.mode not in (MODE_WEAK, MODE_STRONG):
            raise RangeError(f"unknown mode {self.mode!r}")
        if self.layer < 0:
            raise RangeError("layer must be >= 0")


@dataclass
class AlignmentScore:
    accuracy: float
    n_evaluated: int
    mode: str
    direction: str
    layer: int


def sample_pairs(pairs: WordPairSet, n: int, seed: int) -> WordPairSet:
    """Sample min(n, |pairs|) pairs uniformly without replacement.

    Deterministic for a fixed seed; sampled pairs keep their original ids and
    are returned in ascending pair_id order.
    """
    if n < 1:
        raise RangeError("sample size must be >= 1")
    if len(pairs) == 0:
        raise EmptyPairSet()
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    take = min(n, len(pairs))
    chosen = sorted(rng.choice(len(pairs), size=take, replace=False).tolist())
    return WordPairSet([pairs.pairs[k] for k in chosen], provenance=pairs.provenance)


def _unit_rows(m: np.ndarray, pair_list: list[WordPair], side: str) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVector(pair_list[int(zero[0])].pair_id, side)
    return m / norms[:, None]


def gather_matrices(
    embeddings: EmbeddingSet, sample: WordPairSet, layer: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stack the sampled pairs' (src, tgt) vectors at one layer as float64 unit rows."""
    if len(sample) == 0:
        raise EmptyPairSet()
    if not 0 <= layer < embeddings.layer_count:
        raise RangeError(f"layer {layer} outside [0, {embeddings.layer_count})")
    src = np.empty((len(sample), embeddings.dim), dtype=np.float64)
    tgt = np.empty_like(src)
    for row, pair in enumerate(sample):
        try:
            src[row] = embeddings.get(pair.pair_id, SIDE_SRC, layer)
            tgt[row] = embeddings.get(pair.pair_id, SIDE_TGT, layer)
        except KeyError:
            raise MissingVectors(pair.pair_id) from None
    return (
        _unit_rows(src, sample.pairs, "src"),
        _unit_rows(tgt, sample.pairs, "tgt"),
    )


def nn_hits(queries: np.ndarray, translations: np.ndarray, mode: str) -> np.ndarray:
    """Boolean hit per query: its paired translation is the unique top-1 match.

    ``queries`` and ``translations`` are row-aligned unit matrices (row i of
    one translates row i of the other). Weak mode searches translations only;
    strong mode adds the query-language rows minus the query itself.
    """
    cross = queries @ translations.T
    paired = np.diag(cross).copy()
    if mode == MODE_WEAK:
        scores = cross
    elif mode == MODE_STRONG:
        own = queries @ queries.T
        np.fill_diagonal(own, -np.inf)  # the query itself is never a candidate
        scores = np.concatenate([cross, own], axis=1)
    else:
        raise RangeError(f"unknown mode {mode!r}")
    best = scores.max(axis=1)
    n_best = (scores == best[:, None]).sum(axis=1)
    return (paired == best) & (n_best == 1)


def eval_alignment(
    embeddings: EmbeddingSet, sample: WordPairSet, cfg: EvalConfig
) -> AlignmentScore:
    """Top-1 accuracy of cosine nearest-neighbor retrieval over the sample."""
    src_u, tgt_u = gather_matrices(embeddings, sample, cfg.layer)
    if cfg.direction == DIRECTION_SRC_TGT:
        hits = nn_hits(src_u, tgt_u, cfg.mode)
    else:
        hits = nn_hits(tgt_u, src_u, cfg.mode)
    return AlignmentScore(
        accuracy=float(hits.sum()) / len(sample),
        n_evaluated=len(sample),
        mode=cfg.mode,
        direction=cfg.direction,
        layer=cfg.layer,
    )


def eval_by_layer(
    embeddings: EmbeddingSet, sample: WordPairSet, cfg: EvalConfig
) -> list[AlignmentScore]:
    """Evaluate every layer 0..L-1 with the same sample."""
    return [
        eval_alignment(embeddings, sample, replace(cfg, layer=layer))
        for layer in range(embeddings.layer_count)
    ]
