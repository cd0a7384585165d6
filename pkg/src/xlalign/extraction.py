"""Word-pair extraction from bilingual dictionaries or alignment links, and
grow-diag-final-and symmetrization of directional alignments.

Only unambiguous pairs survive: a dictionary pair is kept when the source word
occurs once, exactly one target token is dictionary-compatible, and no other
source word claims the same target position. Link-based pairs are filtered to
one-to-one alignments. Pairs with identical surface forms are always dropped.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import AlignmentLinkSet, BilingualLexicon, ParallelCorpus, WordPair, WordPairSet
from .errors import IndexOutOfRange, LanguageMismatch, LineCountMismatch, RangeError

# 8-neighborhood in fixed scan order (the "-diag" variant includes diagonals)
_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass
class ExtractionOptions:
    lowercase: bool = False
    max_pairs_per_sentence: int | None = None

    def __post_init__(self) -> None:
        if self.max_pairs_per_sentence is not None and self.max_pairs_per_sentence < 1:
            raise RangeError("max_pairs_per_sentence must be >= 1")


def extract_pairs_lexicon(
    corpus: ParallelCorpus,
    lexicon: BilingualLexicon,
    opts: ExtractionOptions | None = None,
) -> WordPairSet:
    """Extract forced-choice dictionary pairs from translated sentences.

    A pair (source token at i, target token at j) is emitted iff the source
    token occurs exactly once in its sentence, exactly one target token is in
    its dictionary entry (forcing j), that target token occurs exactly once,
    the surface forms differ, and no other source word forces the same j.
    """
    opts = opts or ExtractionOptions()
    if corpus.src_lang and lexicon.src_lang and corpus.src_lang != lexicon.src_lang:
        raise LanguageMismatch(corpus.src_lang, lexicon.src_lang)
    if corpus.tgt_lang and lexicon.tgt_lang and corpus.tgt_lang != lexicon.tgt_lang:
        raise LanguageMismatch(corpus.tgt_lang, lexicon.tgt_lang)

    pairs: list[WordPair] = []
    for sent_idx, (src_raw, tgt_raw) in enumerate(corpus.sentence_pairs):
        src = [w.lower() for w in src_raw] if opts.lowercase else list(src_raw)
        tgt = [w.lower() for w in tgt_raw] if opts.lowercase else list(tgt_raw)
        src_counts = Counter(src)
        tgt_counts = Counter(tgt)

        candidates: list[tuple[int, int, str, str]] = []
        for i, s in enumerate(src):
            if src_counts[s] != 1:
                continue
            senses = lexicon.translations(s)
            if not senses:
                continue
            compatible = [j for j, t in enumerate(tgt) if t in senses]
            if len(compatible) != 1:
                continue
            j = compatible[0]
            t = tgt[j]
            if tgt_counts[t] != 1 or s == t:
                continue
            candidates.append((i, j, s, t))

        # two source words can force the same target position; both are ambiguous
        claimed = Counter(j for _, j, _, _ in candidates)
        kept = [c for c in candidates if claimed[c[1]] == 1]
        if opts.max_pairs_per_sentence is not None:
            kept = kept[: opts.max_pairs_per_sentence]
        for i, j, s, t in kept:
            pairs.append(WordPair(len(pairs), sent_idx, i, j, s, t))
    return WordPairSet(pairs, provenance="lexicon")


def pairs_from_links(
    corpus: ParallelCorpus, links: list[AlignmentLinkSet]
) -> WordPairSet:
    """Turn per-sentence alignment links into pairs, keeping only one-to-one
    links and discarding pairs with identical surface forms."""
    if len(links) != len(corpus):
        raise LineCountMismatch(len(links), len(corpus), what="links and corpus")
    pairs: list[WordPair] = []
    for sent_idx, (sent_links, (src_toks, tgt_toks)) in enumerate(
        zip(links, corpus.sentence_pairs)
    ):
        src_deg = Counter(i for i, _ in sent_links)
        tgt_deg = Counter(j for _, j in sent_links)
        for i, j in sorted(sent_links):
            if i >= len(src_toks) or j >= len(tgt_toks):
                raise IndexOutOfRange(sent_idx + 1, (i, j))
            if src_deg[i] != 1 or tgt_deg[j] != 1:
                continue
            if src_toks[i] == tgt_toks[j]:
                continue
            pairs.append(WordPair(len(pairs), sent_idx, i, j, src_toks[i], tgt_toks[j]))
    return WordPairSet(pairs, provenance="aligner")


def grow_diag_final_and(
    forward: AlignmentLinkSet,
    backward: AlignmentLinkSet,
    src_len: int,
    tgt_len: int,
) -> AlignmentLinkSet:
    """Symmetrize two directional alignments with grow-diag-final-and.

    Starts from the intersection, grows with union links in the 8-neighborhood
    of existing links while either endpoint is unaligned (lexicographic scan to
    fixpoint), then adds forward-only and backward-only links whose endpoints
    are both unaligned. Fully deterministic given the inputs.
    """
    for name, link_set in (("forward", forward), ("backward", backward)):
        for i, j in link_set:
            if not (0 <= i < src_len and 0 <= j < tgt_len):
                raise IndexOutOfRange(0, (i, j))

    union = forward | backward
    alignment = set(forward & backward)
    aligned_src = {i for i, _ in alignment}
    aligned_tgt = {j for _, j in alignment}

    changed = True
    while changed:
        changed = False
        for i, j in sorted(alignment):
            for di, dj in _NEIGHBORS:
                cand = (i + di, j + dj)
                if cand not in union or cand in alignment:
                    continue
                if cand[0] in aligned_src and cand[1] in aligned_tgt:
                    continue
                alignment.add(cand)
                aligned_src.add(cand[0])
                aligned_tgt.add(cand[1])
                changed = True

    for directional in (forward, backward):
        for i, j in sorted(directional):
            if (i, j) in alignment:
                continue
            if i in aligned_src or j in aligned_tgt:
                continue
            alignment.add((i, j))
            aligned_src.add(i)
            aligned_tgt.add(j)

    return alignment
