"""Loaders and writers for parallel corpora, bilingual lexicons, Pharaoh
alignment files, and word-pair TSV files.

All loaders are pure functions of file contents and return immutable-by-
convention objects that can be shared freely. Corpora must arrive
pre-tokenized: one sentence per line, tokens separated by ASCII whitespace.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field

from .errors import (
    DuplicatePairId,
    EmptySentence,
    IndexOutOfRange,
    InvalidUtf8,
    InvariantViolation,
    LineCountMismatch,
    MalformedLine,
    MalformedLink,
)

_ASCII_WS = re.compile(r"[ \t\r\n\f\v]+")
_LINK_RE = re.compile(r"^(\d+)-(\d+)$")

PAIR_TSV_HEADER = "pair_id\tsent\tsrc_idx\ttgt_idx\tsrc_word\ttgt_word"

#: Per-sentence alignment: a set of (source word index, target word index).
AlignmentLinkSet = set[tuple[int, int]]


def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write via a sibling temp file and rename, so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_lines(path: str) -> list[str]:
    """Decode a file line by line so UTF-8 errors carry a line number."""
    with open(path, "rb") as fh:
        raw = fh.read()
    chunks = raw.split(b"\n")
    if chunks and chunks[-1] == b"":
        chunks.pop()  # trailing newline does not open a new line
    lines = []
    for i, chunk in enumerate(chunks, start=1):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError:
            raise InvalidUtf8(i, path) from None
    return lines


def _tokenize(line: str) -> list[str]:
    return [tok for tok in _ASCII_WS.split(line) if tok]


@dataclass
class ParallelCorpus:
    """Sentence-aligned tokenized text for one language pair."""

    sentence_pairs: list[tuple[list[str], list[str]]]
    src_lang: str = ""
    tgt_lang: str = ""

    def __len__(self) -> int:
        return len(self.sentence_pairs)


@dataclass
class BilingualLexicon:
    """MUSE-style dictionary: each source word maps to a set of translations."""

    entries: dict[str, set[str]]
    src_lang: str = ""
    tgt_lang: str = ""
    lowercased: bool = False

    def translations(self, word: str) -> set[str]:
        return self.entries.get(word, set())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class WordPair:
    pair_id: int
    sentence_index: int
    src_word_index: int
    tgt_word_index: int
    src_word: str
    tgt_word: str


@dataclass
class WordPairSet:
    """Contextualized translated word pairs; the unit of evaluation and realignment.

    ``provenance`` records how the set was produced (``lexicon``, ``aligner``,
    or ``synthetic``). It is metadata: not persisted to TSV and excluded from
    equality.
    """

    pairs: list[WordPair]
    provenance: str | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def pair_ids(self) -> list[int]:
        return [p.pair_id for p in self.pairs]

    def validate(self, dense_ids: bool = True) -> None:
        """Check structural invariants.

        ``dense_ids`` requires pair_ids 0..n-1 (extraction/TSV contract);
        sampled subsets keep their original ids and only need strict order.
        """
        prev = -1
        seen: set[int] = set()
        per_sentence_src: dict[int, set[int]] = {}
        per_sentence_tgt: dict[int, set[int]] = {}
        for row, p in enumerate(self.pairs):
            if p.pair_id in seen:
                raise DuplicatePairId(p.pair_id)
            seen.add(p.pair_id)
            if p.pair_id <= prev:
                raise InvariantViolation("pair_ids not strictly increasing", row=row)
            if dense_ids and p.pair_id != prev + 1:
                raise InvariantViolation(
                    f"pair_id gap: expected {prev + 1}, got {p.pair_id}", row=row
                )
            prev = p.pair_id
            if p.sentence_index < 0 or p.src_word_index < 0 or p.tgt_word_index < 0:
                raise InvariantViolation("negative index", row=row)
            if not p.src_word or not p.tgt_word:
                raise InvariantViolation("empty word", row=row)
            if _ASCII_WS.search(p.src_word) or _ASCII_WS.search(p.tgt_word):
                raise InvariantViolation("whitespace inside word", row=row)
            if p.src_word == p.tgt_word:
                raise InvariantViolation(
                    f"identical surface forms {p.src_word!r}", row=row
                )
            src_used = per_sentence_src.setdefault(p.sentence_index, set())
            tgt_used = per_sentence_tgt.setdefault(p.sentence_index, set())
            if p.src_word_index in src_used or p.tgt_word_index in tgt_used:
                raise InvariantViolation("pair set is not one-to-one", row=row)
            src_used.add(p.src_word_index)
            tgt_used.add(p.tgt_word_index)

    def validate_against_corpus(self, corpus: ParallelCorpus) -> None:
        for row, p in enumerate(self.pairs):
            if p.sentence_index >= len(corpus):
                raise InvariantViolation("sentence index out of range", row=row)
            src_toks, tgt_toks = corpus.sentence_pairs[p.sentence_index]
            if p.src_word_index >= len(src_toks) or p.tgt_word_index >= len(tgt_toks):
                raise InvariantViolation("word index out of range", row=row)


def load_parallel_corpus(
    src_path: str, tgt_path: str, src_lang: str = "", tgt_lang: str = ""
) -> ParallelCorpus:
    """Load two line-aligned tokenized text files into a ParallelCorpus."""
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise LineCountMismatch(len(src_lines), len(tgt_lines))
    pairs: list[tuple[list[str], list[str]]] = []
    for i, (s, t) in enumerate(zip(src_lines, tgt_lines), start=1):
        src_toks = _tokenize(s)
        tgt_toks = _tokenize(t)
        if not src_toks:
            raise EmptySentence(i, src_path)
        if not tgt_toks:
            raise EmptySentence(i, tgt_path)
        pairs.append((src_toks, tgt_toks))
    return ParallelCorpus(pairs, src_lang=src_lang, tgt_lang=tgt_lang)


def load_lexicon(
    path: str, lowercase: bool = False, src_lang: str = "", tgt_lang: str = ""
) -> BilingualLexicon:
    """Load a MUSE-layout bilingual dictionary ("source target" per line)."""
    entries: dict[str, set[str]] = {}
    for i, line in enumerate(_read_lines(path), start=1):
        fields = _tokenize(line)
        if len(fields) != 2:
            raise MalformedLine(i, f"expected 2 fields, got {len(fields)}")
        src, tgt = fields
        if lowercase:
            src, tgt = src.lower(), tgt.lower()
        entries.setdefault(src, set()).add(tgt)
    return BilingualLexicon(
        entries, src_lang=src_lang, tgt_lang=tgt_lang, lowercased=lowercase
    )


def load_pharaoh(path: str, corpus: ParallelCorpus) -> list[AlignmentLinkSet]:
    """Load per-sentence "i-j" alignment links, validated against the corpus."""
    lines = _read_lines(path)
    if len(lines) != len(corpus):
        raise LineCountMismatch(len(lines), len(corpus), what="alignments and corpus")
    out: list[AlignmentLinkSet] = []
    for line_no, (line, (src_toks, tgt_toks)) in enumerate(
        zip(lines, corpus.sentence_pairs), start=1
    ):
        links: AlignmentLinkSet = set()
        for tok in _tokenize(line):
            m = _LINK_RE.match(tok)
            if not m:
                raise MalformedLink(line_no, tok)
            i, j = int(m.group(1)), int(m.group(2))
            if i >= len(src_toks) or j >= len(tgt_toks):
                raise IndexOutOfRange(line_no, (i, j))
            links.add((i, j))
        out.append(links)
    return out


def write_pairs(pairs: WordPairSet, path: str) -> None:
    """Write a valid WordPairSet as the canonical pair TSV (sorted, dense ids)."""
    pairs.validate(dense_ids=True)
    lines = [PAIR_TSV_HEADER]
    for p in pairs:
        lines.append(
            f"{p.pair_id}\t{p.sentence_index}\t{p.src_word_index}"
            f"\t{p.tgt_word_index}\t{p.src_word}\t{p.tgt_word}"
        )
    atomic_write_bytes(path, ("\n".join(lines) + "\n").encode("utf-8"))


def read_pairs(path: str) -> WordPairSet:
    """Read a pair TSV, re-validating every invariant. Inverse of write_pairs."""
    lines = _read_lines(path)
    if not lines or lines[0] != PAIR_TSV_HEADER:
        raise InvariantViolation("missing or wrong pair TSV header", row=0)
    out: list[WordPair] = []
    for row, line in enumerate(lines[1:], start=1):
        fields = line.split("\t")
        if len(fields) != 6:
            raise InvariantViolation(
                f"expected 6 tab-separated fields, got {len(fields)}", row=row
            )
        try:
            pair = WordPair(
                pair_id=int(fields[0]),
                sentence_index=int(fields[1]),
                src_word_index=int(fields[2]),
                tgt_word_index=int(fields[3]),
                src_word=fields[4],
                tgt_word=fields[5],
            )
        except ValueError:
            raise InvariantViolation("non-integer index field", row=row) from None
        out.append(pair)
    result = WordPairSet(out)
    result.validate(dense_ids=True)
    return result
