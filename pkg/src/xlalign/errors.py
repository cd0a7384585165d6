"""Exception hierarchy shared by all xlalign modules.

Every error raised on bad input derives from :class:`XlalignError`, so callers
(and the CLI) can distinguish input problems from genuine bugs.
"""

from __future__ import annotations


class XlalignError(Exception):
    """Base class for all input/validation errors raised by this package."""


# --- file loading ---------------------------------------------------------


class LineCountMismatch(XlalignError):
    def __init__(self, n_src: int, n_tgt: int, what: str = "files"):
        self.n_src = n_src
        self.n_tgt = n_tgt
        super().__init__(f"line counts differ between {what}: {n_src} vs {n_tgt}")


class EmptySentence(XlalignError):
    def __init__(self, line_no: int, path: str = ""):
        self.line_no = line_no
        where = f" in {path}" if path else ""
        super().__init__(f"empty sentence at line {line_no}{where}")


class InvalidUtf8(XlalignError):
    def __init__(self, line_no: int, path: str = ""):
        self.line_no = line_no
        where = f" in {path}" if path else ""
        super().__init__(f"invalid UTF-8 at line {line_no}{where}")


class MalformedLine(XlalignError):
    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        extra = f": {detail}" if detail else ""
        super().__init__(f"malformed line {line_no}{extra}")


class MalformedLink(XlalignError):
    def __init__(self, line_no: int, token: str):
        self.line_no = line_no
        self.token = token
        super().__init__(f"malformed alignment link {token!r} at line {line_no}")


class IndexOutOfRange(XlalignError):
    """A word index points outside its sentence (also used by symmetrization)."""

    def __init__(self, line_no: int, link: tuple[int, int]):
        self.line_no = line_no
        self.link = link
        super().__init__(f"alignment link {link} out of range at line {line_no}")


# --- word-pair sets -------------------------------------------------------


class DuplicatePairId(XlalignError):
    def __init__(self, pair_id: int):
        self.pair_id = pair_id
        super().__init__(f"duplicate pair_id {pair_id}")


class InvariantViolation(XlalignError):
    def __init__(self, detail: str, row: int | None = None):
        self.row = row
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"{detail}{where}")


class LanguageMismatch(XlalignError):
    def __init__(self, expected: str, got: str):
        self.expected = expected
        self.got = got
        super().__init__(f"language mismatch: expected {expected!r}, got {got!r}")


# --- EMBX store -----------------------------------------------------------


class BadMagic(XlalignError):
    def __init__(self, magic: bytes):
        self.magic = magic
        super().__init__(f"not an EMBX file (magic {magic!r})")


class UnsupportedVersion(XlalignError):
    def __init__(self, version: int):
        self.version = version
        super().__init__(f"unsupported EMBX version {version}")


class Truncated(XlalignError):
    def __init__(self, offset: int):
        self.offset = offset
        super().__init__(f"file truncated at byte offset {offset}")


class NonFiniteValue(XlalignError):
    def __init__(self, pair_id: int, layer: int, index: int):
        self.pair_id = pair_id
        self.layer = layer
        self.index = index
        super().__init__(
            f"non-finite component at pair {pair_id}, layer {layer}, index {index}"
        )


class IncompleteRecord(XlalignError):
    def __init__(self, pair_id: int):
        self.pair_id = pair_id
        super().__init__(f"pair {pair_id} is missing one side")


# --- evaluation -----------------------------------------------------------


class EmptyPairSet(XlalignError):
    def __init__(self) -> None:
        super().__init__("word-pair set is empty")


class MissingVectors(XlalignError):
    def __init__(self, pair_id: int):
        self.pair_id = pair_id
        super().__init__(f"no embedding record for pair {pair_id}")


class ZeroVector(XlalignError):
    def __init__(self, pair_id: int, side: str = ""):
        self.pair_id = pair_id
        self.side = side
        at = f" ({side})" if side else ""
        super().__init__(f"zero vector for pair {pair_id}{at}")


# --- transfer metrics and run tables --------------------------------------


class ZeroDenominator(XlalignError):
    def __init__(self) -> None:
        super().__init__("source-language metric is zero; transfer score undefined")


class ZeroBaseline(XlalignError):
    def __init__(self) -> None:
        super().__init__("baseline accuracy is zero; relative variation undefined")


class RangeError(XlalignError):
    def __init__(self, detail: str, row: int | None = None, field: str = ""):
        self.row = row
        self.field = field
        where = f" (row {row}, field {field})" if row is not None else ""
        super().__init__(f"{detail}{where}")


class DuplicateKey(XlalignError):
    def __init__(self, row: int, key: tuple):
        self.row = row
        self.key = key
        super().__init__(f"duplicate run-record key {key} at row {row}")


class MissingColumn(XlalignError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing column {name!r}")


class TooFewPoints(XlalignError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"need at least 3 points, got {n}")


# --- statistics -----------------------------------------------------------


class LengthMismatch(XlalignError):
    def __init__(self, n_x: int, n_y: int):
        self.n_x = n_x
        self.n_y = n_y
        super().__init__(f"sample lengths differ: {n_x} vs {n_y}")


class DegenerateInput(XlalignError):
    def __init__(self, detail: str = "constant input; rank correlation undefined"):
        super().__init__(detail)


class TooManyDegenerateResamples(XlalignError):
    def __init__(self, resample: int):
        self.resample = resample
        super().__init__(f"resample {resample} kept drawing degenerate samples")


# --- realignment ----------------------------------------------------------


class EmptyPairList(XlalignError):
    def __init__(self) -> None:
        super().__init__("realignment batch has no translated pairs")


class LabelOutOfRange(XlalignError):
    def __init__(self, label: int, n_classes: int):
        self.label = label
        self.n_classes = n_classes
        super().__init__(f"label {label} outside [0, {n_classes})")


class AllStreamsEmpty(XlalignError):
    def __init__(self) -> None:
        super().__init__("no stream produced any item")
