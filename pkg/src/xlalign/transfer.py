"""Cross-lingual transfer scoring and run-record tables.

The transfer score is the relative difference (m_tgt - m_en) / m_en between a
task metric on the target language and on English; it lives in [-1, +inf) and
is negative exactly when the target language scores worse. The same relative
difference applied to alignment accuracies before/after fine-tuning gives the
relative variation of alignment.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import (
    DuplicateKey,
    MissingColumn,
    RangeError,
    TooFewPoints,
    ZeroBaseline,
    ZeroDenominator,
)

RUN_CSV_COLUMNS = (
    "model",
    "task",
    "language",
    "seed",
    "stage",
    "layer",
    "alignment_weak",
    "alignment_strong",
    "metric_en",
    "metric_tgt",
)

STAGE_BEFORE = "before"
STAGE_AFTER = "after"
KIND_WEAK = "weak"
KIND_STRONG = "strong"


@dataclass
class TransferScore:
    m_en: float
    m_tgt: float
    score: float


def ctl_score(m_en: float, m_tgt: float) -> TransferScore:
    """Relative difference (m_tgt - m_en) / m_en; metrics must be in [0, 1]."""
    if m_en == 0.0:
        raise ZeroDenominator()
    if not 0.0 < m_en <= 1.0:
        raise RangeError(f"m_en={m_en} outside (0, 1]")
    if not 0.0 <= m_tgt <= 1.0:
        raise RangeError(f"m_tgt={m_tgt} outside [0, 1]")
    return TransferScore(m_en, m_tgt, (m_tgt - m_en) / m_en)


def relative_variation(before: float, after: float) -> float:
    """Relative change of an accuracy: (after - before) / before."""
    if not 0.0 <= before <= 1.0:
        raise RangeError(f"before={before} outside [0, 1]")
    if not 0.0 <= after <= 1.0:
        raise RangeError(f"after={after} outside [0, 1]")
    if before == 0.0:
        raise ZeroBaseline()
    return (after - before) / before


@dataclass(frozen=True)
class RunRecord:
    model: str
    task: str
    language: str
    seed: int
    stage: str
    layer: str
    alignment_weak: float
    alignment_strong: float
    metric_en: float
    metric_tgt: float

    @property
    def key(self) -> tuple:
        return (self.model, self.task, self.language, self.seed, self.stage, self.layer)


@dataclass
class RunTable:
    records: list[RunRecord]

    def __len__(self) -> int:
        return len(self.records)

    def select(
        self,
        task: str | None = None,
        layer: str | None = None,
        stage: str | None = None,
    ) -> list[RunRecord]:
        out = []
        for rec in self.records:
            if task is not None and rec.task != task:
                continue
            if layer is not None and rec.layer != layer:
                continue
            if stage is not None and rec.stage != stage:
                continue
            out.append(rec)
        return out


def _parse_metric(raw: str, row: int, fieldname: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise RangeError(f"non-numeric value {raw!r}", row=row, field=fieldname) from None
    if value > 1.5:  # tables often print percentages; both conventions accepted
        value /= 100.0
    if not 0.0 <= value <= 1.0:
        raise RangeError(f"value {raw!r} outside [0, 1]", row=row, field=fieldname)
    return value


def load_run_table(path: str) -> RunTable:
    """Load and validate a run-record CSV (header per RUN_CSV_COLUMNS)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in RUN_CSV_COLUMNS:
            if col not in header:
                raise MissingColumn(col)
        records: list[RunRecord] = []
        seen: set[tuple] = set()
        for row_no, row in enumerate(reader, start=1):
            if row["stage"] not in (STAGE_BEFORE, STAGE_AFTER):
                raise RangeError(
                    f"stage must be before/after, got {row['stage']!r}",
                    row=row_no,
                    field="stage",
                )
            try:
                seed = int(row["seed"])
            except ValueError:
                raise RangeError(
                    f"non-integer seed {row['seed']!r}", row=row_no, field="seed"
                ) from None
            rec = RunRecord(
                model=row["model"],
                task=row["task"],
                language=row["language"],
                seed=seed,
                stage=row["stage"],
                layer=row["layer"],
                alignment_weak=_parse_metric(row["alignment_weak"], row_no, "alignment_weak"),
                alignment_strong=_parse_metric(row["alignment_strong"], row_no, "alignment_strong"),
                metric_en=_parse_metric(row["metric_en"], row_no, "metric_en"),
                metric_tgt=_parse_metric(row["metric_tgt"], row_no, "metric_tgt"),
            )
            if rec.key in seen:
                raise DuplicateKey(row_no, rec.key)
            seen.add(rec.key)
            records.append(rec)
    return RunTable(records)


def correlation_dataset(
    table: RunTable, task: str, layer: str, stage: str, kind: str
) -> tuple[list[float], list[float]]:
    """Paired (alignment accuracy, transfer score) samples for one selector.

    One point per matching record, ordered by (model, language, seed).
    """
    if kind not in (KIND_WEAK, KIND_STRONG):
        raise RangeError(f"kind must be weak/strong, got {kind!r}")
    matching = table.select(task=task, layer=layer, stage=stage)
    if len(matching) < 3:
        raise TooFewPoints(len(matching))
    matching.sort(key=lambda r: (r.model, r.language, r.seed))
    xs, ys = [], []
    for rec in matching:
        xs.append(rec.alignment_weak if kind == KIND_WEAK else rec.alignment_strong)
        ys.append(ctl_score(rec.metric_en, rec.metric_tgt).score)
    return xs, ys
