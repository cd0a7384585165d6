"""Shared fixtures: tiny corpora, synthetic run tables, and a CLI runner."""

from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from xlalign import SIDE_SRC, SIDE_TGT, EmbeddingSet

RUN_CSV_HEADER = (
    "model,task,language,seed,stage,layer,"
    "alignment_weak,alignment_strong,metric_en,metric_tgt"
)


def run_cli(*args: str, cwd=None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "xlalign", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def make_run_csv_text() -> str:
    """4 models x 5 languages x 5 seeds x 2 stages; alignment correlates with
    transfer by construction (100 rows per stage selector)."""
    rng = np.random.default_rng(1234)
    lines = [RUN_CSV_HEADER]
    for mi, model in enumerate(["distil", "base", "medium", "large"]):
        for li, lang in enumerate(["ar", "es", "fr", "ru", "zh"]):
            for seed in range(5):
                for stage in ("before", "after"):
                    strong = min(
                        0.95,
                        0.08
                        + 0.16 * mi
                        + 0.05 * li
                        + (0.08 if stage == "after" else 0.0)
                        + 0.05 * rng.random(),
                    )
                    weak = min(0.99, strong + 0.08 + 0.05 * rng.random())
                    m_en = 0.90 + 0.01 * mi
                    m_tgt = min(
                        1.0, m_en * (0.30 + 0.65 * strong + 0.04 * rng.random())
                    )
                    lines.append(
                        f"{model},pos,{lang},{seed},{stage},last,"
                        f"{weak:.6f},{strong:.6f},{m_en:.6f},{m_tgt:.6f}"
                    )
    return "\n".join(lines) + "\n"


@pytest.fixture
def run_csv(tmp_path):
    path = tmp_path / "runs.csv"
    path.write_text(make_run_csv_text(), encoding="utf-8")
    return str(path)


def random_embedding_set(
    n_pairs: int, layers: int, dim: int, seed: int
) -> EmbeddingSet:
    rng = np.random.default_rng(seed)
    es = EmbeddingSet(layers, dim, "en", "fr", "random")
    for pid in range(n_pairs):
        es.put(pid, SIDE_SRC, rng.normal(size=(layers, dim)))
        es.put(pid, SIDE_TGT, rng.normal(size=(layers, dim)))
    return es


@pytest.fixture
def fixture_corpus_files(tmp_path):
    """The three-pair golden corpus plus its lexicon."""
    src = tmp_path / "en.txt"
    tgt = tmp_path / "fr.txt"
    lex = tmp_path / "lex.txt"
    src.write_text("the cat sleeps\n", encoding="utf-8")
    tgt.write_text("le chat dort\n", encoding="utf-8")
    lex.write_text("the le\ncat chat\nsleeps dort\n", encoding="utf-8")
    return str(src), str(tgt), str(lex)
