"""Exporter tests, including the acceptance check against direct hidden-state
inspection and validation through the xlalign reader."""

import subprocess
import sys

import numpy as np
import pytest
import torch

from embx_export import ExportJob, export
from embx_export.export import ModelLoadError

from xlalign import read_embx, read_pairs, validate_against


def run_export(tiny_model_dir, fixture_files, out_path, **overrides) -> object:
    src, tgt, pairs = fixture_files
    job = ExportJob(
        model=tiny_model_dir,
        pairs_tsv=pairs,
        src_corpus=src,
        tgt_corpus=tgt,
        out_path=str(out_path),
        **overrides,
    )
    return export(job)


def direct_word_vector(model_dir: str, sentence: str, word_index: int) -> np.ndarray:
    """Oracle: inspect hidden states directly and mean the word's subwords in float64."""
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_dir)
    model = AutoModel.from_pretrained(model_dir)
    model.eval()
    words = sentence.split()
    starts = []
    pos = 0
    for w in words:
        starts.append((pos, pos + len(w)))
        pos += len(w) + 1
    w_start, w_end = starts[word_index]
    enc = tokenizer(
        sentence,
        return_offsets_mapping=True,
        return_special_tokens_mask=True,
        return_tensors="pt",
    )
    offsets = enc.pop("offset_mapping")[0].tolist()
    special = enc.pop("special_tokens_mask")[0].tolist()
    with torch.no_grad():
        hidden = model(**enc, output_hidden_states=True).hidden_states
    rows = [
        t
        for t, ((s, e), is_special) in enumerate(zip(offsets, special))
        if not is_special and min(e, w_end) > max(s, w_start)
    ]
    assert rows, "oracle failed to locate the word"
    stacked = np.stack([h[0].numpy() for h in hidden])  # (L, T, H)
    return stacked[:, rows, :].astype(np.float64).mean(axis=1)


class TestExport:
    def test_all_pairs_exported_and_validated(self, tiny_model_dir, fixture_files, tmp_path):
        out = tmp_path / "vectors.embx"
        report = run_export(tiny_model_dir, fixture_files, out)
        assert report.exported_pairs == 3
        assert report.dropped == []
        embeddings = read_embx(str(out))
        assert embeddings.layer_count == report.layer_count
        pairs = read_pairs(fixture_files[2])
        assert validate_against(embeddings, pairs).ok

    def test_single_subword_word_is_that_vector(self, tiny_model_dir, fixture_files, tmp_path):
        out = tmp_path / "vectors.embx"
        run_export(tiny_model_dir, fixture_files, out)
        embeddings = read_embx(str(out))
        oracle = direct_word_vector(tiny_model_dir, "the cat sleeps", 1)
        got = embeddings.vectors[(1, 0)].astype(np.float64)
        assert np.abs(got - oracle).max() <= 1e-5

    def test_multi_subword_word_is_componentwise_mean(self, tiny_model_dir, fixture_files, tmp_path):
        out = tmp_path / "vectors.embx"
        run_export(tiny_model_dir, fixture_files, out)
        embeddings = read_embx(str(out))
        # "sleeps" tokenizes as two pieces for the tiny vocab
        oracle = direct_word_vector(tiny_model_dir, "the cat sleeps", 2)
        got = embeddings.vectors[(2, 0)].astype(np.float64)
        assert np.abs(got - oracle).max() <= 1e-5

    def test_first_subword_pooling_differs_for_split_words(
        self, tiny_model_dir, fixture_files, tmp_path
    ):
        mean_out = tmp_path / "mean.embx"
        first_out = tmp_path / "first.embx"
        run_export(tiny_model_dir, fixture_files, mean_out, pooling="mean")
        run_export(tiny_model_dir, fixture_files, first_out, pooling="first")
        mean_es = read_embx(str(mean_out))
        first_es = read_embx(str(first_out))
        assert not np.array_equal(mean_es.vectors[(2, 0)], first_es.vectors[(2, 0)])
        # single-subword words are identical under both poolings
        assert np.array_equal(mean_es.vectors[(1, 0)], first_es.vectors[(1, 0)])

    def test_truncated_pair_dropped_and_reported(self, tiny_model_dir, tmp_path):
        src = tmp_path / "s.txt"
        tgt = tmp_path / "t.txt"
        pairs = tmp_path / "p.tsv"
        src.write_text("the cat the cat the cat the cat sleeps\n", encoding="utf-8")
        tgt.write_text("le chat le chat le chat le chat dort\n", encoding="utf-8")
        pairs.write_text(
            "pair_id\tsent\tsrc_idx\ttgt_idx\tsrc_word\ttgt_word\n"
            "0\t0\t0\t0\tthe\tle\n"
            "1\t0\t8\t8\tsleeps\tdort\n",
            encoding="utf-8",
        )
        out = tmp_path / "v.embx"
        job = ExportJob(
            model=tiny_model_dir,
            pairs_tsv=str(pairs),
            src_corpus=str(src),
            tgt_corpus=str(tgt),
            out_path=str(out),
            max_seq_len=6,
        )
        report = export(job)
        assert report.exported_pairs == 1
        assert [pid for pid, _ in report.dropped] == [1]
        embeddings = read_embx(str(out))
        assert embeddings.pair_ids() == [0]
        # missing ids are exactly the drop report
        table = read_pairs(str(pairs))
        assert validate_against(embeddings, table).missing == [1]

    def test_rerun_is_byte_identical(self, tiny_model_dir, fixture_files, tmp_path):
        out1 = tmp_path / "a.embx"
        out2 = tmp_path / "b.embx"
        run_export(tiny_model_dir, fixture_files, out1)
        run_export(tiny_model_dir, fixture_files, out2)
        assert out1.read_bytes() == out2.read_bytes()

    def test_model_load_error(self, fixture_files, tmp_path):
        with pytest.raises(ModelLoadError):
            run_export(str(tmp_path / "no-such-model"), fixture_files, tmp_path / "x.embx")

    def test_header_metadata(self, tiny_model_dir, fixture_files, tmp_path):
        out = tmp_path / "v.embx"
        run_export(tiny_model_dir, fixture_files, out, src_lang="en", tgt_lang="fr")
        embeddings = read_embx(str(out))
        assert embeddings.src_lang == "en"
        assert embeddings.tgt_lang == "fr"
        assert embeddings.model_name


class TestCli:
    def test_cli_export(self, tiny_model_dir, fixture_files, tmp_path):
        src, tgt, pairs = fixture_files
        out = tmp_path / "cli.embx"
        result = subprocess.run(
            [
                sys.executable, "-m", "embx_export",
                "--model", tiny_model_dir, "--pairs", pairs,
                "--src", src, "--tgt", tgt, "--out", str(out),
                "--src-lang", "en", "--tgt-lang", "fr",
            ],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0, result.stderr
        assert "exported 3 pairs" in result.stdout
        assert validate_against(read_embx(str(out)), read_pairs(pairs)).ok

    def test_cli_bad_model_exits_2(self, fixture_files, tmp_path):
        src, tgt, pairs = fixture_files
        result = subprocess.run(
            [
                sys.executable, "-m", "embx_export",
                "--model", str(tmp_path / "missing"), "--pairs", pairs,
                "--src", src, "--tgt", tgt, "--out", str(tmp_path / "x.embx"),
            ],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 2


def test_acceptance_exporter(tiny_model_dir, fixture_files, tmp_path):
    """Exported vectors equal the mean of the hidden-state subword vectors
    (<= 1e-5 after float32 quantization) and validate with zero discrepancies."""
    out = tmp_path / "acceptance.embx"
    report = run_export(tiny_model_dir, fixture_files, out)
    embeddings = read_embx(str(out))
    pairs = read_pairs(fixture_files[2])
    assert validate_against(embeddings, pairs).ok
    assert report.dropped == []
    worst = 0.0
    for pair_id, word_idx in ((0, 0), (1, 1), (2, 2)):
        oracle = direct_word_vector(tiny_model_dir, "the cat sleeps", word_idx)
        got = embeddings.vectors[(pair_id, 0)].astype(np.float64)
        worst = max(worst, float(np.abs(got - oracle).max()))
    assert worst <= 1e-5
    print(
        f"[PASS] Exporter: word vectors match hidden-state means "
        f"(max abs dev {worst:.2e}); validate_against clean"
    )
