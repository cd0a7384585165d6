"""Command-line entry point for the EMBX exporter."""

from __future__ import annotations

import argparse
import sys

from .export import ExportJob, ModelLoadError, POOL_FIRST, POOL_MEAN, export


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embx-export",
        description="Export per-layer contextualized word vectors for a pair "
        "TSV into an EMBX file using a pretrained encoder.",
    )
    parser.add_argument("--model", required=True, help="HF model id or local path")
    parser.add_argument("--pairs", required=True, help="pair TSV file")
    parser.add_argument("--src", required=True, help="tokenized source corpus")
    parser.add_argument("--tgt", required=True, help="tokenized target corpus")
    parser.add_argument("--out", required=True, help="output EMBX path")
    parser.add_argument("--max-len", type=int, default=96)
    parser.add_argument(
        "--pooling", choices=[POOL_MEAN, POOL_FIRST], default=POOL_MEAN
    )
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--src-lang", default="")
    parser.add_argument("--tgt-lang", default="")
    parser.add_argument("--device", default="cpu")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = ExportJob(
        model=args.model,
        pairs_tsv=args.pairs,
        src_corpus=args.src,
        tgt_corpus=args.tgt,
        out_path=args.out,
        max_seq_len=args.max_len,
        pooling=args.pooling,
        batch_size=args.batch_size,
        src_lang=args.src_lang,
        tgt_lang=args.tgt_lang,
        device=args.device,
    )
    try:
        report = export(job)
    except (ModelLoadError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"exported {report.exported_pairs} pairs "
        f"({report.layer_count} layers, dim {report.dim}) to {args.out}"
    )
    if report.dropped:
        print(f"dropped {report.dropped_count} pairs:")
        for pair_id, reason in report.dropped:
            print(f"  pair {pair_id}: {reason}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
