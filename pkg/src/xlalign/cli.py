"""Command-line interface: the full pipeline as reproducible subcommands.

Every randomized subcommand takes a 64-bit --seed and echoes it in a
``# seed=`` comment on top of its CSV output, so identical invocations produce
byte-identical files. Exit codes: 0 success, 2 input/usage error, 1 internal
error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .corpus import (
    atomic_write_bytes,
    load_lexicon,
    load_parallel_corpus,
    load_pharaoh,
    read_pairs,
    write_pairs,
)
from .errors import XlalignError
from .evaluation import (
    DIRECTION_SRC_TGT,
    DIRECTION_TGT_SRC,
    EvalConfig,
    MODE_STRONG,
    MODE_WEAK,
    eval_alignment,
    eval_by_layer,
    sample_pairs,
)
from .embx import read_embx, validate_against
from .extraction import (
    ExtractionOptions,
    extract_pairs_lexicon,
    grow_diag_final_and,
    pairs_from_links,
)
from .realign import MODE_JOINT, MODE_SEQUENTIAL, TrainerConfig, train_realign_demo
from .stats import correlation_result
from .svg import ScatterPoint, write_scatter_svg
from .transfer import (
    KIND_STRONG,
    KIND_WEAK,
    STAGE_AFTER,
    STAGE_BEFORE,
    correlation_dataset,
    ctl_score,
    load_run_table,
    relative_variation,
)


def _fmt(v: float) -> str:
    return format(v, ".10g")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        atomic_write_bytes(out_path, text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _seed_header(seed: int) -> str:
    return f"# seed={seed}\n"


# --- subcommands ------------------------------------------------------------


def cmd_extract_pairs(args) -> int:
    corpus = load_parallel_corpus(
        args.src, args.tgt, src_lang=args.src_lang, tgt_lang=args.tgt_lang
    )
    if args.lexicon:
        lexicon = load_lexicon(
            args.lexicon,
            lowercase=args.lowercase,
            src_lang=args.src_lang,
            tgt_lang=args.tgt_lang,
        )
        opts = ExtractionOptions(
            lowercase=args.lowercase,
            max_pairs_per_sentence=args.max_pairs_per_sentence,
        )
        pairs = extract_pairs_lexicon(corpus, lexicon, opts)
    else:
        forward = load_pharaoh(args.pharaoh_fwd, corpus)
        backward = load_pharaoh(args.pharaoh_bwd, corpus)
        symmetrized = [
            grow_diag_final_and(f, b, len(src_toks), len(tgt_toks))
            for f, b, (src_toks, tgt_toks) in zip(
                forward, backward, corpus.sentence_pairs
            )
        ]
        pairs = pairs_from_links(corpus, symmetrized)
    write_pairs(pairs, args.out)
    print(f"{len(pairs)} pairs written to {args.out}")
    return 0


def cmd_eval_alignment(args) -> int:
    embeddings = read_embx(args.embx)
    pairs = read_pairs(args.pairs)
    report = validate_against(embeddings, pairs)
    if report.missing:
        raise XlalignError(
            f"embeddings missing for pair_ids {report.missing[:10]}"
            + ("..." if len(report.missing) > 10 else "")
        )
    sample = sample_pairs(pairs, args.n, args.seed)
    cfg = EvalConfig(
        n_sample=args.n,
        seed=args.seed,
        direction=args.direction,
        mode=args.mode,
        layer=0 if args.all_layers else args.layer,
    )
    scores = (
        eval_by_layer(embeddings, sample, cfg)
        if args.all_layers
        else [eval_alignment(embeddings, sample, cfg)]
    )
    lines = [_seed_header(args.seed), "layer,direction,mode,n,accuracy\n"]
    for s in scores:
        lines.append(
            f"{s.layer},{s.direction},{s.mode},{s.n_evaluated},{_fmt(s.accuracy)}\n"
        )
    _emit("".join(lines), args.out)
    return 0


def cmd_ctl(args) -> int:
    table = load_run_table(args.run_csv)
    lines = ["model,task,language,seed,stage,layer,ctl\n"]
    for rec in table.records:
        score = ctl_score(rec.metric_en, rec.metric_tgt)
        lines.append(
            f"{rec.model},{rec.task},{rec.language},{rec.seed},{rec.stage},"
            f"{rec.layer},{_fmt(score.score)}\n"
        )
    _emit("".join(lines), args.out)
    return 0


def cmd_rel_var(args) -> int:
    table = load_run_table(args.run_csv)
    by_key: dict[tuple, dict[str, float]] = {}
    for rec in table.records:
        value = rec.alignment_weak if args.kind == KIND_WEAK else rec.alignment_strong
        by_key.setdefault(
            (rec.model, rec.task, rec.language, rec.seed, rec.layer), {}
        )[rec.stage] = value
    lines = ["model,task,language,seed,layer,kind,before,after,rel_var\n"]
    for key in sorted(by_key):
        stages = by_key[key]
        if STAGE_BEFORE not in stages or STAGE_AFTER not in stages:
            raise XlalignError(f"run {key} lacks a before/after counterpart")
        before, after = stages[STAGE_BEFORE], stages[STAGE_AFTER]
        rel = relative_variation(before, after)
        model, task, language, seed, layer = key
        lines.append(
            f"{model},{task},{language},{seed},{layer},{args.kind},"
            f"{_fmt(before)},{_fmt(after)},{_fmt(rel)}\n"
        )
    _emit("".join(lines), args.out)
    return 0


def cmd_correlate(args) -> int:
    table = load_run_table(args.run_csv)
    xs, ys = correlation_dataset(table, args.task, args.layer, args.stage, args.kind)
    result = correlation_result(
        xs,
        ys,
        iters=args.iters,
        n_resamples=args.resamples,
        alpha=args.alpha,
        seed=args.seed,
    )
    lines = [
        _seed_header(args.seed),
        "task,layer,stage,kind,n,rho,p,ci_low,ci_high,B,seed\n",
        f"{args.task},{args.layer},{args.stage},{args.kind},{result.n},"
        f"{_fmt(result.rho)},{_fmt(result.p_value)},{_fmt(result.ci_low)},"
        f"{_fmt(result.ci_high)},{result.resamples},{result.seed}\n",
    ]
    _emit("".join(lines), args.out)
    if args.svg:
        matching = [
            rec
            for rec in table.select(task=args.task, layer=args.layer, stage=args.stage)
        ]
        matching.sort(key=lambda r: (r.model, r.language, r.seed))
        points = [
            ScatterPoint(
                x=rec.alignment_weak if args.kind == KIND_WEAK else rec.alignment_strong,
                y=ctl_score(rec.metric_en, rec.metric_tgt).score,
                model=rec.model,
                language=rec.language,
            )
            for rec in matching
        ]
        write_scatter_svg(
            args.svg,
            points,
            x_label=f"{args.kind} alignment ({args.layer}, {args.stage})",
            y_label="cross-lingual transfer",
            title=args.task,
        )
    return 0


def cmd_realign_demo(args) -> int:
    config = TrainerConfig(
        mode=args.mode,
        steps=args.steps,
        learning_rate=args.lr,
        batch_pairs=args.batch_pairs,
        seed=args.seed,
        n_languages=args.languages,
        n_pairs=args.pairs,
        dim=args.dim,
        noise_sigma=args.noise,
        distractors_per_pair=args.distractors,
        n_classes=args.classes,
    )
    trajectory = train_realign_demo(config)
    _emit(_seed_header(args.seed) + trajectory.to_csv(), args.out)
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xlalign",
        description="Multilingual alignment evaluation, transfer metrics, "
        "and contrastive realignment.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract-pairs", help="extract word pairs from a corpus")
    p.add_argument("--src", required=True, help="tokenized source-side corpus file")
    p.add_argument("--tgt", required=True, help="tokenized target-side corpus file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--lexicon", help="MUSE-layout bilingual dictionary")
    group.add_argument("--pharaoh-fwd", help="forward Pharaoh alignment file")
    p.add_argument("--pharaoh-bwd", help="backward Pharaoh alignment file")
    p.add_argument("--src-lang", default="")
    p.add_argument("--tgt-lang", default="")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--max-pairs-per-sentence", type=int, default=None)
    p.add_argument("--out", required=True, help="output pair TSV")
    p.set_defaults(func=cmd_extract_pairs)

    p = sub.add_parser("eval-alignment", help="nearest-neighbor alignment accuracy")
    p.add_argument("--embx", required=True)
    p.add_argument("--pairs", required=True)
    layer_group = p.add_mutually_exclusive_group(required=True)
    layer_group.add_argument("--layer", type=int)
    layer_group.add_argument("--all-layers", action="store_true")
    p.add_argument("--mode", choices=[MODE_WEAK, MODE_STRONG], default=MODE_WEAK)
    p.add_argument(
        "--direction",
        choices=[DIRECTION_SRC_TGT, DIRECTION_TGT_SRC],
        default=DIRECTION_SRC_TGT,
    )
    p.add_argument("--n", type=int, default=1000, help="pairs to sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval_alignment)

    p = sub.add_parser("ctl", help="transfer score per run record")
    p.add_argument("run_csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ctl)

    p = sub.add_parser("rel-var", help="relative alignment variation before/after")
    p.add_argument("run_csv")
    p.add_argument("--kind", choices=[KIND_WEAK, KIND_STRONG], default=KIND_STRONG)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rel_var)

    p = sub.add_parser("correlate", help="alignment/transfer rank correlation")
    p.add_argument("run_csv")
    p.add_argument("--task", required=True)
    p.add_argument("--layer", required=True)
    p.add_argument("--stage", choices=[STAGE_BEFORE, STAGE_AFTER], required=True)
    p.add_argument("--kind", choices=[KIND_WEAK, KIND_STRONG], default=KIND_STRONG)
    p.add_argument("--iters", type=int, default=10000, help="permutation iterations")
    p.add_argument("--resamples", type=int, default=2000, help="bootstrap resamples")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", default=None, help="also write a scatter SVG here")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("realign-demo", help="desk-scale realignment training run")
    p.add_argument(
        "--mode", choices=[MODE_SEQUENTIAL, MODE_JOINT], default=MODE_SEQUENTIAL
    )
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--pairs", type=int, default=64)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--distractors", type=float, default=1.0)
    p.add_argument("--batch-pairs", type=int, default=16)
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--languages", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_realign_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "extract-pairs":
        if args.pharaoh_fwd and not args.pharaoh_bwd:
            parser.error("--pharaoh-fwd requires --pharaoh-bwd")
        if args.pharaoh_bwd and not args.pharaoh_fwd:
            parser.error("--pharaoh-bwd requires --pharaoh-fwd")
    try:
        return args.func(args)
    except XlalignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
