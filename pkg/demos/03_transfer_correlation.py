"""Relating alignment to cross-lingual transfer.

Builds a synthetic run table (4 models x 5 languages x 5 seeds, before/after
fine-tuning), computes the relative-difference transfer score for every run,
the relative variation of alignment across fine-tuning, and the Spearman
correlation between alignment and transfer with a permutation p-value and a
BCa bootstrap confidence interval. Also writes a Fig.-style SVG scatter.

    python demos/03_transfer_correlation.py
"""

import os

import numpy as np

from xlalign import (
    correlation_dataset,
    correlation_result,
    ctl_score,
    load_run_table,
    relative_variation,
)
from xlalign.svg import ScatterPoint, write_scatter_svg

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

rng = np.random.default_rng(99)
rows = ["model,task,language,seed,stage,layer,alignment_weak,alignment_strong,"
        "metric_en,metric_tgt"]
for mi, model in enumerate(["tiny", "small", "base", "large"]):
    for li, lang in enumerate(["ar", "es", "fr", "ru", "zh"]):
        for seed in range(5):
            for stage in ("before", "after"):
                strong = min(0.9, 0.10 + 0.15 * mi + 0.06 * li
                             + (0.45 - 0.05 * mi) * (stage == "before") * 0.0
                             - (0.25 - 0.06 * mi) * (stage == "after")
                             + 0.04 * rng.random() + 0.25)
                strong = float(np.clip(strong, 0.01, 0.95))
                weak = float(np.clip(strong + 0.08 + 0.04 * rng.random(), 0, 0.99))
                m_en = 0.92 + 0.01 * mi
                m_tgt = float(np.clip(m_en * (0.35 + 0.6 * strong
                                              + 0.03 * rng.random()), 0, 1))
                rows.append(f"{model},pos,{lang},{seed},{stage},last,"
                            f"{weak:.6f},{strong:.6f},{m_en:.6f},{m_tgt:.6f}")

run_path = os.path.join(OUT, "runs.csv")
with open(run_path, "w", encoding="utf-8") as fh:
    fh.write("\n".join(rows) + "\n")

table = load_run_table(run_path)
print(f"loaded {len(table)} run records from {run_path}\n")

example = table.records[0]
score = ctl_score(example.metric_en, example.metric_tgt)
print(f"example transfer score ({example.model}/{example.language}): "
      f"({score.m_tgt:.3f} - {score.m_en:.3f}) / {score.m_en:.3f} = {score.score:+.3f}")

before = {r.key[:4] + (r.layer,): r.alignment_strong
          for r in table.select(stage="before")}
drops = []
for rec in table.select(stage="after"):
    key = rec.key[:4] + (rec.layer,)
    drops.append(relative_variation(before[key], rec.alignment_strong))
print(f"mean relative variation of strong alignment after fine-tuning: "
      f"{np.mean(drops):+.3f} (negative = drop)\n")

for stage in ("before", "after"):
    for kind in ("weak", "strong"):
        xs, ys = correlation_dataset(table, "pos", "last", stage, kind)
        result = correlation_result(xs, ys, iters=5000, n_resamples=2000, seed=17)
        print(f"{stage:>6} {kind:>6}: rho={result.rho:+.3f} "
              f"p={result.p_value:.2e} CI95=[{result.ci_low:+.3f}, {result.ci_high:+.3f}] "
              f"(n={result.n}, B={result.resamples})")

xs, ys = correlation_dataset(table, "pos", "last", "after", "strong")
points = [
    ScatterPoint(x=rec.alignment_strong,
                 y=ctl_score(rec.metric_en, rec.metric_tgt).score,
                 model=rec.model, language=rec.language)
    for rec in sorted(table.select(task="pos", layer="last", stage="after"),
                      key=lambda r: (r.model, r.language, r.seed))
]
svg_path = os.path.join(OUT, "alignment_vs_transfer.svg")
write_scatter_svg(svg_path, points,
                  x_label="strong alignment (last layer, after)",
                  y_label="cross-lingual transfer", title="pos")
print(f"\nscatter written to {svg_path} "
      "(glyph = model, color = language, one marker per run)")
