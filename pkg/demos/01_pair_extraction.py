"""Extracting translated word pairs from a parallel corpus.

Two routes produce the same kind of pair file: a bilingual dictionary with
aggressive ambiguity discarding, or directional aligner output symmetrized
with grow-diag-final-and and filtered to one-to-one links. Run from the repo
root:

    python demos/01_pair_extraction.py
"""

import os

from xlalign import (
    extract_pairs_lexicon,
    grow_diag_final_and,
    load_lexicon,
    load_parallel_corpus,
    load_pharaoh,
    pairs_from_links,
    read_pairs,
    write_pairs,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)


def path(name: str) -> str:
    return os.path.join(OUT, name)


# A tiny pre-tokenized English-French corpus, one sentence per line.
with open(path("corpus.en"), "w", encoding="utf-8") as fh:
    fh.write("the cat sleeps\nthe dog chases a cat and a dog\nthe taxi stops\n")
with open(path("corpus.fr"), "w", encoding="utf-8") as fh:
    fh.write("le chat dort\nle chien chasse un chat et un chien\nle taxi stoppe\n")
with open(path("dictionary.txt"), "w", encoding="utf-8") as fh:
    fh.write("the le\ncat chat\nsleeps dort\ndog chien\ntaxi taxi\nstops stoppe\n")

corpus = load_parallel_corpus(path("corpus.en"), path("corpus.fr"), "en", "fr")
lexicon = load_lexicon(path("dictionary.txt"), src_lang="en", tgt_lang="fr")

pairs = extract_pairs_lexicon(corpus, lexicon)
print(f"dictionary extraction found {len(pairs)} unambiguous pairs:")
for p in pairs:
    print(f"  sentence {p.sentence_index}: {p.src_word} ({p.src_word_index}) "
          f"-> {p.tgt_word} ({p.tgt_word_index})")
print("note: 'cat' and 'dog' in sentence 1 are ambiguous (repeated), and")
print("'taxi'='taxi' is discarded as an identical surface form.\n")

write_pairs(pairs, path("pairs_dictionary.tsv"))
print(f"wrote {path('pairs_dictionary.tsv')}; "
      f"round-trip gives {len(read_pairs(path('pairs_dictionary.tsv')))} pairs\n")

# The aligner route: two directional Pharaoh files, symmetrized per sentence.
with open(path("forward.align"), "w", encoding="utf-8") as fh:
    fh.write("0-0 1-1 2-2\n0-0 1-1\n0-0 1-1 2-2\n")
with open(path("backward.align"), "w", encoding="utf-8") as fh:
    fh.write("0-0 1-1 2-2\n0-0 2-2\n0-0 1-1 2-2\n")

forward = load_pharaoh(path("forward.align"), corpus)
backward = load_pharaoh(path("backward.align"), corpus)
symmetrized = [
    grow_diag_final_and(f, b, len(s), len(t))
    for f, b, (s, t) in zip(forward, backward, corpus.sentence_pairs)
]
print("grow-diag-final-and per sentence:")
for i, links in enumerate(symmetrized):
    print(f"  sentence {i}: {sorted(links)}")

aligner_pairs = pairs_from_links(corpus, symmetrized)
write_pairs(aligner_pairs, path("pairs_aligner.tsv"))
print(f"\naligner route kept {len(aligner_pairs)} one-to-one, non-identical pairs")
print(f"wrote {path('pairs_aligner.tsv')}")
