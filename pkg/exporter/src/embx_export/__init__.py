"""embx-export: pool per-layer word vectors from a pretrained encoder into EMBX."""

from .export import (
    ExportJob,
    ExportReport,
    ModelLoadError,
    TokenizerSpanMismatch,
    export,
)
from .formats import read_pairs_tsv, read_tokenized_corpus, write_embx

__version__ = "0.1.0"
