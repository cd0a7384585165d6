"""xlalign: multilingual alignment evaluation, cross-lingual transfer metrics,
and contrastive realignment at desk scale."""

from .corpus import (
    AlignmentLinkSet,
    BilingualLexicon,
    PAIR_TSV_HEADER,
    ParallelCorpus,
    WordPair,
    WordPairSet,
    load_lexicon,
    load_parallel_corpus,
    load_pharaoh,
    read_pairs,
    write_pairs,
)
from .embx import (
    EmbeddingSet,
    EmbxHeader,
    SIDE_SRC,
    SIDE_TGT,
    ValidationReport,
    read_embx,
    validate_against,
    write_embx,
)
from .evaluation import (
    AlignmentScore,
    DIRECTION_SRC_TGT,
    DIRECTION_TGT_SRC,
    EvalConfig,
    MODE_STRONG,
    MODE_WEAK,
    eval_alignment,
    eval_by_layer,
    nn_hits,
    sample_pairs,
)
from .extraction import (
    ExtractionOptions,
    extract_pairs_lexicon,
    grow_diag_final_and,
    pairs_from_links,
)
from .realign import (
    DEFAULT_TEMPERATURE,
    REFERENCE_FINETUNE_LR,
    Adam,
    RealignBatch,
    RealignTrainer,
    SynthBilingual,
    ToyTaskHead,
    Trajectory,
    TrainerConfig,
    contrastive_grad,
    contrastive_loss,
    interleave,
    linear_warmup_decay,
    synth_bilingual,
    task_loss_grad,
    train_realign_demo,
)
from .stats import (
    CorrelationResult,
    bca_interval,
    correlation_result,
    perm_pvalue,
    spearman,
)
from .transfer import (
    RunRecord,
    RunTable,
    TransferScore,
    correlation_dataset,
    ctl_score,
    load_run_table,
    relative_variation,
)

__version__ = "0.1.0"
