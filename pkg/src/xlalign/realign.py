"""Contrastive realignment with analytic gradients, plus a desk-scale trainer.

The realignment loss pulls translated word pairs together against every other
word vector in the batch: for each pair (s, t) in P it scores sim(s, t)/T
against sim(s, h)/T over all h != s and against sim(h, t)/T over all h != t
(sim is cosine, T defaults to 0.1), averaging the two negative log-softmax
terms over 2|P|. Gradients are exact, including the cosine-normalization
term, so every gradient is orthogonal to its own vector.

The trainer realigns raw embedding matrices instead of a transformer: source
vectors are fixed, the target-side matrix is the trainable parameter, and a
K-class linear head over source vectors stands in for the fine-tuning task.
Sequential mode spends a realignment budget before task-only steps; joint mode
optimizes the summed loss each step. Optimization is Adam with linear warmup
for 10% of the steps and linear decay.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .corpus import WordPair, WordPairSet
from .embx import SIDE_SRC, SIDE_TGT, EmbeddingSet
from .errors import (
    AllStreamsEmpty,
    EmptyPairList,
    InvariantViolation,
    LabelOutOfRange,
    RangeError,
    ZeroVector,
)
from .evaluation import MODE_STRONG, nn_hits

DEFAULT_TEMPERATURE = 0.1
DEFAULT_TOY_LR = 1e-2
#: Learning rate used to fine-tune real encoders; kept as documentation, not a default.
REFERENCE_FINETUNE_LR = 2e-5

MODE_SEQUENTIAL = "sequential"
MODE_JOINT = "joint"


# --- contrastive loss -----------------------------------------------------


@dataclass
class RealignBatch:
    """All word vectors of a few sentence pairs plus the translated-pair index list."""

    vectors: np.ndarray  # (n, d): every word vector in the batch, both languages
    pairs: list[tuple[int, int]]  # (source row, target row) into vectors
    temperature: float = DEFAULT_TEMPERATURE


def _validated_units(batch: RealignBatch) -> tuple[np.ndarray, np.ndarray]:
    h = np.asarray(batch.vectors, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] < 2:
        raise InvariantViolation("batch needs at least 2 vectors")
    if not batch.pairs:
        raise EmptyPairList()
    n = h.shape[0]
    for s, t in batch.pairs:
        if not (0 <= s < n and 0 <= t < n) or s == t:
            raise InvariantViolation(f"bad pair indices ({s}, {t})")
    if batch.temperature <= 0.0:
        raise RangeError("temperature must be positive")
    norms = np.linalg.norm(h, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVector(int(zero[0]), "batch")
    return h / norms[:, None], norms


def _contrastive_core(
    batch: RealignBatch, want_grad: bool
) -> tuple[float, np.ndarray | None]:
    units, norms = _validated_units(batch)
    n = units.shape[0]
    sims = units @ units.T
    z = sims / batch.temperature
    n_pairs = len(batch.pairs)
    coeff = 1.0 / (2.0 * n_pairs * batch.temperature)

    total = 0.0
    dloss_dsim = np.zeros((n, n)) if want_grad else None
    for s, t in batch.pairs:
        # translation of s among all h != s
        row = z[s].copy()
        row[s] = -np.inf
        lse_row = logsumexp(row)
        total += z[s, t] - lse_row
        # translation of t among all h != t
        col = z[:, t].copy()
        col[t] = -np.inf
        lse_col = logsumexp(col)
        total += z[s, t] - lse_col
        if want_grad:
            p_row = np.exp(row - lse_row)
            p_row[s] = 0.0
            dloss_dsim[s] += coeff * p_row
            dloss_dsim[s, t] -= coeff
            p_col = np.exp(col - lse_col)
            p_col[t] = 0.0
            dloss_dsim[:, t] += coeff * p_col
            dloss_dsim[s, t] -= coeff

    loss = -total / (2.0 * n_pairs) + 0.0  # +0.0 folds -0.0 into 0.0
    if not want_grad:
        return loss, None
    acc = dloss_dsim + dloss_dsim.T
    radial = (acc * sims).sum(axis=1)
    grads = (acc @ units - radial[:, None] * units) / norms[:, None]
    return loss, grads


def contrastive_loss(batch: RealignBatch) -> float:
    """Value of the contrastive realignment loss (always >= 0)."""
    loss, _ = _contrastive_core(batch, want_grad=False)
    return loss


def contrastive_grad(batch: RealignBatch) -> np.ndarray:
    """Exact gradient of the loss with respect to every vector in the batch."""
    _, grads = _contrastive_core(batch, want_grad=True)
    return grads


# --- toy task head --------------------------------------------------------


@dataclass
class ToyTaskHead:
    """K-class linear softmax classifier over word vectors."""

    weights: np.ndarray  # (K, D)
    bias: np.ndarray  # (K,)

    @classmethod
    def zeros(cls, n_classes: int, dim: int) -> "ToyTaskHead":
        return cls(np.zeros((n_classes, dim)), np.zeros(n_classes))

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]


def task_loss_grad(
    head: ToyTaskHead, vectors: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Mean cross-entropy and its gradients (weights, bias, inputs)."""
    x = np.asarray(vectors, dtype=np.float64)
    y = np.asarray(labels, dtype=np.intp)
    k = head.n_classes
    if y.size and (y.min() < 0 or y.max() >= k):
        bad = int(y[(y < 0) | (y >= k)][0])
        raise LabelOutOfRange(bad, k)
    logits = x @ head.weights.T + head.bias
    logits -= logits.max(axis=1, keepdims=True)
    logp = logits - logsumexp(logits, axis=1, keepdims=True)
    b = x.shape[0]
    loss = -float(logp[np.arange(b), y].mean())
    delta = np.exp(logp)
    delta[np.arange(b), y] -= 1.0
    delta /= b
    grad_w = delta.T @ x
    grad_b = delta.sum(axis=0)
    grad_x = delta @ head.weights
    return loss, grad_w, grad_b, grad_x


# --- optimizer and schedule ------------------------------------------------


class Adam:
    """Classic Adam with bias correction; per-parameter step counts so
    parameters untouched during a phase keep correct corrections later."""

    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self._m: dict = {}
        self._v: dict = {}
        self._t: dict = {}

    def update(self, params: dict, grads: dict, lr: float) -> None:
        for key, grad in grads.items():
            p = params[key]
            if key not in self._m:
                self._m[key] = np.zeros_like(p)
                self._v[key] = np.zeros_like(p)
                self._t[key] = 0
            self._t[key] += 1
            t = self._t[key]
            m = self._m[key]
            v = self._v[key]
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            m_hat = m / (1.0 - self.beta1**t)
            v_hat = v / (1.0 - self.beta2**t)
            p -= lr * m_hat / (np.sqrt(v_hat) + self.epsilon)


def linear_warmup_decay(
    step: int, total_steps: int, base_lr: float, warmup_fraction: float = 0.1
) -> float:
    """Learning rate for 1-based ``step``: linear ramp over the warmup span,
    then linear decay to zero at ``total_steps``."""
    warmup = max(1, int(round(total_steps * warmup_fraction)))
    if step <= warmup:
        return base_lr * step / warmup
    if total_steps <= warmup:
        return base_lr
    return base_lr * max(0.0, (total_steps - step) / (total_steps - warmup))


# --- data plumbing ---------------------------------------------------------


def interleave(streams):
    """Round-robin merge of iterables in fixed order, skipping exhausted ones.

    Raises AllStreamsEmpty if no stream produced a single item.
    """
    iterators = [iter(s) for s in streams]
    yielded = False
    while iterators:
        alive = []
        for it in iterators:
            try:
                item = next(it)
            except StopIteration:
                continue
            yielded = True
            yield item
            alive.append(it)
        iterators = alive
    if not yielded:
        raise AllStreamsEmpty()


@dataclass
class SynthBilingual:
    """Synthetic bilingual embeddings: targets are a fixed random rotation of
    the sources plus Gaussian noise, with unpaired distractor vectors."""

    pairs: WordPairSet
    embeddings: EmbeddingSet
    src: np.ndarray  # (n, d) unit rows, float64
    tgt: np.ndarray  # (n, d) float64
    src_distractors: np.ndarray  # (m_src, d)
    tgt_distractors: np.ndarray  # (m_tgt, d)
    src_distractor_owner: np.ndarray  # pair index each src distractor belongs to
    tgt_distractor_owner: np.ndarray
    transform: np.ndarray  # (d, d) orthogonal


def synth_bilingual(
    n_pairs: int,
    dim: int,
    noise_sigma: float,
    seed,
    distractors_per_pair: float = 1.0,
) -> SynthBilingual:
    """Deterministic synthetic word-pair embeddings (single layer)."""
    if n_pairs < 2:
        raise RangeError("n_pairs must be >= 2")
    if dim < 2:
        raise RangeError("dim must be >= 2")
    if distractors_per_pair < 0:
        raise RangeError("distractors_per_pair must be >= 0")
    rng = np.random.default_rng(seed)

    src = rng.normal(size=(n_pairs, dim))
    src /= np.linalg.norm(src, axis=1, keepdims=True)
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q *= np.sign(np.diag(r))  # unique orthogonal factor
    tgt = src @ q.T + noise_sigma * rng.normal(size=(n_pairs, dim))

    n_dis = int(round(distractors_per_pair * n_pairs))
    owners = np.arange(n_dis) % n_pairs
    side_src = np.arange(n_dis) % 2 == 0
    raw = rng.normal(size=(n_dis, dim))
    noise = rng.normal(size=(n_dis, dim))
    if n_dis:
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    src_dis = raw[side_src]
    tgt_dis = raw[~side_src] @ q.T + noise_sigma * noise[~side_src]

    words = [WordPair(k, k, 0, 0, f"s{k}", f"t{k}") for k in range(n_pairs)]
    pair_set = WordPairSet(words, provenance="synthetic")
    emb = EmbeddingSet(1, dim, src_lang="l1", tgt_lang="l2", model_name="synthetic")
    for k in range(n_pairs):
        emb.put(k, SIDE_SRC, src[k])
        emb.put(k, SIDE_TGT, tgt[k])
    return SynthBilingual(
        pairs=pair_set,
        embeddings=emb,
        src=src,
        tgt=tgt,
        src_distractors=src_dis,
        tgt_distractors=tgt_dis,
        src_distractor_owner=owners[side_src],
        tgt_distractor_owner=owners[~side_src],
        transform=q,
    )


# --- trainer ----------------------------------------------------------------


@dataclass
class TrainerConfig:
    mode: str = MODE_SEQUENTIAL
    steps: int = 500
    learning_rate: float = DEFAULT_TOY_LR
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    warmup_fraction: float = 0.1
    batch_pairs: int = 16  # realignment pairs drawn per language per step
    seed: int = 0
    n_languages: int = 1
    n_pairs: int = 64
    dim: int = 32
    noise_sigma: float = 0.05
    distractors_per_pair: float = 1.0
    n_classes: int = 4
    probe_size: int | None = None  # None: probe on all pairs
    realign_fraction: float = 0.5  # sequential: share of steps spent realigning
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self) -> None:
        if self.mode not in (MODE_SEQUENTIAL, MODE_JOINT):
            raise RangeError(f"unknown mode {self.mode!r}")
        if self.steps < 0:
            raise RangeError("steps must be >= 0")
        if self.learning_rate < 0:
            raise RangeError("learning rate must be >= 0")
        if self.batch_pairs < 1 or self.n_languages < 1 or self.n_classes < 2:
            raise RangeError("batch_pairs, n_languages >= 1 and n_classes >= 2")
        if not 0.0 <= self.realign_fraction <= 1.0:
            raise RangeError("realign_fraction must be in [0, 1]")

    @property
    def realign_steps(self) -> int:
        if self.mode == MODE_JOINT:
            return self.steps
        return int(round(self.steps * self.realign_fraction))


@dataclass
class TrajectoryPoint:
    step: int
    realign_loss: float | None
    task_loss: float | None
    probe_strong_acc: float


@dataclass
class Trajectory:
    points: list[TrajectoryPoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def final_accuracy(self) -> float:
        return self.points[-1].probe_strong_acc

    def to_csv(self) -> str:
        def fmt(v: float | None) -> str:
            return "" if v is None else format(v, ".10g")

        lines = ["step,realign_loss,task_loss,probe_strong_acc"]
        for p in self.points:
            lines.append(
                f"{p.step},{fmt(p.realign_loss)},{fmt(p.task_loss)},"
                f"{fmt(p.probe_strong_acc)}"
            )
        return "\n".join(lines) + "\n"


def _shuffled_index_stream(n: int, rng: np.random.Generator):
    while True:
        for k in rng.permutation(n):
            yield int(k)


def _labeled_stream(label: int, n: int, rng: np.random.Generator):
    for k in _shuffled_index_stream(n, rng):
        yield (label, k)


class RealignTrainer:
    """Owns the synthetic datasets, trainable parameters, and optimizer state.

    Trainable parameters: each language's target-side pair matrix and
    target-side distractors, plus the task head. Source vectors stay fixed
    (the desk-scale analogue of fine-tuning only in the source language).
    """

    def __init__(self, config: TrainerConfig):
        self.config = config
        root = np.random.SeedSequence(config.seed & 0xFFFFFFFFFFFFFFFF)
        n_lang = config.n_languages
        children = root.spawn(2 * n_lang + 3)
        self.datasets = [
            synth_bilingual(
                config.n_pairs,
                config.dim,
                config.noise_sigma,
                seed=children[l],
                distractors_per_pair=config.distractors_per_pair,
            )
            for l in range(n_lang)
        ]
        self.params: dict = {}
        for l, data in enumerate(self.datasets):
            self.params[("tgt", l)] = data.tgt.copy()
            self.params[("tgtdis", l)] = data.tgt_distractors.copy()
        self.params["head_w"] = np.zeros((config.n_classes, config.dim))
        self.params["head_b"] = np.zeros(config.n_classes)

        label_rng = np.random.default_rng(children[2 * n_lang])
        centroids = label_rng.normal(size=(config.n_classes, config.dim))
        self.labels = np.argmax(self.datasets[0].src @ centroids.T, axis=1)

        task_rng = np.random.default_rng(children[2 * n_lang + 1])
        self._task_stream = _shuffled_index_stream(config.n_pairs, task_rng)
        self._realign_stream = interleave(
            [
                _labeled_stream(
                    l, config.n_pairs, np.random.default_rng(children[n_lang + l])
                )
                for l in range(n_lang)
            ]
        )
        probe_rng = np.random.default_rng(children[2 * n_lang + 2])
        if config.probe_size is None or config.probe_size >= config.n_pairs:
            self._probe_idx = np.arange(config.n_pairs)
        else:
            self._probe_idx = np.sort(
                probe_rng.choice(config.n_pairs, size=config.probe_size, replace=False)
            )

        self.adam = Adam(config.beta1, config.beta2, config.epsilon)
        self.step_count = 0

        # distractor rows grouped by owning pair, per language
        self._src_dis_of = []
        self._tgt_dis_of = []
        for data in self.datasets:
            by_pair_src: dict[int, list[int]] = {}
            for row, owner in enumerate(data.src_distractor_owner):
                by_pair_src.setdefault(int(owner), []).append(row)
            by_pair_tgt: dict[int, list[int]] = {}
            for row, owner in enumerate(data.tgt_distractor_owner):
                by_pair_tgt.setdefault(int(owner), []).append(row)
            self._src_dis_of.append(by_pair_src)
            self._tgt_dis_of.append(by_pair_tgt)

    # -- batch plumbing --

    def next_realign_selection(self) -> list[tuple[int, int]]:
        size = self.config.batch_pairs * self.config.n_languages
        return [next(self._realign_stream) for _ in range(size)]

    def next_task_indices(self) -> np.ndarray:
        return np.array(
            [next(self._task_stream) for _ in range(self.config.batch_pairs)]
        )

    def build_realign_batch(
        self, selection: list[tuple[int, int]]
    ) -> tuple[RealignBatch, list]:
        """Assemble (H, P) from current parameters; owners mark trainable rows."""
        rows: list[np.ndarray] = []
        owners: list = []
        for l, k in selection:
            rows.append(self.datasets[l].src[k])
            owners.append(None)
        for l, k in selection:
            rows.append(self.params[("tgt", l)][k])
            owners.append(("tgt", l, k))
        n_sel = len(selection)
        pair_indices = [(i, n_sel + i) for i in range(n_sel)]
        for l, k in selection:
            for r in self._src_dis_of[l].get(k, ()):
                rows.append(self.datasets[l].src_distractors[r])
                owners.append(None)
            for r in self._tgt_dis_of[l].get(k, ()):
                rows.append(self.params[("tgtdis", l)][r])
                owners.append(("tgtdis", l, r))
        batch = RealignBatch(
            np.array(rows), pair_indices, temperature=self.config.temperature
        )
        return batch, owners

    def _head(self) -> ToyTaskHead:
        return ToyTaskHead(self.params["head_w"], self.params["head_b"])

    # -- steps --

    def joint_step(
        self,
        realign_selection: list[tuple[int, int]] | None,
        task_indices: np.ndarray | None,
    ) -> tuple[float | None, float | None]:
        """One Adam update on the sum of whichever losses are present."""
        self.step_count += 1
        lr = linear_warmup_decay(
            self.step_count,
            self.config.steps,
            self.config.learning_rate,
            self.config.warmup_fraction,
        )
        grads: dict = {}
        realign_loss = task_loss = None
        if realign_selection:
            batch, owners = self.build_realign_batch(realign_selection)
            realign_loss, g = _contrastive_core(batch, want_grad=True)
            for row, owner in enumerate(owners):
                if owner is None:
                    continue
                kind, l, r = owner
                key = (kind, l)
                if key not in grads:
                    grads[key] = np.zeros_like(self.params[key])
                grads[key][r] += g[row]
        if task_indices is not None and len(task_indices):
            x = self.datasets[0].src[task_indices]
            y = self.labels[task_indices]
            task_loss, grad_w, grad_b, _ = task_loss_grad(self._head(), x, y)
            grads["head_w"] = grad_w
            grads["head_b"] = grad_b
        self.adam.update(self.params, grads, lr)
        return realign_loss, task_loss

    def realign_step(self, selection: list[tuple[int, int]]) -> float:
        loss, _ = self.joint_step(selection, None)
        return loss

    def task_step(self, indices: np.ndarray) -> float:
        _, loss = self.joint_step(None, indices)
        return loss

    # -- evaluation --

    def probe_strong_accuracy(self) -> float:
        """Mean strong top-1 accuracy over the fixed probe sample, per language."""
        accs = []
        for l, data in enumerate(self.datasets):
            src = data.src[self._probe_idx]
            tgt = self.params[("tgt", l)][self._probe_idx]
            src_u = src / np.linalg.norm(src, axis=1, keepdims=True)
            tgt_u = tgt / np.linalg.norm(tgt, axis=1, keepdims=True)
            accs.append(nn_hits(src_u, tgt_u, MODE_STRONG).mean())
        return float(np.mean(accs))


def train_realign_demo(config: TrainerConfig) -> Trajectory:
    """Run the realignment demonstration and record the full trajectory."""
    trainer = RealignTrainer(config)
    trajectory = Trajectory(
        [TrajectoryPoint(0, None, None, trainer.probe_strong_accuracy())]
    )
    realign_budget = config.realign_steps
    for step in range(1, config.steps + 1):
        if config.mode == MODE_JOINT:
            realign_loss, task_loss = trainer.joint_step(
                trainer.next_realign_selection(), trainer.next_task_indices()
            )
        elif step <= realign_budget:
            realign_loss = trainer.realign_step(trainer.next_realign_selection())
            task_loss = None
        else:
            task_loss = trainer.task_step(trainer.next_task_indices())
            realign_loss = None
        trajectory.points.append(
            TrajectoryPoint(step, realign_loss, task_loss, trainer.probe_strong_accuracy())
        )
    return trajectory
