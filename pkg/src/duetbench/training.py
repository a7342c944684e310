"""Contrastive training of linear heads on human turn data.

One training example is a turn: a clue, the words available on the board,
and the set the human selected. The loss is cross-entropy of the selected
words under a softmax of cosine similarities between transformed embeddings,
scaled by a learnable temperature. Both the clue and the candidates pass
through the head. Gradients are computed analytically (no autograd).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .lexicon import EmbeddingTable, LinearHead

TEMP_MIN = 0.0  # exp(t) in [1, 100]
TEMP_MAX = math.log(100.0)


class TrainingError(ValueError):
    pass


class TrainingDiverged(TrainingError):
    def __init__(self, epoch_losses):
        super().__init__(f"loss became non-finite after {len(epoch_losses)} epochs")
        self.epoch_losses = epoch_losses


@dataclass(frozen=True)
class TurnExample:
    """One observed turn: clue, available words, indices the human selected."""

    clue: str
    board_words: tuple[str, ...]
    selected: tuple[int, ...]

    def __post_init__(self):
        if not self.selected:
            raise TrainingError("selected index set must be nonempty")
        n = len(self.board_words)
        if any(i < 0 or i >= n for i in self.selected):
            raise TrainingError("selected indices out of range")
        if len(set(self.selected)) != len(self.selected):
            raise TrainingError("selected indices must be unique")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 25
    learning_rate: float = 1e-2
    batch_size: int = 32
    seed: int = 0
    temperature_init: float = 10.0  # initial exp(t)
    optimizer: str = "sgd"
    d_out: int | None = None
    use_bias: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise TrainingError("epochs must be >= 1")
        if self.learning_rate < 0:
            raise TrainingError("learning_rate must be >= 0")
        if self.batch_size < 1:
            raise TrainingError("batch_size must be >= 1")
        if self.optimizer not in ("sgd", "adam"):
            raise TrainingError(f"unknown optimizer {self.optimizer!r}")
        if not 1.0 <= self.temperature_init <= 100.0:
            raise TrainingError("temperature_init must be within [1, 100]")

    def to_json(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "temperature_init": self.temperature_init,
            "optimizer": self.optimizer,
            "d_out": self.d_out,
            "use_bias": self.use_bias,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise TrainingError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)


@dataclass
class HeadGradients:
    weight: np.ndarray
    bias: np.ndarray | None
    temperature: float


def contrastive_loss(
    head: LinearHead, table: EmbeddingTable, example: TurnExample
) -> tuple[float, HeadGradients]:
    """Loss and analytic gradients for one turn example.

    logits u_i = cosine(head(x_i), head(x_clue)) * exp(t); the loss is the
    mean negative log softmax over the selected indices.
    """
    X = table.rows(example.board_words)
    xc = table.row(example.clue)
    W, b, t = head.weight, head.bias, head.temperature
    tau = math.exp(t)

    E = X @ W.T
    ec = W @ xc
    if b is not None:
        E = E + b
        ec = ec + b
    En = np.linalg.norm(E, axis=1)
    ecn = float(np.linalg.norm(ec))
    if ecn == 0.0 or np.any(En == 0.0):
        raise TrainingError("head maps a word to the zero vector")

    s = (E @ ec) / (En * ecn)
    u = s * tau
    m = float(u.max())
    expu = np.exp(u - m)
    p = expu / expu.sum()

    sel = list(example.selected)
    loss = float(-(np.log(p[sel])).mean())

    y = np.zeros(len(p))
    y[sel] = 1.0 / len(sel)
    g_u = p - y
    g_t = float(tau * (g_u * s).sum())
    g_s = g_u * tau

    # cosine backprop: for s = a.b/(|a||b|),
    #   ds/da = b/(|a||b|) - s a/|a|^2, ds/db symmetric.
    gE = g_s[:, None] * (ec[None, :] / (En[:, None] * ecn) - (s / En**2)[:, None] * E)
    gec = (g_s[:, None] * (E / (En[:, None] * ecn) - np.outer(s / ecn**2, ec))).sum(axis=0)

    gW = gE.T @ X + np.outer(gec, xc)
    gb = gE.sum(axis=0) + gec if b is not None else None
    return loss, HeadGradients(weight=gW, bias=gb, temperature=g_t)


def initial_head(table: EmbeddingTable, cfg: TrainConfig) -> LinearHead:
    """Identity-like start so training begins at the untransformed baseline.

    When d_out differs from the table dimension, uses orthonormal rows drawn
    from a seeded Gaussian so the start is still an isometry-like map.
    """
    d_in = table.dim
    d_out = cfg.d_out or d_in
    t0 = math.log(cfg.temperature_init)
    if d_out == d_in:
        weight = np.eye(d_in)
    else:
        rng = np.random.default_rng(cfg.seed)
        raw = rng.normal(size=(max(d_out, d_in), d_in))
        q, _ = np.linalg.qr(raw.T)
        weight = q[:, :d_out].T.copy()
    bias = np.zeros(d_out) if cfg.use_bias else None
    return LinearHead(weight=weight, bias=bias, temperature=t0)


@dataclass
class TrainResult:
    head: LinearHead
    epoch_losses: list = field(default_factory=list)


class _Adam:
    def __init__(self, shapes, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        out = []
        for i, (p, g) in enumerate(zip(params, grads)):
            self.m[i] = self.b1 * self.m[i] + (1 - self.b1) * g
            self.v[i] = self.b2 * self.v[i] + (1 - self.b2) * g * g
            mhat = self.m[i] / (1 - self.b1**self.t)
            vhat = self.v[i] / (1 - self.b2**self.t)
            out.append(p - self.lr * mhat / (np.sqrt(vhat) + self.eps))
        return out


def train(examples, table: EmbeddingTable, cfg: TrainConfig) -> TrainResult:
    """Mini-batch training, deterministic for a fixed config seed.

    Shuffling uses numpy's seeded Generator and batches reduce in a fixed
    order, so two runs with the same config produce bit-identical heads.
    """
    examples = list(examples)
    if not examples:
        raise TrainingError("no training examples")
    head = initial_head(table, cfg)
    W = head.weight.copy()
    b = head.bias.copy() if head.bias is not None else None
    t = head.temperature

    rng = np.random.default_rng(cfg.seed)
    adam = None
    if cfg.optimizer == "adam":
        shapes = [W.shape] + ([b.shape] if b is not None else []) + [()]
        adam = _Adam(shapes, cfg.learning_rate)

    epoch_losses: list[float] = []
    for _ in range(cfg.epochs):
        order = rng.permutation(len(examples))
        total = 0.0
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            gW = np.zeros_like(W)
            gb = np.zeros_like(b) if b is not None else None
            gt = 0.0
            for k in batch:
                current = LinearHead(weight=W, bias=b, temperature=t)
                loss, grads = contrastive_loss(current, table, examples[k])
                total += loss
                gW += grads.weight
                if gb is not None:
                    gb += grads.bias
                gt += grads.temperature
            scale = 1.0 / len(batch)
            if adam is not None:
                params = [W] + ([b] if b is not None else []) + [np.float64(t)]
                grads_l = [gW * scale] + ([gb * scale] if b is not None else []) + [
                    np.float64(gt * scale)
                ]
                stepped = adam.step(params, grads_l)
                W = stepped[0]
                if b is not None:
                    b = stepped[1]
                t = float(stepped[-1])
            else:
                W = W - cfg.learning_rate * gW * scale
                if b is not None:
                    b = b - cfg.learning_rate * gb * scale
                t = t - cfg.learning_rate * gt * scale
            t = min(max(t, TEMP_MIN), TEMP_MAX)
        mean_loss = total / len(examples)
        if not math.isfinite(mean_loss):
            raise TrainingDiverged(epoch_losses)
        epoch_losses.append(mean_loss)

    return TrainResult(
        head=LinearHead(weight=W, bias=b, temperature=t), epoch_losses=epoch_losses
    )


def split_by_attribute(records, attribute: str, grouping, who: str = "guesser"):
    """Partition game records into cultural groups by one demographic key.

    `grouping` maps raw attribute values to group names; values missing from
    the map, and records missing the attribute, land in "unassigned". The
    attribute is read from the guesser's demographics by default since
    trained listeners model guess behavior.
    """
    records = list(records)
    if who not in ("guesser", "giver"):
        raise TrainingError("who must be 'guesser' or 'giver'")
    key = f"{who}_demographics"
    if records and not any(attribute in getattr(r, key) for r in records):
        raise TrainingError(f"attribute {attribute!r} not present in any record")
    groups: dict[str, list] = {}
    for rec in records:
        value = getattr(rec, key).get(attribute)
        group = grouping.get(value, "unassigned") if value is not None else "unassigned"
        groups.setdefault(group, []).append(rec)
    return groups
