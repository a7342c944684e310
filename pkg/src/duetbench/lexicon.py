"""Word vectors, trainable linear heads, and literal-listener distributions.

The literal listener interprets a clue by cosine similarity between embedded
words, turned into a probability over candidates with a plain softmax. A
LinearHead transforms base vectors into a culture-specific space; with no
head, the base vectors are used as-is.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class LexiconError(ValueError):
    """Malformed vector files, dimension mismatches, degenerate vectors."""


class OOVError(KeyError):
    """Word not present in the embedding vocabulary."""


def normalize_word(word: str) -> str:
    return word.strip().lower()


@dataclass(frozen=True)
class EmbeddingTable:
    """Base word vectors: one row per vocabulary word."""

    vocab: tuple[str, ...]
    vectors: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.vectors.ndim != 2 or len(self.vocab) != self.vectors.shape[0]:
            raise LexiconError("vocab length must equal vector row count")
        if not np.all(np.isfinite(self.vectors)):
            raise LexiconError("embedding vectors must be finite")
        index = {w: i for i, w in enumerate(self.vocab)}
        if len(index) != len(self.vocab):
            raise LexiconError("vocabulary entries must be unique")
        object.__setattr__(self, "_index", index)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def __len__(self) -> int:
        return len(self.vocab)

    def row(self, word: str) -> np.ndarray:
        try:
            return self.vectors[self._index[word]]
        except KeyError:
            raise OOVError(word) from None

    def rows(self, words) -> np.ndarray:
        idx = []
        for w in words:
            if w not in self._index:
                raise OOVError(w)
            idx.append(self._index[w])
        return self.vectors[idx]


@dataclass(frozen=True)
class LinearHead:
    """Learned linear transform applied on top of base vectors.

    `temperature` is the log-scale scalar t used by the training loss
    (logits are cosine * exp(t)); it plays no role at inference time.
    """

    weight: np.ndarray
    bias: np.ndarray | None = None
    temperature: float = math.log(10.0)

    def __post_init__(self):
        if self.weight.ndim != 2:
            raise LexiconError("head weight must be a matrix")
        if not np.all(np.isfinite(self.weight)):
            raise LexiconError("head weight must be finite")
        if self.bias is not None:
            if self.bias.shape != (self.weight.shape[0],):
                raise LexiconError("bias shape must match weight output dim")
            if not np.all(np.isfinite(self.bias)):
                raise LexiconError("bias must be finite")
        if not math.isfinite(self.temperature):
            raise LexiconError("temperature must be finite")

    @property
    def d_in(self) -> int:
        return self.weight.shape[1]

    @property
    def d_out(self) -> int:
        return self.weight.shape[0]

    @classmethod
    def identity(cls, dim: int, temperature: float = math.log(10.0)) -> "LinearHead":
        return cls(weight=np.eye(dim), bias=None, temperature=temperature)

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        out = vectors @ self.weight.T
        if self.bias is not None:
            out = out + self.bias
        return out

    def to_json(self) -> dict:
        return {
            "d_in": self.d_in,
            "d_out": self.d_out,
            "weight": self.weight.tolist(),
            "bias": None if self.bias is None else self.bias.tolist(),
            "temperature": self.temperature,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "LinearHead":
        weight = np.asarray(payload["weight"], dtype=np.float64)
        if weight.shape != (payload["d_out"], payload["d_in"]):
            raise LexiconError("head weight shape disagrees with declared dims")
        bias = payload.get("bias")
        return cls(
            weight=weight,
            bias=None if bias is None else np.asarray(bias, dtype=np.float64),
            temperature=float(payload.get("temperature", math.log(10.0))),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "LinearHead":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class Distribution:
    """Probabilities over an ordered word support."""

    support: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise ValueError("support and probs must align")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support entries must be unique")
        if np.any(self.probs < 0) or abs(float(self.probs.sum()) - 1.0) > 1e-9:
            raise ValueError("probs must be non-negative and sum to 1")

    def prob(self, word: str) -> float:
        return float(self.probs[self.support.index(word)])

    def argmax_word(self) -> str:
        """Highest-probability word; exact ties go to the lexicographically smallest."""
        best = np.max(self.probs)
        return min(w for w, p in zip(self.support, self.probs) if p == best)


def load_embeddings(path, vocab_limit: int | None = None) -> EmbeddingTable:
    """Read a whitespace-separated word-vector text file.

    Each line is `word v1 ... vd`. Duplicate words keep the first occurrence;
    file order is preserved (callers treat it as a frequency ranking).
    """
    vocab: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            word = normalize_word(parts[0])
            try:
                values = [float(x) for x in parts[1:]]
            except ValueError:
                raise LexiconError(f"{path}:{lineno}: unparseable vector component")
            if not values:
                raise LexiconError(f"{path}:{lineno}: no vector components")
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise LexiconError(
                    f"{path}:{lineno}: dimension {len(values)} != expected {dim}"
                )
            if word in seen:
                continue
            seen.add(word)
            vocab.append(word)
            rows.append(values)
            if vocab_limit is not None and len(vocab) >= vocab_limit:
                break
    if not vocab:
        raise LexiconError(f"{path}: no vectors found")
    return EmbeddingTable(vocab=tuple(vocab), vectors=np.asarray(rows, dtype=np.float64))


def embed(table: EmbeddingTable, head: LinearHead | None, word: str) -> np.ndarray:
    """Embed one word: base row, transformed by the head when present."""
    row = table.row(word)
    if head is None:
        return row
    if head.d_in != table.dim:
        raise LexiconError("head input dim does not match table")
    return head.apply(row)


def embed_many(table: EmbeddingTable, head: LinearHead | None, words) -> np.ndarray:
    rows = table.rows(words)
    if head is None:
        return rows
    if head.d_in != table.dim:
        raise LexiconError("head input dim does not match table")
    return head.apply(rows)


def cosine_sim(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise LexiconError("cosine similarity undefined for zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max()
    e = np.exp(shifted)
    return e / e.sum()


def listener_distribution(
    table: EmbeddingTable,
    head: LinearHead | None,
    clue: str,
    candidates,
) -> Distribution:
    """Literal-listener probabilities: softmax of cosine similarity to the clue."""
    candidates = tuple(candidates)
    if not candidates:
        raise ValueError("candidate list must be nonempty")
    clue_vec = embed(table, head, clue)
    cand_mat = embed_many(table, head, candidates)
    norms = np.linalg.norm(cand_mat, axis=1)
    clue_norm = float(np.linalg.norm(clue_vec))
    if clue_norm == 0.0 or np.any(norms == 0.0):
        raise LexiconError("zero-norm embedding among clue/candidates")
    sims = (cand_mat @ clue_vec) / (norms * clue_norm)
    return Distribution(support=candidates, probs=softmax(sims))
