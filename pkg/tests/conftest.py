import numpy as np
import pytest

from duetbench.game import Board, Role
from duetbench.lexicon import EmbeddingTable


def table_from(mapping) -> EmbeddingTable:
    """EmbeddingTable from {word: vector}, in dict order."""
    vocab = tuple(mapping)
    vectors = np.array([np.asarray(mapping[w], dtype=np.float64) for w in vocab])
    return EmbeddingTable(vocab=vocab, vectors=vectors)


def board_from(goals, avoids, neutrals, seed=0) -> Board:
    words = tuple(goals) + tuple(avoids) + tuple(neutrals)
    roles = {}
    roles.update({w: Role.GOAL for w in goals})
    roles.update({w: Role.AVOID for w in avoids})
    roles.update({w: Role.NEUTRAL for w in neutrals})
    return Board(words=words, roles=roles, seed=seed)


@pytest.fixture
def random_table():
    """60 words with random unit vectors; enough for a 25-word board plus clues."""
    rng = np.random.default_rng(42)
    words = [f"w{i:02d}" for i in range(60)]
    vecs = rng.normal(size=(60, 16))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return table_from(dict(zip(words, vecs)))
