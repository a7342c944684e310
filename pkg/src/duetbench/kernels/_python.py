"""Numpy implementation of the clue-scoring kernel.

This is the reference semantics; the compiled extension in _core.pyx must
match it to float64 round-off. Kept vectorized so the fallback is still
usable for full experiment runs.
"""

import numpy as np

ROLE_GOAL = 0
ROLE_AVOID = 1
ROLE_NEUTRAL = 2


def pair_scores(sims: np.ndarray, roles: np.ndarray, delta: float) -> np.ndarray:
    """Pragmatic clue/target scores from a similarity matrix.

    sims: (n_clues, n_words) cosine similarities between each candidate clue
    and each unrevealed board word. roles: per-word code (0 goal / 1 avoid /
    2 neutral). For every clue row the listener probability is the softmax of
    the row; the clue's cost is its highest avoid-word probability plus delta
    times its highest neutral-word probability (empty maxima count as zero).

    Returns (n_clues, n_words): log listener probability minus cost at goal
    columns, -inf elsewhere.
    """
    sims = np.asarray(sims, dtype=np.float64)
    roles = np.asarray(roles, dtype=np.int8)
    if sims.ndim != 2 or roles.shape != (sims.shape[1],):
        raise ValueError("sims must be (n_clues, n_words) with one role per word")

    m = sims.max(axis=1, keepdims=True)
    e = np.exp(sims - m)
    z = e.sum(axis=1, keepdims=True)
    log_p = sims - m - np.log(z)

    avoid = roles == ROLE_AVOID
    neutral = roles == ROLE_NEUTRAL
    probs = e / z
    max_avoid = probs[:, avoid].max(axis=1) if avoid.any() else np.zeros(len(sims))
    max_neutral = probs[:, neutral].max(axis=1) if neutral.any() else np.zeros(len(sims))
    cost = max_avoid + delta * max_neutral

    scores = log_p - cost[:, None]
    scores[:, roles != ROLE_GOAL] = -np.inf
    return scores
