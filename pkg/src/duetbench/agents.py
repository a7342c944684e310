"""Clue givers and guessers: literal, pragmatic, and culture-adaptive.

The literal giver picks the clue most similar to some goal word. The
pragmatic giver scores candidate clues by how the modeled listener would
interpret them: log probability of the intended target minus a risk cost
(highest avoid-word probability plus a scaled neutral-word probability).
The culture-adaptive giver keeps one listener model per candidate culture,
maintains a smoothed weight per culture from the guesses it observes, and
gives clues tuned to the currently most plausible culture.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from . import kernels
from .game import Board, GameState, Role, legal_clue, new_game
from .lexicon import (
    Distribution,
    EmbeddingTable,
    LexiconError,
    LinearHead,
    embed_many,
    listener_distribution,
)

_ROLE_CODE = {Role.GOAL: kernels.ROLE_GOAL, Role.AVOID: kernels.ROLE_AVOID,
              Role.NEUTRAL: kernels.ROLE_NEUTRAL}


class AgentError(ValueError):
    pass


@dataclass(frozen=True)
class RsaConfig:
    """Pragmatic-giver knobs. Defaults follow the tuned values alpha=0.5, delta=0.1."""

    alpha: float = 0.5
    delta: float = 0.1
    clue_vocab_size: int = 2000
    max_targets: int = 1

    def __post_init__(self):
        if self.alpha <= 0:
            raise AgentError("alpha must be > 0")
        if self.delta < 0:
            raise AgentError("delta must be >= 0")
        if self.clue_vocab_size < 1 or self.max_targets < 1:
            raise AgentError("clue_vocab_size and max_targets must be >= 1")


@dataclass(frozen=True)
class Listener:
    """An embedding table plus an optional trained head: one interpretive model."""

    table: EmbeddingTable
    head: LinearHead | None = None

    def distribution(self, clue: str, candidates) -> Distribution:
        return listener_distribution(self.table, self.head, clue, candidates)

    def unit_vectors(self, words) -> np.ndarray:
        vecs = embed_many(self.table, self.head, words)
        norms = np.linalg.norm(vecs, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise LexiconError("zero-norm embedding in word set")
        return vecs / norms


@runtime_checkable
class GuesserPolicy(Protocol):
    """Anything that maps (clue, unrevealed words) to one of those words."""

    def guess(self, clue: str, unrevealed: Sequence[str]) -> str: ...


def literal_guess(listener: Listener, clue: str, unrevealed: Sequence[str]) -> str:
    """Most probable word under the literal listener; ties go lexicographically."""
    return listener.distribution(clue, unrevealed).argmax_word()


@dataclass(frozen=True)
class EmbeddingGuesser:
    listener: Listener

    def guess(self, clue: str, unrevealed: Sequence[str]) -> str:
        return literal_guess(self.listener, clue, unrevealed)

    def distribution(self, clue: str, unrevealed: Sequence[str]) -> Distribution:
        return self.listener.distribution(clue, unrevealed)


@dataclass(frozen=True)
class ScriptedGuesser:
    """Deterministic guesser driven by a callable; used for tests and baselines."""

    policy: object  # callable (clue, unrevealed) -> word

    def guess(self, clue: str, unrevealed: Sequence[str]) -> str:
        word = self.policy(clue, unrevealed)
        if word not in unrevealed:
            raise AgentError(f"scripted guess {word!r} not among unrevealed words")
        return word


def first_word_guesser() -> ScriptedGuesser:
    """Always guesses the lexicographically smallest unrevealed word."""
    return ScriptedGuesser(policy=lambda clue, unrevealed: min(unrevealed))


def clue_candidates(listener: Listener, board: Board, cfg: RsaConfig) -> tuple[str, ...]:
    """The frozen per-game clue search space.

    Takes the first clue_vocab_size vocabulary words (vector files are
    frequency-ordered, so file order is the frequency ranking) that are legal
    clues for the fresh board. Frozen at game start: words revealed later do
    not re-admit clues.
    """
    state = new_game(board)
    vocab = listener.table
    out = []
    for w in listener.table.vocab:
        if legal_clue(w, state, vocab=vocab):
            out.append(w)
            if len(out) >= cfg.clue_vocab_size:
                break
    if not out:
        raise AgentError("empty legal clue vocabulary for this board")
    return tuple(out)


class _BoardContext:
    """Per-(listener, board) precomputation shared by all turns of one game."""

    def __init__(self, listener: Listener, board: Board, cfg: RsaConfig):
        self.listener = listener
        self.board = board
        self.clue_words = clue_candidates(listener, board, cfg)
        self.clue_matrix = listener.unit_vectors(self.clue_words)
        self.word_matrix = listener.unit_vectors(board.words)
        self.word_index = {w: i for i, w in enumerate(board.words)}

    def sims(self, words: Sequence[str]) -> np.ndarray:
        cols = [self.word_index[w] for w in words]
        return self.clue_matrix @ self.word_matrix[cols].T


def _argmax_pair(
    scores: np.ndarray, clue_words: Sequence[str], words: Sequence[str]
) -> tuple[str, str]:
    """Global argmax over (clue, word) cells; exact ties resolve to the
    lexicographically smallest clue, then target."""
    best = scores.max()
    if not np.isfinite(best):
        raise AgentError("no scorable (clue, target) pair")
    rows, cols = np.nonzero(scores == best)
    return min((clue_words[r], words[c]) for r, c in zip(rows, cols))


def rsa_cost(listener: Listener, clue: str, state: GameState, delta: float) -> float:
    """Risk of a clue: max avoid probability + delta * max neutral probability.

    Probabilities come from the listener's distribution over all unrevealed
    words; exhausted role classes contribute zero.
    """
    unrevealed = state.unrevealed()
    dist = listener.distribution(clue, unrevealed)
    max_avoid = 0.0
    max_neutral = 0.0
    for w, p in zip(dist.support, dist.probs):
        role = state.board.role_of(w)
        if role is Role.AVOID:
            max_avoid = max(max_avoid, float(p))
        elif role is Role.NEUTRAL:
            max_neutral = max(max_neutral, float(p))
    return max_avoid + delta * max_neutral


class LiteralGiver:
    """Picks the (clue, goal) pair with the highest raw similarity."""

    def __init__(self, listener: Listener, board: Board, cfg: RsaConfig | None = None):
        self.cfg = cfg or RsaConfig()
        self.ctx = _BoardContext(listener, board, self.cfg)

    def clue(self, state: GameState) -> tuple[str, str]:
        goals = state.unrevealed_with_role(Role.GOAL)
        if not goals:
            raise AgentError("no unrevealed goal words to target")
        sims = self.ctx.sims(goals)
        return _argmax_pair(sims, self.ctx.clue_words, goals)


class RsaGiver:
    """Scores clues by listener informativeness minus avoid/neutral risk."""

    def __init__(self, listener: Listener, board: Board, cfg: RsaConfig | None = None):
        self.cfg = cfg or RsaConfig()
        self.ctx = _BoardContext(listener, board, self.cfg)

    def scores(self, state: GameState) -> tuple[np.ndarray, tuple[str, ...]]:
        """Score matrix over (clue, unrevealed word); non-goal columns are -inf.

        The rationality scale alpha multiplies every score and therefore
        never changes the argmax; it is applied anyway so the returned values
        are the actual speaker utilities.
        """
        unrevealed = state.unrevealed()
        if not unrevealed:
            raise AgentError("no unrevealed words")
        roles = np.array(
            [_ROLE_CODE[state.board.role_of(w)] for w in unrevealed], dtype=np.int8
        )
        sims = self.ctx.sims(unrevealed)
        raw = kernels.pair_scores(sims, roles, self.cfg.delta)
        return self.cfg.alpha * raw, unrevealed

    def clue(self, state: GameState) -> tuple[str, str]:
        if not state.unrevealed_with_role(Role.GOAL):
            raise AgentError("no unrevealed goal words to target")
        scores, unrevealed = self.scores(state)
        return _argmax_pair(scores, self.ctx.clue_words, unrevealed)


@dataclass(frozen=True)
class CulturePosterior:
    """Per-culture belief weights maintained from observed guesses.

    Weights are smoothed listener likelihoods, not a normalized posterior;
    normalized() rescales them to sum to one for reporting and display.
    Setting normalize=True renormalizes after every update instead. Culture
    selection is an argmax, which both conventions agree on.
    """

    cultures: tuple[str, ...]
    listeners: tuple[Listener, ...]
    weights: np.ndarray
    beta: float = 0.5
    normalize: bool = False

    def __post_init__(self):
        if not self.cultures or len(self.cultures) != len(self.listeners):
            raise AgentError("posterior needs one listener per culture")
        if len(self.weights) != len(self.cultures):
            raise AgentError("one weight per culture required")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights < 0) or np.any(
            self.weights > 1
        ):
            raise AgentError("weights must be finite and within [0, 1]")
        if not 0.0 <= self.beta <= 1.0:
            raise AgentError("beta must be within [0, 1]")

    @classmethod
    def uniform(cls, cultures, listeners, beta: float = 0.5) -> "CulturePosterior":
        cultures = tuple(cultures)
        return cls(
            cultures=cultures,
            listeners=tuple(listeners),
            weights=np.full(len(cultures), 1.0 / len(cultures)),
            beta=beta,
        )

    def normalized(self) -> np.ndarray:
        total = float(self.weights.sum())
        if total == 0.0:
            return np.full(len(self.weights), 1.0 / len(self.weights))
        return self.weights / total

    def listener_for(self, culture: str) -> Listener:
        return self.listeners[self.cultures.index(culture)]


def c3_update(
    posterior: CulturePosterior,
    clue: str,
    observed_guess: str,
    unrevealed: Sequence[str],
) -> CulturePosterior:
    """Smooth each culture's weight toward its likelihood of the observed guess.

    new = beta * old + (1 - beta) * P_culture(guess | clue, unrevealed).
    """
    if observed_guess not in unrevealed:
        raise AgentError(f"observed guess {observed_guess!r} not in candidate set")
    likelihoods = np.array(
        [
            listener.distribution(clue, unrevealed).prob(observed_guess)
            for listener in posterior.listeners
        ]
    )
    new_weights = posterior.beta * posterior.weights + (1 - posterior.beta) * likelihoods
    if posterior.normalize:
        total = float(new_weights.sum())
        if total > 0:
            new_weights = new_weights / total
    return replace(posterior, weights=new_weights)


def c3_select_culture(posterior: CulturePosterior) -> str:
    """Culture with the highest weight; exact ties go to the earliest listed."""
    best = int(np.argmax(posterior.weights))  # argmax returns the first maximum
    return posterior.cultures[best]


class C3Giver:
    """Pragmatic giver that adapts to the guesser's culture during play.

    Owns a CulturePosterior for one game: observe() must be called with every
    guess the guesser makes so the next clue uses the updated belief.
    """

    def __init__(
        self,
        posterior: CulturePosterior,
        board: Board,
        cfg: RsaConfig | None = None,
    ):
        self.cfg = cfg or RsaConfig()
        self.posterior = posterior
        self._givers = {
            culture: RsaGiver(listener, board, self.cfg)
            for culture, listener in zip(posterior.cultures, posterior.listeners)
        }

    def selected_culture(self) -> str:
        return c3_select_culture(self.posterior)

    def clue(self, state: GameState) -> tuple[str, str]:
        return self._givers[self.selected_culture()].clue(state)

    def observe(self, clue: str, guess: str, unrevealed: Sequence[str]) -> None:
        self.posterior = c3_update(self.posterior, clue, guess, unrevealed)


def literal_clue(
    listener: Listener, state: GameState, cfg: RsaConfig | None = None
) -> tuple[str, str]:
    return LiteralGiver(listener, state.board, cfg).clue(state)


def rsa_clue(
    listener: Listener, state: GameState, cfg: RsaConfig | None = None
) -> tuple[str, str]:
    return RsaGiver(listener, state.board, cfg).clue(state)


def c3_clue(
    posterior: CulturePosterior, state: GameState, cfg: RsaConfig | None = None
) -> tuple[str, str]:
    return C3Giver(posterior, state.board, cfg).clue(state)


def wonky_listener(
    prior_usual: Distribution, utterance_likelihood, p_wonky: float
) -> Distribution:
    """Posterior over meanings when the usual prior may not apply.

    The effective prior is a mixture: with probability p_wonky the usual
    prior is replaced by a uniform backoff. The posterior is likelihood times
    that mixture, renormalized.
    """
    likelihood = np.asarray(utterance_likelihood, dtype=np.float64)
    if likelihood.shape != prior_usual.probs.shape:
        raise AgentError("likelihood must align with the prior support")
    if np.any(likelihood < 0):
        raise AgentError("likelihoods must be non-negative")
    if not 0.0 <= p_wonky <= 1.0:
        raise AgentError("p_wonky must be within [0, 1]")
    n = len(likelihood)
    mixed_prior = (1.0 - p_wonky) * prior_usual.probs + p_wonky * (1.0 / n)
    post = likelihood * mixed_prior
    total = post.sum()
    if total == 0.0:
        raise AgentError("posterior is identically zero")
    return Distribution(support=prior_usual.support, probs=post / total)
