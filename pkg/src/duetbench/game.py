"""Codenames Duet board generation and turn state machine.

A board has 25 words: 9 goal, 3 avoid, 13 neutral. The guesser must reveal
all goal words; revealing an avoid word loses immediately. Games also end in
a loss when the turn limit runs out. Board sampling runs on SplitMix64 so a
(wordpool, seed) pair is reproducible across platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum

from .rng import SplitMix64

GOAL_COUNT = 9
AVOID_COUNT = 3
NEUTRAL_COUNT = 13
BOARD_SIZE = GOAL_COUNT + AVOID_COUNT + NEUTRAL_COUNT

DEFAULT_MAX_TURNS = 15


class Role(str, Enum):
    GOAL = "goal"
    AVOID = "avoid"
    NEUTRAL = "neutral"


class Status(str, Enum):
    ONGOING = "ongoing"
    WON = "won"
    LOST = "lost"


class GameError(ValueError):
    """Illegal board construction or state transition."""


@dataclass(frozen=True)
class Board:
    words: tuple[str, ...]
    roles: dict  # word -> Role
    seed: int

    def __post_init__(self):
        if len(self.words) != BOARD_SIZE or len(set(self.words)) != BOARD_SIZE:
            raise GameError(f"board must have {BOARD_SIZE} unique words")
        counts = {r: 0 for r in Role}
        for w in self.words:
            if w not in self.roles:
                raise GameError(f"word {w!r} has no role")
            counts[Role(self.roles[w])] += 1
        if (
            counts[Role.GOAL] != GOAL_COUNT
            or counts[Role.AVOID] != AVOID_COUNT
            or counts[Role.NEUTRAL] != NEUTRAL_COUNT
        ):
            raise GameError(
                f"role counts must be {GOAL_COUNT}/{AVOID_COUNT}/{NEUTRAL_COUNT}, "
                f"got {counts[Role.GOAL]}/{counts[Role.AVOID]}/{counts[Role.NEUTRAL]}"
            )

    def role_of(self, word: str) -> Role:
        return Role(self.roles[word])

    def words_with_role(self, role: Role) -> tuple[str, ...]:
        return tuple(w for w in self.words if Role(self.roles[w]) is role)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "words": list(self.words),
            "roles": {w: Role(self.roles[w]).value for w in self.words},
        }

    @classmethod
    def from_json(cls, payload: dict) -> "Board":
        return cls(
            words=tuple(payload["words"]),
            roles={w: Role(r) for w, r in payload["roles"].items()},
            seed=int(payload["seed"]),
        )


@dataclass(frozen=True)
class TurnLog:
    clue: str
    targets: tuple[str, ...]
    guesses: tuple[tuple[str, Role], ...]

    def to_json(self) -> dict:
        return {
            "clue": self.clue,
            "targets": list(self.targets),
            "guesses": [{"word": w, "outcome": r.value} for w, r in self.guesses],
        }


@dataclass(frozen=True)
class GameState:
    board: Board
    revealed: frozenset = frozenset()
    turn: int = 0
    history: tuple[TurnLog, ...] = ()
    status: Status = Status.ONGOING
    max_turns: int = DEFAULT_MAX_TURNS

    def unrevealed(self) -> tuple[str, ...]:
        return tuple(w for w in self.board.words if w not in self.revealed)

    def unrevealed_with_role(self, role: Role) -> tuple[str, ...]:
        return tuple(
            w
            for w in self.board.words
            if w not in self.revealed and self.board.role_of(w) is role
        )

    def to_json(self) -> dict:
        payload = self.board.to_json()
        payload["turns"] = [t.to_json() for t in self.history]
        payload["status"] = self.status.value
        return payload


def new_game(board: Board, max_turns: int = DEFAULT_MAX_TURNS) -> GameState:
    if max_turns < 1:
        raise GameError("max_turns must be >= 1")
    return GameState(board=board, max_turns=max_turns)


def generate_board(wordpool, seed: int, vocab=None) -> Board:
    """Deterministically sample a board from the pool.

    Procedure (fixed so other implementations can reproduce it): seed a
    SplitMix64 with `seed`, draw 25 pool positions without replacement by
    partial Fisher-Yates, then assign the first 9 draws as goal, the next 3
    as avoid, and the last 13 as neutral.
    """
    pool: list[str] = []
    seen: set[str] = set()
    for w in wordpool:
        if w not in seen:
            seen.add(w)
            pool.append(w)
    if len(pool) < BOARD_SIZE:
        raise GameError(f"word pool has {len(pool)} unique words, need {BOARD_SIZE}")
    if vocab is not None:
        missing = [w for w in pool if w not in vocab]
        if missing:
            raise GameError(f"word pool contains out-of-vocabulary words: {missing[:5]}")
    rng = SplitMix64(seed)
    drawn = rng.sample_prefix(pool, BOARD_SIZE)
    roles = {}
    for i, w in enumerate(drawn):
        if i < GOAL_COUNT:
            roles[w] = Role.GOAL
        elif i < GOAL_COUNT + AVOID_COUNT:
            roles[w] = Role.AVOID
        else:
            roles[w] = Role.NEUTRAL
    return Board(words=tuple(drawn), roles=roles, seed=seed)


def apply_guess(state: GameState, word: str) -> tuple[GameState, Role]:
    """Reveal one guessed word and advance the game.

    Guessing counts against the turn budget; the loss-by-exhaustion check
    happens after every guess so transcripts never exceed max_turns entries.
    """
    if state.status is not Status.ONGOING:
        raise GameError(f"game already {state.status.value}")
    if word not in state.board.roles:
        raise GameError(f"guess {word!r} is not a board word")
    if word in state.revealed:
        raise GameError(f"guess {word!r} was already revealed")

    outcome = state.board.role_of(word)
    revealed = state.revealed | {word}
    goals_left = sum(
        1 for w in state.board.words_with_role(Role.GOAL) if w not in revealed
    )
    if outcome is Role.AVOID:
        status = Status.LOST
    elif goals_left == 0:
        status = Status.WON
    else:
        status = Status.ONGOING
    next_state = replace(state, revealed=revealed, status=status)
    return next_state, outcome


def end_turn(state: GameState) -> GameState:
    """Close the current turn and apply the turn limit."""
    turn = state.turn + 1
    status = state.status
    if status is Status.ONGOING and turn >= state.max_turns:
        status = Status.LOST
    return replace(state, turn=turn, status=status)


def log_turn(state: GameState, log: TurnLog) -> GameState:
    return replace(state, history=state.history + (log,))


def legal_clue(clue: str, state: GameState, vocab=None) -> bool:
    """Clue legality: one lowercase token, in vocabulary, no board-word overlap.

    Equality with any board word is banned outright; substring overlap (in
    either direction) is only checked against unrevealed words.
    """
    if not clue or clue != clue.lower() or any(ch.isspace() for ch in clue):
        return False
    if vocab is not None and clue not in vocab:
        return False
    if clue in state.board.roles:
        return False
    for w in state.unrevealed():
        if clue in w or w in clue:
            return False
    return True


def transcript_json(state: GameState) -> str:
    return json.dumps(state.to_json(), sort_keys=True)
