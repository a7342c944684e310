"""Interactive evaluation: fixed seeded board suites and batch games.

An experiment plays giver vs guesser on a fixed suite of boards (seeds
base_seed .. base_seed+board_count-1) for a number of runs, then aggregates
wins. Boards never depend on the agents, so methods are always compared on
identical games. With deterministic agents, repeated runs are identical and
the reported standard error is zero.
"""

from __future__ import annotations

import json
import urllib.request
from dataclasses import dataclass, field, replace

from .agents import (
    C3Giver,
    CulturePosterior,
    EmbeddingGuesser,
    Listener,
    LiteralGiver,
    RsaConfig,
    RsaGiver,
    ScriptedGuesser,
    first_word_guesser,
)
from .game import (
    Board,
    GameState,
    Role,
    Status,
    TurnLog,
    apply_guess,
    end_turn,
    generate_board,
    log_turn,
    new_game,
)
from .lexicon import EmbeddingTable
from .metrics import WinRateReport, win_rate

GIVER_KINDS = ("literal", "rsa", "rsa_c3")
GUESSER_KINDS = ("embedding", "scripted", "external")


class HarnessError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    giver_kind: str
    giver_cultures: tuple[str, ...] = ()
    guesser_kind: str = "embedding"
    guesser_culture: str | None = None
    board_count: int = 100
    base_seed: int = 0
    runs: int = 3
    rsa: RsaConfig = field(default_factory=RsaConfig)
    beta: float = 0.5
    max_turns: int = 15
    guesses_per_turn: int = 1
    external_url: str | None = None

    def __post_init__(self):
        if self.giver_kind not in GIVER_KINDS:
            raise HarnessError(f"unknown giver kind {self.giver_kind!r}")
        if self.guesser_kind not in GUESSER_KINDS:
            raise HarnessError(f"unknown guesser kind {self.guesser_kind!r}")
        if self.board_count < 1 or self.runs < 1:
            raise HarnessError("board_count and runs must be >= 1")
        if self.giver_kind == "rsa_c3" and not self.giver_cultures:
            raise HarnessError("rsa_c3 giver needs at least one culture")
        if self.giver_kind in ("literal", "rsa") and len(self.giver_cultures) > 1:
            raise HarnessError(f"{self.giver_kind} giver takes at most one culture")
        if self.guesses_per_turn < 1:
            raise HarnessError("guesses_per_turn must be >= 1")

    def to_json(self) -> dict:
        out = {
            "giver_kind": self.giver_kind,
            "giver_cultures": list(self.giver_cultures),
            "guesser_kind": self.guesser_kind,
            "guesser_culture": self.guesser_culture,
            "board_count": self.board_count,
            "base_seed": self.base_seed,
            "runs": self.runs,
            "rsa": {
                "alpha": self.rsa.alpha,
                "delta": self.rsa.delta,
                "clue_vocab_size": self.rsa.clue_vocab_size,
                "max_targets": self.rsa.max_targets,
            },
            "beta": self.beta,
            "max_turns": self.max_turns,
            "guesses_per_turn": self.guesses_per_turn,
        }
        if self.external_url:
            out["external_url"] = self.external_url
        return out


@dataclass
class ExperimentResources:
    """Loaded models and word lists an experiment runs against.

    heads maps culture ids to trained LinearHeads (or None for the raw base
    embeddings, conventionally the culture id "base").
    """

    table: EmbeddingTable
    wordpool: tuple[str, ...]
    heads: dict = field(default_factory=dict)
    scripted_policy: object = None
    external_guess: object = None

    def listener(self, culture: str | None) -> Listener:
        if culture is None or culture == "base":
            return Listener(self.table, None)
        if culture not in self.heads:
            raise HarnessError(f"no head loaded for culture {culture!r}")
        return Listener(self.table, self.heads[culture])


def board_suite(cfg: ExperimentConfig, resources: ExperimentResources) -> list[Board]:
    """Boards for seeds base_seed..base_seed+board_count-1, vocab-checked."""
    return [
        generate_board(resources.wordpool, seed, vocab=resources.table)
        for seed in range(cfg.base_seed, cfg.base_seed + cfg.board_count)
    ]


def make_giver(cfg: ExperimentConfig, resources: ExperimentResources, board: Board):
    if cfg.giver_kind == "literal":
        culture = cfg.giver_cultures[0] if cfg.giver_cultures else None
        return LiteralGiver(resources.listener(culture), board, cfg.rsa)
    if cfg.giver_kind == "rsa":
        culture = cfg.giver_cultures[0] if cfg.giver_cultures else None
        return RsaGiver(resources.listener(culture), board, cfg.rsa)
    posterior = CulturePosterior.uniform(
        cfg.giver_cultures,
        [resources.listener(c) for c in cfg.giver_cultures],
        beta=cfg.beta,
    )
    return C3Giver(posterior, board, cfg.rsa)


def make_guesser(cfg: ExperimentConfig, resources: ExperimentResources, run: int):
    # `run` is reserved for stochastic guessers; the built-in ones are
    # deterministic, so runs replay identically.
    if cfg.guesser_kind == "embedding":
        return EmbeddingGuesser(resources.listener(cfg.guesser_culture))
    if cfg.guesser_kind == "scripted":
        if resources.scripted_policy is not None:
            return ScriptedGuesser(resources.scripted_policy)
        return first_word_guesser()
    if resources.external_guess is not None:
        return ScriptedGuesser(resources.external_guess)
    if not cfg.external_url:
        raise HarnessError("external guesser needs external_url or a callable")
    return ScriptedGuesser(http_guess_adapter(cfg.external_url))


def http_guess_adapter(url: str, timeout: float = 10.0):
    """Remote guesser client: POST {"clue", "candidates"} -> {"word"}."""

    def guess(clue, unrevealed):
        body = json.dumps({"clue": clue, "candidates": list(unrevealed)}).encode()
        req = urllib.request.Request(
            url, data=body, headers={"Content-Type": "application/json"}
        )
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return json.loads(resp.read())["word"]

    return guess


@dataclass
class GameResult:
    board: Board
    state: GameState | None
    won: bool
    errored: bool = False
    error: str | None = None
    posterior_trace: list = field(default_factory=list)
    run: int = 0

    def to_json(self) -> dict:
        out = {
            "run": self.run,
            "seed": self.board.seed,
            "won": self.won,
            "errored": self.errored,
        }
        if self.error:
            out["error"] = self.error
        if self.state is not None:
            out.update(self.state.to_json())
        if self.posterior_trace:
            out["posterior_trace"] = self.posterior_trace
        return out


def run_game(
    giver,
    guesser,
    board: Board,
    max_turns: int = 15,
    guesses_per_turn: int = 1,
) -> GameResult:
    """Play one game to completion.

    Each turn: the giver emits (clue, target); the guesser guesses; adaptive
    givers observe every guess before the next clue is computed. With
    guesses_per_turn > 1 the guesser keeps guessing while it hits goal words,
    up to the limit. Agent exceptions mark the game errored.
    """
    state = new_game(board, max_turns=max_turns)
    trace: list = []
    try:
        while state.status is Status.ONGOING:
            clue, target = giver.clue(state)
            guesses = []
            for _ in range(guesses_per_turn):
                unrevealed = state.unrevealed()
                word = guesser.guess(clue, unrevealed)
                state, outcome = apply_guess(state, word)
                guesses.append((word, outcome))
                if hasattr(giver, "observe"):
                    giver.observe(clue, word, unrevealed)
                    trace.append(
                        {
                            "turn": state.turn + 1,
                            "clue": clue,
                            "guess": word,
                            "weights": {
                                c: float(w)
                                for c, w in zip(
                                    giver.posterior.cultures,
                                    giver.posterior.normalized(),
                                )
                            },
                        }
                    )
                if outcome is not Role.GOAL or state.status is not Status.ONGOING:
                    break
            state = log_turn(state, TurnLog(clue, (target,), tuple(guesses)))
            state = end_turn(state)
    except Exception as exc:  # agent failure: excluded from win rates
        return GameResult(
            board=board, state=state, won=False, errored=True, error=str(exc),
            posterior_trace=trace,
        )
    return GameResult(
        board=board,
        state=state,
        won=state.status is Status.WON,
        posterior_trace=trace,
    )


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    win: WinRateReport
    results: list  # GameResult, in (run, board seed) order

    def to_json(self) -> dict:
        return {"config": self.config.to_json(), "win_rate": self.win.to_json()}

    def transcripts_jsonl(self) -> str:
        return "\n".join(json.dumps(r.to_json(), sort_keys=True) for r in self.results)


def run_experiment(
    cfg: ExperimentConfig, resources: ExperimentResources, boards=None
) -> ExperimentReport:
    """runs x board_count games; errored games are excluded from the rate.

    `boards` overrides the generated suite (it must still be deterministic
    for reproducible reports); by default seeds base_seed..+board_count-1.
    """
    if boards is None:
        boards = board_suite(cfg, resources)
    results: list[GameResult] = []
    by_run: list[list[bool]] = []
    errored = 0
    for run in range(cfg.runs):
        outcomes: list[bool] = []
        for board in boards:
            giver = make_giver(cfg, resources, board)
            guesser = make_guesser(cfg, resources, run)
            result = run_game(
                giver,
                guesser,
                board,
                max_turns=cfg.max_turns,
                guesses_per_turn=cfg.guesses_per_turn,
            )
            result.run = run
            results.append(result)
            if result.errored:
                errored += 1
            else:
                outcomes.append(result.won)
        if outcomes:
            by_run.append(outcomes)
    if not by_run:
        raise HarnessError("every game errored; no win rate to report")
    return ExperimentReport(
        config=cfg, win=win_rate(by_run, errored=errored), results=results
    )


def sweep(
    alphas, deltas, base: ExperimentConfig, resources: ExperimentResources
) -> list[dict]:
    """Cartesian (alpha, delta) grid on the identical board suite."""
    alphas = list(alphas)
    deltas = list(deltas)
    if not alphas or not deltas:
        raise HarnessError("sweep grid must be nonempty")
    rows = []
    for alpha in alphas:
        for delta in deltas:
            cfg = replace(base, rsa=replace(base.rsa, alpha=alpha, delta=delta))
            report = run_experiment(cfg, resources)
            rows.append(
                {
                    "alpha": alpha,
                    "delta": delta,
                    "wins": report.win.wins,
                    "games": report.win.games,
                    "rate": report.win.rate,
                    "stderr": report.win.stderr,
                    "errored": report.win.errored,
                }
            )
    return rows
