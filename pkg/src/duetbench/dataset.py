"""Ingestion of recorded Codenames Duet games.

File format: JSONL, one game per line:

    {"game_id": "...", "split": "train",
     "giver_demographics": {"education": "graduate", ...},
     "guesser_demographics": {...},
     "turns": [{"clue": "...", "targets": ["..."],
                "guesses": [{"word": "...", "outcome": "goal|avoid|neutral"}],
                "board": {"words": [...], "roles": {word: role}}}]}

Each turn's board lists the words still unrevealed when the clue was given,
with their roles. The first turn of a game must show a full 25-word board
with the 9/3/13 role split. A conversion guide for third-party logs lives in
the README.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .game import AVOID_COUNT, BOARD_SIZE, GOAL_COUNT, NEUTRAL_COUNT
from .lexicon import normalize_word
from .training import TurnExample

VALID_SPLITS = ("train", "validation", "test")
VALID_OUTCOMES = ("goal", "avoid", "neutral")


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class TurnRecord:
    clue: str
    targets: tuple[str, ...]
    guesses: tuple[tuple[str, str], ...]  # (word, outcome)
    board_words: tuple[str, ...]
    board_roles: dict

    def to_json(self) -> dict:
        return {
            "clue": self.clue,
            "targets": list(self.targets),
            "guesses": [{"word": w, "outcome": o} for w, o in self.guesses],
            "board": {"words": list(self.board_words), "roles": dict(self.board_roles)},
        }


@dataclass(frozen=True)
class GameRecord:
    game_id: str
    turns: tuple[TurnRecord, ...]
    giver_demographics: dict
    guesser_demographics: dict
    split: str

    def to_json(self) -> dict:
        return {
            "game_id": self.game_id,
            "split": self.split,
            "giver_demographics": dict(self.giver_demographics),
            "guesser_demographics": dict(self.guesser_demographics),
            "turns": [t.to_json() for t in self.turns],
        }


@dataclass
class LoadReport:
    total_lines: int = 0
    loaded: int = 0
    errors: list = field(default_factory=list)  # (lineno, message)
    notes: list = field(default_factory=list)

    def summary(self) -> str:
        lines = [f"loaded {self.loaded}/{self.total_lines} records"]
        lines += [f"line {n}: {msg}" for n, msg in self.errors]
        lines += self.notes
        return "\n".join(lines)


def _parse_turn(payload: dict, lineno: int, first: bool) -> TurnRecord:
    try:
        clue = normalize_word(payload["clue"])
        targets = tuple(normalize_word(t) for t in payload["targets"])
        guesses = tuple(
            (normalize_word(g["word"]), g["outcome"]) for g in payload["guesses"]
        )
        board = payload["board"]
        words = tuple(normalize_word(w) for w in board["words"])
        roles = {normalize_word(w): r for w, r in board["roles"].items()}
    except (KeyError, TypeError) as exc:
        raise DatasetError(f"turn is missing field {exc}") from None

    if len(set(words)) != len(words):
        raise DatasetError("board words must be unique")
    for w in words:
        if w not in roles:
            raise DatasetError(f"board word {w!r} has no role")
        if roles[w] not in VALID_OUTCOMES:
            raise DatasetError(f"invalid role {roles[w]!r}")
    for w, outcome in guesses:
        if w not in roles:
            raise DatasetError(f"guess {w!r} references a non-board word")
        if outcome not in VALID_OUTCOMES:
            raise DatasetError(f"invalid guess outcome {outcome!r}")
    for t in targets:
        if t not in roles:
            raise DatasetError(f"target {t!r} references a non-board word")
    if first:
        counts = {r: 0 for r in VALID_OUTCOMES}
        for w in words:
            counts[roles[w]] += 1
        expected = {
            "goal": GOAL_COUNT,
            "avoid": AVOID_COUNT,
            "neutral": NEUTRAL_COUNT,
        }
        if len(words) != BOARD_SIZE or counts != expected:
            raise DatasetError(
                "first turn must show a full board with role counts "
                f"{GOAL_COUNT}/{AVOID_COUNT}/{NEUTRAL_COUNT}, got {counts}"
            )
    return TurnRecord(
        clue=clue, targets=targets, guesses=guesses, board_words=words, board_roles=roles
    )


def _parse_record(payload: dict, lineno: int) -> GameRecord:
    try:
        game_id = str(payload["game_id"])
        split = payload["split"]
        turns_raw = payload["turns"]
    except (KeyError, TypeError) as exc:
        raise DatasetError(f"record is missing field {exc}") from None
    if split not in VALID_SPLITS:
        raise DatasetError(f"invalid split {split!r}")
    if not turns_raw:
        raise DatasetError("record has no turns")
    turns = tuple(
        _parse_turn(t, lineno, first=(i == 0)) for i, t in enumerate(turns_raw)
    )
    return GameRecord(
        game_id=game_id,
        turns=turns,
        giver_demographics=dict(payload.get("giver_demographics", {})),
        guesser_demographics=dict(payload.get("guesser_demographics", {})),
        split=split,
    )


def load_records(path) -> tuple[list[GameRecord], LoadReport]:
    """Load and validate a JSONL game file.

    Invalid lines are dropped and reported rather than aborting the load; a
    file with zero valid records raises.
    """
    report = LoadReport()
    records: list[GameRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            report.total_lines += 1
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                report.errors.append((lineno, f"invalid JSON: {exc.msg}"))
                continue
            try:
                records.append(_parse_record(payload, lineno))
            except DatasetError as exc:
                report.errors.append((lineno, str(exc)))
    if not records:
        raise DatasetError(f"{path}: no valid records ({len(report.errors)} errors)")
    report.loaded = len(records)

    _note_player_overlap(records, report)
    return records, report


def _note_player_overlap(records, report) -> None:
    """Record whether player ids are shared between train and eval splits."""
    ids = {"train": set(), "eval": set()}
    for rec in records:
        bucket = "train" if rec.split == "train" else "eval"
        for demo in (rec.giver_demographics, rec.guesser_demographics):
            pid = demo.get("player_id")
            if pid is not None:
                ids[bucket].add(pid)
    if ids["train"] and ids["eval"]:
        overlap = ids["train"] & ids["eval"]
        if overlap:
            report.notes.append(
                f"{len(overlap)} player ids appear in both train and validation/test"
            )
        else:
            report.notes.append(
                "player ids are disjoint between train and validation/test"
            )


def save_records(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def to_turn_examples(
    records, selection: str = "human_guesses"
) -> tuple[list[TurnExample], int]:
    """Convert records to training examples; returns (examples, skipped count).

    selection="human_guesses" supervises on the words the guesser picked;
    "giver_targets" supervises on the giver's intended targets. Turns whose
    selected set is empty are skipped and counted.
    """
    if selection not in ("human_guesses", "giver_targets"):
        raise DatasetError(f"unknown selection {selection!r}")
    examples: list[TurnExample] = []
    skipped = 0
    for rec in records:
        for turn in rec.turns:
            if selection == "human_guesses":
                chosen = [w for w, _ in turn.guesses]
            else:
                chosen = list(turn.targets)
            index = {w: i for i, w in enumerate(turn.board_words)}
            sel = tuple(sorted({index[w] for w in chosen if w in index}))
            if not sel:
                skipped += 1
                continue
            examples.append(
                TurnExample(
                    clue=turn.clue, board_words=turn.board_words, selected=sel
                )
            )
    return examples, skipped
