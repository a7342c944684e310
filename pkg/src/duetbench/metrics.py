"""Alignment metrics against human play, and win-rate aggregation.

Four alignment ratios, all summed over turns before dividing:
  giver target accuracy  = matched human targets / total human targets
  clue accuracy          = matched human clues   / total human clues
  guess accuracy         = matched human guesses / total human guesses
  guesser target accuracy= human targets guessed by the simulated guesser
                           / total human targets
Matching is exact string equality after lowercasing. A ratio with a zero
denominator is reported as None, never as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lexicon import normalize_word


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class SimulatedTurn:
    """What the simulated agents produced for one recorded turn."""

    targets: tuple[str, ...] = ()
    clue: str | None = None
    guesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class Ratio:
    numerator: int
    denominator: int

    @property
    def value(self) -> float | None:
        if self.denominator == 0:
            return None
        return self.numerator / self.denominator


@dataclass(frozen=True)
class AlignmentReport:
    giver_target_accuracy: Ratio
    clue_accuracy: Ratio
    guess_accuracy: Ratio
    guesser_target_accuracy: Ratio

    def to_json(self) -> dict:
        out = {}
        for name in (
            "giver_target_accuracy",
            "clue_accuracy",
            "guess_accuracy",
            "guesser_target_accuracy",
        ):
            ratio: Ratio = getattr(self, name)
            out[name] = {
                "value": ratio.value,
                "numerator": ratio.numerator,
                "denominator": ratio.denominator,
            }
        return out

    def csv_row(self) -> dict:
        """Flat row for spreadsheet-style aggregation; None stays empty."""
        row = {}
        for name, payload in self.to_json().items():
            row[name] = "" if payload["value"] is None else f"{payload['value']:.6f}"
        return row


def _norm_set(words) -> set:
    return {normalize_word(w) for w in words}


def alignment(simulated, human_records) -> AlignmentReport:
    """Compare per-turn simulated outputs with recorded human turns.

    `simulated` must contain one SimulatedTurn per human turn, in game order
    (games concatenated); misaligned lengths are an error rather than a
    silent truncation.
    """
    human_turns = [turn for rec in human_records for turn in rec.turns]
    simulated = list(simulated)
    if len(simulated) != len(human_turns):
        raise MetricsError(
            f"{len(simulated)} simulated turns vs {len(human_turns)} human turns"
        )

    tgt_num = tgt_den = 0
    clue_num = clue_den = 0
    guess_num = guess_den = 0
    gt_num = gt_den = 0
    for sim, turn in zip(simulated, human_turns):
        human_targets = _norm_set(turn.targets)
        human_guesses = _norm_set(w for w, _ in turn.guesses)
        sim_targets = _norm_set(sim.targets)
        sim_guesses = _norm_set(sim.guesses)

        tgt_den += len(human_targets)
        tgt_num += len(human_targets & sim_targets)

        clue_den += 1
        if sim.clue is not None and normalize_word(sim.clue) == normalize_word(turn.clue):
            clue_num += 1

        guess_den += len(human_guesses)
        guess_num += len(human_guesses & sim_guesses)

        gt_den += len(human_targets)
        gt_num += len(human_targets & sim_guesses)

    return AlignmentReport(
        giver_target_accuracy=Ratio(tgt_num, tgt_den),
        clue_accuracy=Ratio(clue_num, clue_den),
        guess_accuracy=Ratio(guess_num, guess_den),
        guesser_target_accuracy=Ratio(gt_num, gt_den),
    )


@dataclass(frozen=True)
class WinRateReport:
    wins: int
    games: int
    rate: float
    stderr: float
    runs: int
    single_run: bool
    errored: int = 0

    def to_json(self) -> dict:
        return {
            "wins": self.wins,
            "games": self.games,
            "rate": self.rate,
            "stderr": self.stderr,
            "runs": self.runs,
            "single_run": self.single_run,
            "errored": self.errored,
        }

    def csv_row(self) -> dict:
        return {
            "wins": self.wins,
            "games": self.games,
            "rate": f"{self.rate:.6f}",
            "stderr": f"{self.stderr:.6f}",
            "runs": self.runs,
            "errored": self.errored,
        }


def win_rate(results_by_run, errored: int = 0) -> WinRateReport:
    """Pooled win rate plus the standard error of the per-run rates.

    `results_by_run` is a list of runs, each a list of booleans (won?).
    stderr is the sample standard deviation of per-run rates divided by
    sqrt(#runs); a single run reports stderr 0 and is flagged.
    """
    runs = [list(r) for r in results_by_run]
    if not runs or any(len(r) == 0 for r in runs):
        raise MetricsError("need at least one run with at least one game")
    wins = sum(sum(bool(x) for x in r) for r in runs)
    games = sum(len(r) for r in runs)
    rate = wins / games
    per_run = [sum(bool(x) for x in r) / len(r) for r in runs]
    if len(runs) == 1 or len(set(per_run)) == 1:
        stderr = 0.0
    else:
        mean = sum(per_run) / len(per_run)
        var = sum((x - mean) ** 2 for x in per_run) / (len(per_run) - 1)
        stderr = math.sqrt(var) / math.sqrt(len(per_run))
    return WinRateReport(
        wins=wins,
        games=games,
        rate=rate,
        stderr=stderr,
        runs=len(runs),
        single_run=len(runs) == 1,
        errored=errored,
    )
