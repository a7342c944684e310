import json

import pytest

from duetbench.dataset import (
    DatasetError,
    load_records,
    save_records,
    to_turn_examples,
)


def full_board(goal=9, avoid=3, neutral=13):
    words = (
        [f"g{i:02d}" for i in range(goal)]
        + [f"a{i:02d}" for i in range(avoid)]
        + [f"n{i:02d}" for i in range(neutral)]
    )
    roles = {}
    for w in words:
        roles[w] = {"g": "goal", "a": "avoid", "n": "neutral"}[w[0]]
    return words, roles


def minimal_game(game_id="game1", split="train", player=None):
    words, roles = full_board()
    demo = {"education": "graduate"}
    if player:
        demo["player_id"] = player
    return {
        "game_id": game_id,
        "split": split,
        "giver_demographics": demo,
        "guesser_demographics": {"education": "high school"},
        "turns": [
            {
                "clue": "season",
                "targets": ["g00"],
                "guesses": [{"word": "g00", "outcome": "goal"}],
                "board": {"words": words, "roles": roles},
            },
            {
                "clue": "brick",
                "targets": ["g01", "g02"],
                "guesses": [
                    {"word": "n00", "outcome": "neutral"},
                    {"word": "g01", "outcome": "goal"},
                ],
                "board": {
                    "words": [w for w in words if w != "g00"],
                    "roles": {w: r for w, r in roles.items() if w != "g00"},
                },
            },
        ],
    }


def write_jsonl(tmp_path, payloads, name="games.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(json.dumps(p) for p in payloads) + "\n")
    return path


class TestLoadRecords:
    def test_minimal_file(self, tmp_path):
        records, report = load_records(write_jsonl(tmp_path, [minimal_game()]))
        assert len(records) == 1
        assert report.loaded == 1
        assert not report.errors
        rec = records[0]
        assert rec.split == "train"
        assert rec.turns[0].clue == "season"
        assert rec.turns[1].guesses == (("n00", "neutral"), ("g01", "goal"))

    def test_bad_role_counts_rejected(self, tmp_path):
        bad = minimal_game()
        words, roles = full_board(goal=8, avoid=4)
        bad["turns"][0]["board"] = {"words": words, "roles": roles}
        path = write_jsonl(tmp_path, [bad, minimal_game("game2")])
        records, report = load_records(path)
        assert len(records) == 1
        assert report.errors and report.errors[0][0] == 1
        assert "role counts" in report.errors[0][1]

    def test_invalid_json_line_reported(self, tmp_path):
        path = tmp_path / "games.jsonl"
        path.write_text(json.dumps(minimal_game()) + "\n{not json\n")
        records, report = load_records(path)
        assert len(records) == 1
        assert report.errors[0][0] == 2

    def test_all_invalid_raises(self, tmp_path):
        path = tmp_path / "games.jsonl"
        path.write_text("{}\n")
        with pytest.raises(DatasetError):
            load_records(path)

    def test_disjoint_players_noted(self, tmp_path):
        games = [
            minimal_game("g1", split="train", player="p1"),
            minimal_game("g2", split="validation", player="p2"),
        ]
        _, report = load_records(write_jsonl(tmp_path, games))
        assert any("disjoint" in note for note in report.notes)

    def test_guess_outside_board_rejected(self, tmp_path):
        bad = minimal_game()
        bad["turns"][0]["guesses"] = [{"word": "zebra", "outcome": "goal"}]
        with pytest.raises(DatasetError):
            load_records(write_jsonl(tmp_path, [bad]))

    def test_unknown_split_rejected(self, tmp_path):
        bad = minimal_game(split="dev")
        with pytest.raises(DatasetError):
            load_records(write_jsonl(tmp_path, [bad]))

    def test_round_trip(self, tmp_path):
        records, _ = load_records(write_jsonl(tmp_path, [minimal_game()]))
        out = tmp_path / "copy.jsonl"
        save_records(records, out)
        again, _ = load_records(out)
        assert again == records


class TestToTurnExamples:
    def load(self, tmp_path):
        records, _ = load_records(write_jsonl(tmp_path, [minimal_game()]))
        return records

    def test_human_guesses_selection(self, tmp_path):
        examples, skipped = to_turn_examples(self.load(tmp_path))
        assert skipped == 0
        assert len(examples) == 2
        first = examples[0]
        assert first.clue == "season"
        assert first.board_words[first.selected[0]] == "g00"
        second = examples[1]
        chosen = {second.board_words[i] for i in second.selected}
        assert chosen == {"n00", "g01"}
        assert len(second.board_words) == 24

    def test_giver_targets_selection(self, tmp_path):
        examples, _ = to_turn_examples(self.load(tmp_path), selection="giver_targets")
        second = examples[1]
        chosen = {second.board_words[i] for i in second.selected}
        assert chosen == {"g01", "g02"}

    def test_empty_records(self):
        assert to_turn_examples([]) == ([], 0)

    def test_turn_with_no_selection_skipped(self, tmp_path):
        game = minimal_game()
        game["turns"][1]["guesses"] = []
        records, _ = load_records(write_jsonl(tmp_path, [game]))
        examples, skipped = to_turn_examples(records)
        assert len(examples) == 1
        assert skipped == 1

    def test_unknown_selection_flag(self, tmp_path):
        with pytest.raises(DatasetError):
            to_turn_examples(self.load(tmp_path), selection="oracle")


def test_example_count_identity(tmp_path):
    games = [minimal_game(f"game{i}") for i in range(4)]
    games[2]["turns"][0]["guesses"] = []
    records, _ = load_records(write_jsonl(tmp_path, games))
    examples, skipped = to_turn_examples(records)
    total_turns = sum(len(r.turns) for r in records)
    assert len(examples) + skipped == total_turns
