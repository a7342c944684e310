import json

import pytest

from conftest import board_from
from duetbench.game import (
    GameError,
    Role,
    Status,
    apply_guess,
    end_turn,
    generate_board,
    legal_clue,
    new_game,
    transcript_json,
)

POOL = [f"word{i:03d}" for i in range(500)]


def make_board(seed=0):
    return generate_board(POOL, seed)


class TestGenerateBoard:
    def test_role_counts(self):
        board = make_board()
        roles = [board.role_of(w) for w in board.words]
        assert roles.count(Role.GOAL) == 9
        assert roles.count(Role.AVOID) == 3
        assert roles.count(Role.NEUTRAL) == 13

    def test_same_seed_identical(self):
        a, b = make_board(11), make_board(11)
        assert a.words == b.words
        assert a.roles == b.roles
        assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(
            b.to_json(), sort_keys=True
        )

    def test_different_seeds_differ(self):
        assert set(make_board(0).words) != set(make_board(1).words)

    def test_pool_too_small(self):
        with pytest.raises(GameError):
            generate_board(POOL[:24], 0)

    def test_duplicates_collapsed_before_size_check(self):
        with pytest.raises(GameError):
            generate_board(POOL[:20] * 3, 0)

    def test_oov_pool_rejected(self):
        with pytest.raises(GameError, match="out-of-vocabulary"):
            generate_board(POOL, 0, vocab=set(POOL[:100]))

    def test_board_json_round_trip(self):
        from duetbench.game import Board

        board = make_board(5)
        again = Board.from_json(board.to_json())
        assert again == board


class TestApplyGuess:
    def test_goal_guess_reveals_and_continues(self):
        state = new_game(make_board())
        goal = state.unrevealed_with_role(Role.GOAL)[0]
        state, outcome = apply_guess(state, goal)
        assert outcome is Role.GOAL
        assert goal in state.revealed
        assert state.status is Status.ONGOING

    def test_ninth_goal_wins(self):
        state = new_game(make_board())
        for goal in state.board.words_with_role(Role.GOAL):
            state, outcome = apply_guess(state, goal)
        assert outcome is Role.GOAL
        assert state.status is Status.WON

    def test_avoid_loses(self):
        state = new_game(make_board())
        avoid = state.unrevealed_with_role(Role.AVOID)[0]
        state, outcome = apply_guess(state, avoid)
        assert outcome is Role.AVOID
        assert state.status is Status.LOST

    def test_neutral_keeps_going_and_turn_advances(self):
        state = new_game(make_board())
        neutral = state.unrevealed_with_role(Role.NEUTRAL)[0]
        state, outcome = apply_guess(state, neutral)
        state = end_turn(state)
        assert outcome is Role.NEUTRAL
        assert state.status is Status.ONGOING
        assert state.turn == 1

    def test_terminal_state_is_absorbing(self):
        state = new_game(make_board())
        avoid = state.unrevealed_with_role(Role.AVOID)[0]
        state, _ = apply_guess(state, avoid)
        with pytest.raises(GameError):
            apply_guess(state, state.unrevealed()[0])

    def test_revealed_word_rejected(self):
        state = new_game(make_board())
        goal = state.unrevealed_with_role(Role.GOAL)[0]
        state, _ = apply_guess(state, goal)
        with pytest.raises(GameError):
            apply_guess(state, goal)

    def test_off_board_word_rejected(self):
        state = new_game(make_board())
        with pytest.raises(GameError):
            apply_guess(state, "not-a-board-word")

    def test_turn_limit_exhaustion_loses(self):
        state = new_game(make_board(), max_turns=2)
        for _ in range(2):
            neutral = state.unrevealed_with_role(Role.NEUTRAL)[0]
            state, _ = apply_guess(state, neutral)
            state = end_turn(state)
        assert state.status is Status.LOST

    def test_win_on_final_turn_beats_exhaustion(self):
        board = board_from(
            goals=[f"g{i}" for i in range(9)],
            avoids=[f"a{i}" for i in range(3)],
            neutrals=[f"n{i}" for i in range(13)],
        )
        state = new_game(board, max_turns=9)
        for i in range(9):
            state, _ = apply_guess(state, f"g{i}")
            state = end_turn(state)
        assert state.status is Status.WON


class TestLegalClue:
    def setup_method(self):
        self.state = new_game(
            board_from(
                goals=["season", "apple", "stone", "g3", "g4", "g5", "g6", "g7", "g8"],
                avoids=["a0", "a1", "a2"],
                neutrals=[f"n{i}" for i in range(13)],
            )
        )

    def test_board_word_is_illegal(self):
        assert not legal_clue("apple", self.state)

    def test_substring_both_directions(self):
        assert not legal_clue("seasonal", self.state)  # contains "season"
        assert not legal_clue("ton", self.state)  # inside "stone"

    def test_clean_word_is_legal(self):
        assert legal_clue("orange", self.state)

    def test_vocab_filter(self):
        assert not legal_clue("orange", self.state, vocab={"pear"})
        assert legal_clue("pear", self.state, vocab={"pear"})

    def test_case_and_whitespace(self):
        assert not legal_clue("Orange", self.state)
        assert not legal_clue("two words", self.state)
        assert not legal_clue("", self.state)

    def test_revealed_words_release_substring_ban(self):
        state, _ = apply_guess(self.state, "season")
        assert legal_clue("seasonal", state)
        # but equality with any board word stays banned
        assert not legal_clue("season", state)


def test_deterministic_transcript_replay():
    board = make_board(3)
    outputs = []
    for _ in range(2):
        state = new_game(board)
        for word in sorted(board.words)[:5]:
            if state.status is not Status.ONGOING:
                break
            if word in state.revealed:
                continue
            state, _ = apply_guess(state, word)
            state = end_turn(state)
        outputs.append(transcript_json(state))
    assert outputs[0] == outputs[1]
