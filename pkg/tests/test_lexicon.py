import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import table_from
from duetbench.lexicon import (
    Distribution,
    LexiconError,
    LinearHead,
    OOVError,
    cosine_sim,
    embed,
    listener_distribution,
    load_embeddings,
)


def write_vec_file(tmp_path, text):
    path = tmp_path / "vecs.txt"
    path.write_text(text)
    return path


class TestLoadEmbeddings:
    def test_basic_three_line_file(self, tmp_path):
        path = write_vec_file(tmp_path, "cat 1.0 2.0\ndog 3.0 4.0\neel 5.0 6.0\n")
        table = load_embeddings(path)
        assert table.vocab == ("cat", "dog", "eel")
        assert table.dim == 2
        assert np.array_equal(table.row("dog"), [3.0, 4.0])

    def test_vocab_limit_truncates(self, tmp_path):
        path = write_vec_file(tmp_path, "a 1 2\nb 3 4\nc 5 6\n")
        assert load_embeddings(path, vocab_limit=2).vocab == ("a", "b")

    def test_malformed_component_reports_line(self, tmp_path):
        path = write_vec_file(tmp_path, "cat 1.0 x\n")
        with pytest.raises(LexiconError, match=":1"):
            load_embeddings(path)

    def test_inconsistent_dimension(self, tmp_path):
        path = write_vec_file(tmp_path, "a 1 2\nb 3\n")
        with pytest.raises(LexiconError, match="dimension"):
            load_embeddings(path)

    def test_empty_file(self, tmp_path):
        with pytest.raises(LexiconError):
            load_embeddings(write_vec_file(tmp_path, "\n"))

    def test_duplicates_keep_first(self, tmp_path):
        path = write_vec_file(tmp_path, "a 1 2\na 9 9\nb 3 4\n")
        table = load_embeddings(path)
        assert np.array_equal(table.row("a"), [1.0, 2.0])

    def test_uppercase_normalized(self, tmp_path):
        table = load_embeddings(write_vec_file(tmp_path, "CaT 1 2\n"))
        assert "cat" in table


class TestEmbed:
    def test_identity_head_is_bit_exact(self):
        table = table_from({"a": [1.5, -2.5], "b": [0.25, 0.75]})
        head = LinearHead.identity(2)
        assert np.array_equal(embed(table, head, "a"), table.row("a"))

    def test_hand_matrix_multiply(self):
        table = table_from({"a": [1.0, 3.0]})
        head = LinearHead(weight=np.array([[2.0, 0.0], [0.0, 2.0]]))
        assert np.allclose(embed(table, head, "a"), [2.0, 6.0])

    def test_oov_raises(self):
        table = table_from({"a": [1.0, 0.0]})
        with pytest.raises(OOVError):
            embed(table, None, "zzz")

    def test_bias_applied(self):
        table = table_from({"a": [1.0, 1.0]})
        head = LinearHead(weight=np.eye(2), bias=np.array([1.0, -1.0]))
        assert np.allclose(embed(table, head, "a"), [2.0, 0.0])


class TestCosine:
    def test_identical_vectors(self):
        assert cosine_sim(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_sim(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_45_degrees(self):
        got = cosine_sim(np.array([1.0, 0.0]), np.array([1.0, 1.0]))
        assert got == pytest.approx(1 / math.sqrt(2), abs=1e-6)

    def test_zero_vector_degenerate(self):
        with pytest.raises(LexiconError):
            cosine_sim(np.zeros(2), np.array([1.0, 0.0]))

    @given(
        st.lists(st.floats(-5, 5), min_size=3, max_size=3),
        st.floats(0.1, 50.0),
    )
    def test_scale_invariance(self, vec, scale):
        a = np.asarray(vec)
        if np.linalg.norm(a) < 1e-6:
            return
        b = np.array([0.3, -1.2, 2.0])
        assert cosine_sim(a * scale, b) == pytest.approx(cosine_sim(a, b), abs=1e-9)


class TestListenerDistribution:
    def test_identical_similarities_give_uniform(self):
        # Both candidates at the same angle from the clue.
        table = table_from(
            {"clue": [1.0, 0.0], "x": [1.0, 1.0], "y": [1.0, -1.0]}
        )
        dist = listener_distribution(table, None, "clue", ["x", "y"])
        assert np.allclose(dist.probs, [0.5, 0.5])

    def test_log2_similarity_gap_gives_two_thirds(self):
        # Candidate sims differing by ln 2 give softmax (2/3, 1/3).
        s1, s2 = 0.9, 0.9 - math.log(2)
        table = table_from(
            {
                "clue": [1.0, 0.0],
                "x": [s1, math.sqrt(1 - s1**2)],
                "y": [s2, math.sqrt(1 - s2**2)],
            }
        )
        dist = listener_distribution(table, None, "clue", ["x", "y"])
        assert dist.probs[0] == pytest.approx(2 / 3, abs=1e-9)
        assert dist.probs[1] == pytest.approx(1 / 3, abs=1e-9)

    def test_clue_scale_invariance(self):
        table = table_from({"clue": [0.2, 0.4], "big": [1.0, 2.0], "x": [1, 0], "y": [0, 1]})
        scaled = table_from({"clue": [1.0, 2.0], "big": [1.0, 2.0], "x": [1, 0], "y": [0, 1]})
        d1 = listener_distribution(table, None, "clue", ["x", "y"])
        d2 = listener_distribution(scaled, None, "clue", ["x", "y"])
        assert np.allclose(d1.probs, d2.probs)

    def test_empty_candidates(self):
        table = table_from({"clue": [1.0, 0.0]})
        with pytest.raises(ValueError):
            listener_distribution(table, None, "clue", [])

    def test_oov_clue(self):
        table = table_from({"x": [1.0, 0.0]})
        with pytest.raises(OOVError):
            listener_distribution(table, None, "nope", ["x"])

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_distribution_sums_to_one(self, seed):
        rng = np.random.default_rng(seed)
        words = {f"w{i}": rng.normal(size=4) for i in range(6)}
        if any(np.linalg.norm(v) < 1e-3 for v in words.values()):
            return
        table = table_from(words)
        dist = listener_distribution(table, None, "w0", [f"w{i}" for i in range(1, 6)])
        assert abs(float(dist.probs.sum()) - 1.0) < 1e-9
        assert np.all(dist.probs >= 0)

    def test_adding_candidate_never_raises_existing_probability(self):
        rng = np.random.default_rng(5)
        words = {f"w{i}": rng.normal(size=6) for i in range(8)}
        table = table_from(words)
        small = listener_distribution(table, None, "w0", ["w1", "w2", "w3"])
        large = listener_distribution(table, None, "w0", ["w1", "w2", "w3", "w4"])
        for w in ("w1", "w2", "w3"):
            assert large.prob(w) <= small.prob(w) + 1e-12


class TestDistributionType:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            Distribution(support=("a", "b"), probs=np.array([0.6, 0.6]))

    def test_argmax_tie_breaks_lexicographically(self):
        dist = Distribution(support=("zeta", "beta", "kappa"), probs=np.array([0.4, 0.4, 0.2]))
        assert dist.argmax_word() == "beta"


class TestHeadJson:
    def test_round_trip(self, tmp_path):
        head = LinearHead(
            weight=np.array([[1.0, 2.0], [3.0, 4.0]]),
            bias=np.array([0.5, -0.5]),
            temperature=1.25,
        )
        path = tmp_path / "head.json"
        head.save(path)
        loaded = LinearHead.load(path)
        assert np.array_equal(loaded.weight, head.weight)
        assert np.array_equal(loaded.bias, head.bias)
        assert loaded.temperature == head.temperature

    def test_shape_mismatch_rejected(self):
        with pytest.raises(LexiconError):
            LinearHead.from_json({"d_in": 3, "d_out": 2, "weight": [[1, 2]], "bias": None})
