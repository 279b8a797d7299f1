"""Perturbation strategies, perturbed prediction, and the candidate softmax."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexsub.backends import EMBED_DIM, StubPredictor, stub_embed
from lexsub.errors import ValidationError
from lexsub.proposal import (
    STRATEGY_KINDS,
    PerturbationStrategy,
    perturb_embedding,
    perturbed_prediction,
    proposal_scores,
)


class FixedScorePredictor:
    """Predictor with a canned score table, for exercising the softmax alone."""

    def __init__(self, scores: dict[str, float]):
        self.scores = dict(scores)

    def input_embedding(self, word: str) -> np.ndarray:
        return stub_embed(word)

    def predict(self, tokens, target_index, replacement_embedding):
        return dict(self.scores)


def _vector(seed: int) -> np.ndarray:
    return np.random.default_rng(seed).normal(size=EMBED_DIM)


class TestPerturbationStrategy:
    def test_kinds(self):
        assert STRATEGY_KINDS == ("mixup", "gaussian", "dropout", "mask", "keep")

    def test_unknown_kind(self):
        with pytest.raises(ValidationError, match="unknown strategy kind"):
            PerturbationStrategy(kind="shuffle")

    def test_missing_required_parameter(self):
        with pytest.raises(ValidationError, match="mixup strategy requires 'lam'"):
            PerturbationStrategy(kind="mixup")

    def test_extraneous_parameter(self):
        with pytest.raises(ValidationError, match="keep strategy does not take 'lam'"):
            PerturbationStrategy(kind="keep", lam=0.5)

    def test_lam_range(self):
        with pytest.raises(ValidationError, match="lam must be in"):
            PerturbationStrategy.mixup(1.5)

    def test_p_range(self):
        with pytest.raises(ValidationError, match="p must be in"):
            PerturbationStrategy.dropout(-0.1)

    def test_negative_sigma(self):
        with pytest.raises(ValidationError, match="sigma must be >= 0"):
            PerturbationStrategy.gaussian(sigma=-1.0)

    def test_constructor_defaults(self):
        assert PerturbationStrategy.mixup().lam == 0.25
        gaussian = PerturbationStrategy.gaussian()
        assert (gaussian.mu, gaussian.sigma, gaussian.seed) == (0.0, 0.01, 0)


class TestPerturbEmbedding:
    def test_mixup_interpolates_with_synonym_mean(self):
        target = _vector(1)
        synonyms = [_vector(2), _vector(3)]
        result = perturb_embedding(PerturbationStrategy.mixup(0.25), target, synonyms)
        expected = 0.25 * target + 0.75 * np.mean(synonyms, axis=0)
        np.testing.assert_array_equal(result, expected)

    def test_mixup_requires_synonyms(self):
        with pytest.raises(ValidationError, match="at least one synonym"):
            perturb_embedding(PerturbationStrategy.mixup(), _vector(1), [])

    def test_mixup_lambda_one_keeps_target(self):
        target = _vector(4)
        result = perturb_embedding(
            PerturbationStrategy.mixup(1.0), target, [_vector(5)]
        )
        assert result.tobytes() == target.tobytes()

    def test_gaussian_reproducible_and_seed_sensitive(self):
        target = _vector(6)
        gaussian = PerturbationStrategy.gaussian(0.0, 0.5, seed=9)
        first = perturb_embedding(gaussian, target, [])
        second = perturb_embedding(gaussian, target, [])
        np.testing.assert_array_equal(first, second)
        other_seed = perturb_embedding(
            PerturbationStrategy.gaussian(0.0, 0.5, seed=10), target, []
        )
        assert not np.array_equal(first, other_seed)

    def test_gaussian_noise_matches_seeded_generator(self):
        target = _vector(6)
        result = perturb_embedding(
            PerturbationStrategy.gaussian(0.5, 0.1, seed=3), target, []
        )
        expected = target + np.random.default_rng(3).normal(0.5, 0.1, size=target.shape)
        np.testing.assert_array_equal(result, expected)

    def test_gaussian_sigma_zero_keeps_target(self):
        target = _vector(7)
        result = perturb_embedding(
            PerturbationStrategy.gaussian(0.0, 0.0, seed=0), target, []
        )
        assert result.tobytes() == target.tobytes()

    def test_dropout_mask_matches_seeded_generator(self):
        target = _vector(8)
        result = perturb_embedding(PerturbationStrategy.dropout(0.3, seed=5), target, [])
        keep_mask = np.random.default_rng(5).random(target.shape) >= 0.3
        np.testing.assert_array_equal(result, target * keep_mask)
        assert ((result == 0.0) | (result == target)).all()

    def test_dropout_extremes(self):
        target = _vector(9)
        kept = perturb_embedding(PerturbationStrategy.dropout(0.0, seed=1), target, [])
        np.testing.assert_array_equal(kept, target)
        zeroed = perturb_embedding(PerturbationStrategy.dropout(1.0, seed=1), target, [])
        np.testing.assert_array_equal(zeroed, np.zeros_like(target))

    def test_mask_zeroes_everything(self):
        result = perturb_embedding(PerturbationStrategy.mask(), _vector(10), [])
        np.testing.assert_array_equal(result, np.zeros(EMBED_DIM))

    def test_keep_returns_an_independent_copy(self):
        target = _vector(11)
        result = perturb_embedding(PerturbationStrategy.keep(), target, [])
        np.testing.assert_array_equal(result, target)
        result[0] += 1.0
        assert result[0] != target[0]

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="dim"):
            perturb_embedding(
                PerturbationStrategy.mixup(), _vector(1), [np.zeros(EMBED_DIM + 1)]
            )


class TestPerturbedPrediction:
    def test_mixup_without_synonyms_uses_default_gaussian_fallback(self):
        predictor = StubPredictor({"bright", "dark"})
        tokens = ["a", "bright", "lamp"]
        from_mixup = perturbed_prediction(
            predictor, tokens, 1, PerturbationStrategy.mixup(), set()
        )
        from_gaussian = perturbed_prediction(
            predictor, tokens, 1, PerturbationStrategy.gaussian(0.0, 0.01, 0), set()
        )
        assert {w: from_mixup[w] for w in predictor.vocabulary} == {
            w: from_gaussian[w] for w in predictor.vocabulary
        }

    def test_explicit_fallback_is_honored(self):
        predictor = StubPredictor({"bright", "dark"})
        tokens = ["a", "bright", "lamp"]
        from_fallback = perturbed_prediction(
            predictor, tokens, 1, PerturbationStrategy.mixup(), set(),
            fallback=PerturbationStrategy.keep(),
        )
        from_keep = perturbed_prediction(
            predictor, tokens, 1, PerturbationStrategy.keep(), set()
        )
        assert {w: from_fallback[w] for w in predictor.vocabulary} == {
            w: from_keep[w] for w in predictor.vocabulary
        }

    def test_synonym_mean_is_order_independent(self):
        predictor = StubPredictor({"bright", "dark"})
        tokens = ["a", "bright", "lamp"]
        scores_a = perturbed_prediction(
            predictor, tokens, 1, PerturbationStrategy.mixup(), {"smart", "clever"}
        )
        scores_b = perturbed_prediction(
            predictor, tokens, 1, PerturbationStrategy.mixup(), {"clever", "smart"}
        )
        assert {w: scores_a[w] for w in predictor.vocabulary} == {
            w: scores_b[w] for w in predictor.vocabulary
        }

    def test_target_index_out_of_range(self):
        predictor = StubPredictor({"bright"})
        with pytest.raises(ValidationError, match="out of range"):
            perturbed_prediction(
                predictor, ["a"], 3, PerturbationStrategy.keep(), set()
            )


class TestProposalScores:
    def test_two_candidate_logistic_form(self):
        # With the keep strategy the target scores 0 and the other candidate
        # scores -d (its embedding distance), so the softmax collapses to a
        # logistic in d.
        predictor = StubPredictor({"cat", "dog"})
        scores = proposal_scores(
            predictor, ["cat"], 0, {"cat", "dog"}, PerturbationStrategy.keep(), set()
        )
        d = float(np.linalg.norm(stub_embed("cat") - stub_embed("dog")))
        assert scores["cat"] == pytest.approx(1.0 / (1.0 + math.exp(-d)), abs=1e-12)
        assert scores["dog"] == pytest.approx(
            math.exp(-d) / (1.0 + math.exp(-d)), abs=1e-12
        )

    def test_restricted_to_candidate_set(self):
        predictor = StubPredictor({"cat", "dog", "cow"})
        scores = proposal_scores(
            predictor, ["cat"], 0, {"cat", "dog"}, PerturbationStrategy.keep(), set()
        )
        assert set(scores) == {"cat", "dog"}

    def test_empty_candidates(self):
        predictor = StubPredictor({"cat"})
        with pytest.raises(ValidationError, match="non-empty"):
            proposal_scores(
                predictor, ["cat"], 0, set(), PerturbationStrategy.keep(), set()
            )

    @given(
        st.dictionaries(
            st.from_regex(r"[a-z]{1,8}", fullmatch=True),
            st.floats(min_value=-50, max_value=50),
            min_size=1,
            max_size=6,
        ),
        st.floats(min_value=-100, max_value=100),
    )
    def test_sums_to_one_and_shift_invariant(self, scores, shift):
        candidates = set(scores)
        base = proposal_scores(
            FixedScorePredictor(scores), ["x"], 0, candidates,
            PerturbationStrategy.keep(), set(),
        )
        assert abs(sum(base.values()) - 1.0) < 1e-9
        shifted = proposal_scores(
            FixedScorePredictor({w: s + shift for w, s in scores.items()}),
            ["x"], 0, candidates, PerturbationStrategy.keep(), set(),
        )
        for word in candidates:
            assert abs(base[word] - shifted[word]) < 1e-9
