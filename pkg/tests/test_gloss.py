"""Gloss similarity: definition selection on both sides plus cosine scoring."""

from __future__ import annotations

import pytest

from lexsub.backends import StubGlossSelector, StubSentenceEncoder, cosine, stub_embed
from lexsub.dataset_io import LexSubInstance
from lexsub.errors import ValidationError
from lexsub.gloss import GlossScoreInput, gloss_score
from lexsub.lexicon import load_lexicon

from conftest import write_lexicon


@pytest.fixture()
def gloss_env(small_lexicon):
    return small_lexicon, StubGlossSelector(), StubSentenceEncoder()


def _score(env, instance, candidate):
    lexicon, selector, encoder = env
    return gloss_score(
        lexicon, selector, encoder, GlossScoreInput(instance, candidate, instance.pos)
    )


class TestGlossScoreInput:
    def test_rejects_multiword_candidate(self):
        instance = LexSubInstance("bright.a", 1, 1, ("a", "bright", "lamp"))
        with pytest.raises(ValidationError, match="single word"):
            GlossScoreInput(instance, "very bright", "a")

    def test_rejects_empty_candidate(self):
        instance = LexSubInstance("bright.a", 1, 1, ("a", "bright", "lamp"))
        with pytest.raises(ValidationError, match="single word"):
            GlossScoreInput(instance, "", "a")


class TestGlossScore:
    def test_identity_candidate_scores_exactly_one(self, gloss_env):
        instance = LexSubInstance("bright.a", 1, 1, ("a", "bright", "lamp"))
        assert _score(gloss_env, instance, "bright") == 1.0

    def test_unknown_candidate_scores_zero(self, gloss_env):
        instance = LexSubInstance("bright.a", 1, 1, ("a", "bright", "lamp"))
        assert _score(gloss_env, instance, "zebra") == 0.0

    def test_unknown_target_scores_zero(self, gloss_env):
        instance = LexSubInstance("zebra.n", 1, 1, ("a", "zebra", "ran"))
        assert _score(gloss_env, instance, "bright") == 0.0

    def test_known_pair_scores_gloss_cosine(self, gloss_env):
        lexicon, selector, encoder = gloss_env
        instance = LexSubInstance("house.n", 1, 1, ("the", "house", "stood"))
        # Both words are single-synset here, so the glosses are forced.
        target_gloss = lexicon.synsets("house", "n")[0].gloss
        candidate_gloss = lexicon.synsets("cottage", "n")[0].gloss
        expected = cosine(stub_embed(target_gloss), stub_embed(candidate_gloss))
        assert _score(gloss_env, instance, "cottage") == expected
        assert 0.0 < expected < 1.0

    def test_candidate_gloss_selected_on_substituted_sentence(self, tmp_path):
        # A selector that keys off the sentence text observes the candidate
        # already substituted in when choosing the candidate's gloss.  Both
        # words carry two senses so the selector is consulted on both sides.
        rows = [
            ("a1", "a", "intelligent", "bright", "", ""),
            ("a2", "a", "emitting light", "bright", "", ""),
            ("a3", "a", "clever", "smart", "", ""),
            ("a4", "a", "stylish", "smart", "", ""),
        ]
        lexicon = load_lexicon(write_lexicon(tmp_path / "lex.tsv", rows))

        class RecordingSelector:
            concurrency_safe = True

            def __init__(self):
                self.sentences = []

            def choose(self, tokens, target_index, glosses):
                self.sentences.append(" ".join(tokens))
                return 0

        selector = RecordingSelector()
        instance = LexSubInstance("bright.a", 1, 1, ("a", "bright", "lamp"))
        gloss_score(
            lexicon,
            selector,
            StubSentenceEncoder(),
            GlossScoreInput(instance, "smart", "a"),
        )
        assert selector.sentences == ["a bright lamp", "a smart lamp"]

    def test_inflected_target_falls_back_to_lemma(self, gloss_env):
        # "ran" is not a lexicon headword; the instance lemma "run" is.
        instance = LexSubInstance("run.v", 1, 1, ("they", "ran", "home"))
        assert _score(gloss_env, instance, "sprint") > 0.0

    def test_backend_failure_propagates(self, small_lexicon):
        class FailingEncoder:
            def encode(self, text):
                raise RuntimeError("encoder down")

        instance = LexSubInstance("bright.a", 1, 1, ("a", "bright", "lamp"))
        with pytest.raises(RuntimeError, match="encoder down"):
            gloss_score(
                small_lexicon,
                StubGlossSelector(),
                FailingEncoder(),
                GlossScoreInput(instance, "smart", "a"),
            )
