"""Gloss similarity score: cosine between context-selected definitions.

The target word's gloss is selected on the original sentence; the candidate
word's gloss on the sentence with the candidate substituted in.  Candidates
(or targets) the lexicon does not know score exactly 0 rather than erroring,
so unknown words simply contribute nothing to the combined ranking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backends import GlossSelector, SentenceEncoder, cosine
from .dataset_io import LexSubInstance
from .errors import ValidationError
from .lexicon import Lexicon, select_gloss


@dataclass(frozen=True)
class GlossScoreInput:
    """One candidate to be gloss-scored against an instance's target."""

    instance: LexSubInstance
    candidate: str
    pos: str

    def __post_init__(self):
        if not self.candidate or " " in self.candidate:
            raise ValidationError(
                f"candidate must be a non-empty single word, got {self.candidate!r}"
            )


def _target_gloss(
    lexicon: Lexicon,
    gloss_selector: GlossSelector,
    instance: LexSubInstance,
    pos: str,
) -> str | None:
    tokens = list(instance.tokens)
    gloss = select_gloss(
        lexicon, gloss_selector, tokens, instance.target_index, instance.target_token, pos
    )
    if gloss is None and instance.lemma.lower() != instance.target_token.lower():
        # Inflected surface form; the lemma is the dictionary headword.
        gloss = select_gloss(
            lexicon, gloss_selector, tokens, instance.target_index, instance.lemma, pos
        )
    return gloss


def gloss_score(
    lexicon: Lexicon,
    gloss_selector: GlossSelector,
    sentence_encoder: SentenceEncoder,
    score_input: GlossScoreInput,
) -> float:
    """Cosine similarity between the target's and the candidate's glosses.

    Returns exactly 0.0 when either side has no gloss in the lexicon;
    backend failures propagate instead.
    """
    instance = score_input.instance
    target_gloss = _target_gloss(lexicon, gloss_selector, instance, score_input.pos)
    if target_gloss is None:
        return 0.0

    substituted = list(instance.tokens)
    substituted[instance.target_index] = score_input.candidate
    candidate_gloss = select_gloss(
        lexicon,
        gloss_selector,
        substituted,
        instance.target_index,
        score_input.candidate,
        score_input.pos,
    )
    if candidate_gloss is None:
        return 0.0
    return cosine(
        sentence_encoder.encode(target_gloss), sentence_encoder.encode(candidate_gloss)
    )
