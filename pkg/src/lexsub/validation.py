"""Candidate validation score: attention-weighted per-token cosine drift.

Both the original and the substituted sentence are run through a contextual
token encoder; each position contributes the cosine between its two
contextual vectors, weighted by the encoder's attention from the target
position (taken from the substituted sentence's analysis and renormalized to
sum to 1, so an identity substitution scores exactly 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backends import ContextualTokenEncoder, cosine
from .errors import ScorerError, ValidationError


@dataclass(frozen=True)
class ValidationBreakdown:
    """Per-token cosines, the attention weights applied, and their weighted sum."""

    per_token_cosines: tuple[float, ...]
    weights: tuple[float, ...]
    score: float

    def __post_init__(self):
        if len(self.per_token_cosines) != len(self.weights):
            raise ValidationError("cosines and weights must have equal length")


def validation_score(
    encoder: ContextualTokenEncoder,
    tokens: list[str] | tuple[str, ...],
    target_index: int,
    candidate: str,
    include_target: bool = True,
) -> ValidationBreakdown:
    """Score how little a single-word substitution disturbs the sentence.

    ``include_target=False`` zeroes the target position's own attention
    weight before renormalizing, for studying whether the swapped position
    should judge itself.
    """
    if not tokens:
        raise ValidationError("token list must be non-empty")
    if not candidate or " " in candidate:
        raise ValidationError(
            f"candidate must be a non-empty single word, got {candidate!r}"
        )
    if not 0 <= target_index < len(tokens):
        raise ValidationError(f"target_index {target_index} out of range")

    substituted = list(tokens)
    substituted[target_index] = candidate
    original_analysis = encoder.analyze(list(tokens))
    substituted_analysis = encoder.analyze(substituted)

    cosines = np.array(
        [
            cosine(a, b)
            for a, b in zip(
                original_analysis.token_vectors, substituted_analysis.token_vectors
            )
        ]
    )
    raw_weights = np.array(substituted_analysis.attention_from(target_index), dtype=float)
    if not include_target:
        raw_weights = raw_weights.copy()
        raw_weights[target_index] = 0.0
    total = float(raw_weights.sum())
    if total <= 0.0:
        raise ScorerError("degenerate attention: weights sum to zero")
    weights = raw_weights / total
    return ValidationBreakdown(
        per_token_cosines=tuple(cosines.tolist()),
        weights=tuple(weights.tolist()),
        score=float(np.dot(weights, cosines)),
    )
