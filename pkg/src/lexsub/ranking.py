"""Candidate generation and the weighted four-score ranking.

Candidates come from two sources: lexicon relations (synonyms, hypernyms,
hyponyms of the target) and the highest-scoring predictor vocabulary words
under the perturbed target embedding.  Lexicon candidates take precedence at
the truncation boundary; they exist precisely to reach beyond the
predictor's vocabulary, so they are never crowded out.

Each candidate then receives four component scores (proposal, gloss,
sentence similarity, validation) that a linear combination turns into the
final ranking.  Weight tuning is an exhaustive grid search maximizing the
best measure on a trial set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .backends import (
    ContextualTokenEncoder,
    GlossSelector,
    PairSimilarityModel,
    SentenceEncoder,
    TargetWordPredictor,
)
from .dataset_io import GoldAnnotations, LexSubInstance
from .errors import ScorerError, ValidationError
from .gloss import GlossScoreInput, gloss_score
from .lexicon import Lexicon, all_synonyms, relation_candidates
from .proposal import PerturbationStrategy, perturbed_prediction, proposal_scores
from .sentence import sentence_similarity_score
from .validation import validation_score

DEFAULT_WEIGHTS = (0.05, 0.05, 1.0, 0.5)
DEFAULT_CANDIDATE_COUNT = 30


@dataclass(frozen=True)
class CombinationWeights:
    """Linear-combination weights for (proposal, gloss, sentence, validation).

    Configuration and tuning constrain weights to [0, 1]; the dataclass only
    requires them to be finite and non-negative so that rank-invariance
    under positive scaling stays expressible.
    """

    proposal: float = DEFAULT_WEIGHTS[0]
    gloss: float = DEFAULT_WEIGHTS[1]
    sentence: float = DEFAULT_WEIGHTS[2]
    validation: float = DEFAULT_WEIGHTS[3]

    def __post_init__(self):
        for name in ("proposal", "gloss", "sentence", "validation"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValidationError(f"weight {name} must be finite and >= 0, got {value}")

    def as_array(self) -> np.ndarray:
        return np.array([self.proposal, self.gloss, self.sentence, self.validation])


@dataclass(frozen=True)
class ScoredCandidate:
    """A candidate with its four component scores and the combined score."""

    word: str
    s_p: float
    s_g: float
    s_sim: float
    s_val: float
    final: float


@dataclass
class ScorerBundle:
    """Everything the four component scorers need, wired to one backend set."""

    lexicon: Lexicon
    predictor: TargetWordPredictor
    gloss_selector: GlossSelector
    sentence_encoder: SentenceEncoder
    pair_model: PairSimilarityModel
    token_encoder: ContextualTokenEncoder
    strategy: PerturbationStrategy = field(default_factory=PerturbationStrategy.mixup)
    gaussian_fallback: PerturbationStrategy = field(
        default_factory=PerturbationStrategy.gaussian
    )
    validation_include_target: bool = True

    def concurrency_safe(self) -> bool:
        """True when every backend declares itself safe for concurrent calls."""
        backends = (
            self.predictor,
            self.gloss_selector,
            self.sentence_encoder,
            self.pair_model,
            self.token_encoder,
        )
        return all(getattr(b, "concurrency_safe", False) for b in backends)


def generate_candidates(
    lexicon: Lexicon,
    predictor: TargetWordPredictor,
    instance: LexSubInstance,
    k: int = DEFAULT_CANDIDATE_COUNT,
    strategy: PerturbationStrategy | None = None,
    fallback: PerturbationStrategy | None = None,
) -> list[str]:
    """Up to ``k`` substitute candidates for an instance, lowercased.

    Lexicon relation candidates come first (lexicographically ordered);
    remaining slots are filled with predictor vocabulary words by descending
    perturbed score, ties broken lexicographically.  The target token and
    its lemma are never candidates.  An unknown-to-the-lexicon target simply
    yields an all-predictor list.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if strategy is None:
        strategy = PerturbationStrategy.mixup()
    excluded = {instance.lemma.lower(), instance.target_token.lower()}
    from_lexicon = sorted(
        relation_candidates(lexicon, instance.lemma, instance.pos) - excluded
    )
    if len(from_lexicon) >= k:
        return from_lexicon[:k]

    synonyms = all_synonyms(lexicon, instance.lemma)
    vocabulary_scores = perturbed_prediction(
        predictor, instance.tokens, instance.target_index, strategy, synonyms, fallback
    )
    pooled: dict[str, float] = {}
    for word, score in vocabulary_scores.items():
        lowered = word.lower()
        if not lowered or lowered in excluded or any(ch.isspace() for ch in lowered):
            continue
        if lowered not in pooled or score > pooled[lowered]:
            pooled[lowered] = score
    from_predictor = sorted(
        (w for w in pooled if w not in set(from_lexicon)),
        key=lambda w: (-pooled[w], w),
    )
    return from_lexicon + from_predictor[: k - len(from_lexicon)]


_SCORER_NAMES = ("proposal", "gloss", "sentence", "validation")


def component_scores(
    scorers: ScorerBundle,
    instance: LexSubInstance,
    candidates: list[str],
) -> dict[str, tuple[float, float, float, float]]:
    """The four raw component scores per candidate.

    Any exception from a component is re-raised as a :class:`ScorerError`
    naming the scorer, so instance-level failures are attributable.
    """
    if not candidates:
        raise ValidationError("candidate list must be non-empty")

    def run(name: str, fn):
        try:
            return fn()
        except ScorerError:
            raise
        except Exception as exc:
            raise ScorerError(
                f"{name} scorer failed on {instance.key} {instance.instance_id}: {exc}"
            ) from exc

    synonyms = all_synonyms(scorers.lexicon, instance.lemma)
    s_p = run(
        "proposal",
        lambda: proposal_scores(
            scorers.predictor,
            instance.tokens,
            instance.target_index,
            set(candidates),
            scorers.strategy,
            synonyms,
            scorers.gaussian_fallback,
        ),
    )
    scores: dict[str, tuple[float, float, float, float]] = {}
    for word in sorted(set(candidates)):
        s_g = run(
            "gloss",
            lambda w=word: gloss_score(
                scorers.lexicon,
                scorers.gloss_selector,
                scorers.sentence_encoder,
                GlossScoreInput(instance, w, instance.pos),
            ),
        )
        s_sim = run(
            "sentence",
            lambda w=word: sentence_similarity_score(
                scorers.pair_model, instance.tokens, instance.target_index, w
            ),
        )
        s_val = run(
            "validation",
            lambda w=word: validation_score(
                scorers.token_encoder,
                instance.tokens,
                instance.target_index,
                w,
                include_target=scorers.validation_include_target,
            ).score,
        )
        scores[word] = (s_p[word], s_g, s_sim, s_val)
    return scores


def rank(
    weights: CombinationWeights,
    scorers: ScorerBundle,
    instance: LexSubInstance,
    candidates: list[str],
) -> list[ScoredCandidate]:
    """Candidates sorted by combined score descending, ties lexicographic."""
    components = component_scores(scorers, instance, candidates)
    w = weights.as_array()
    ranked = [
        ScoredCandidate(word, *parts, final=float(np.dot(w, parts)))
        for word, parts in components.items()
    ]
    ranked.sort(key=lambda c: (-c.final, c.word))
    return ranked


@dataclass
class SubstitutionPipeline:
    """Candidate generation plus ranking, the unit the CLI runs per instance."""

    scorers: ScorerBundle
    weights: CombinationWeights = field(default_factory=CombinationWeights)
    k: int = DEFAULT_CANDIDATE_COUNT

    def rank_instance(self, instance: LexSubInstance) -> list[ScoredCandidate]:
        """Generate and rank candidates; empty when no source has any."""
        candidates = generate_candidates(
            self.scorers.lexicon,
            self.scorers.predictor,
            instance,
            self.k,
            self.scorers.strategy,
            self.scorers.gaussian_fallback,
        )
        if not candidates:
            return []
        return rank(self.weights, self.scorers, instance, candidates)

    def rank_pool(self, instance: LexSubInstance, pool: set[str]) -> list[ScoredCandidate]:
        """Rank a provided candidate pool directly (candidate-ranking task)."""
        return rank(self.weights, self.scorers, instance, sorted(pool))


def tune_weights(
    trial_instances: list[LexSubInstance],
    gold: dict[tuple[str, int], GoldAnnotations],
    scorers: ScorerBundle,
    grid_step: float,
    k: int = DEFAULT_CANDIDATE_COUNT,
) -> CombinationWeights:
    """Exhaustive [0, 1]^4 grid search maximizing the best measure.

    Component scores are computed once per trial instance; every weight
    tuple then re-ranks them cheaply.  Ties resolve to the lexicographically
    smallest tuple, so an uninformative trial set yields all-zero weights.
    """
    if not trial_instances:
        raise ValidationError("trial set must be non-empty")
    steps = round(1.0 / grid_step)
    if steps < 1 or abs(steps * grid_step - 1.0) > 1e-9:
        raise ValidationError(f"grid_step {grid_step} must evenly divide 1")
    values = [i / steps for i in range(steps + 1)]
    tuples = np.array(list(itertools.product(values, repeat=4)))

    totals = np.zeros(len(tuples))
    for instance in trial_instances:
        entry = gold.get((instance.key, instance.instance_id))
        if entry is None:
            raise ValidationError(
                f"no gold entry for trial instance {instance.key} {instance.instance_id}"
            )
        candidates = generate_candidates(
            scorers.lexicon, scorers.predictor, instance, k,
            scorers.strategy, scorers.gaussian_fallback,
        )
        if not candidates:
            continue
        components = component_scores(scorers, instance, candidates)
        ordered = sorted(components)  # argmax tie-break: lexicographically first
        matrix = np.array([components[w] for w in ordered])
        weights_lower: dict[str, float] = {}
        for sub, weight in entry.weights.items():
            weights_lower[sub.lower()] = weights_lower.get(sub.lower(), 0.0) + weight
        credit = np.array(
            [weights_lower.get(w, 0.0) / entry.total_weight for w in ordered]
        )
        finals = matrix @ tuples.T
        totals += credit[np.argmax(finals, axis=0)]
    best_index = int(np.argmax(totals))  # first occurrence = smallest tuple
    return CombinationWeights(*tuples[best_index].tolist())
