"""Proposal score: candidate softmax under a perturbed target embedding.

Five target-embedding treatments are supported.  The mix-up strategy
interpolates the target input embedding with the mean embedding of its
synonyms, X' = lam * X + (1 - lam) * mean(X_synonyms); the Gaussian strategy
adds seeded componentwise noise X' = X + e with e_i ~ N(mu, sigma^2); dropout
zeroes components independently with probability p; mask replaces the
embedding with the zero vector; keep leaves it untouched.

The proposal score of a candidate is the softmax of the predictor's scores
restricted to the candidate set, computed max-shifted for stability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backends import EmbeddingVector, TargetWordPredictor
from .errors import ValidationError

STRATEGY_KINDS = ("mixup", "gaussian", "dropout", "mask", "keep")

# Defaults for the Gaussian fallback used when mix-up has no synonyms.
DEFAULT_GAUSSIAN_MU = 0.0
DEFAULT_GAUSSIAN_SIGMA = 0.01


@dataclass(frozen=True)
class PerturbationStrategy:
    """Tagged choice of target-embedding treatment.

    Only the parameters the kind requires may be set: ``lam`` for mixup,
    ``mu``/``sigma``/``seed`` for gaussian, ``p``/``seed`` for dropout.
    Use the class methods rather than the raw constructor.
    """

    kind: str
    lam: float | None = None
    mu: float | None = None
    sigma: float | None = None
    p: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValidationError(f"unknown strategy kind {self.kind!r}")
        required = {
            "mixup": ("lam",),
            "gaussian": ("mu", "sigma", "seed"),
            "dropout": ("p", "seed"),
            "mask": (),
            "keep": (),
        }[self.kind]
        for name in ("lam", "mu", "sigma", "p", "seed"):
            value = getattr(self, name)
            if name in required and value is None:
                raise ValidationError(f"{self.kind} strategy requires {name!r}")
            if name not in required and value is not None:
                raise ValidationError(f"{self.kind} strategy does not take {name!r}")
        if self.lam is not None and not 0.0 <= self.lam <= 1.0:
            raise ValidationError(f"lam must be in [0, 1], got {self.lam}")
        if self.sigma is not None and self.sigma < 0.0:
            raise ValidationError(f"sigma must be >= 0, got {self.sigma}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p must be in [0, 1], got {self.p}")

    @classmethod
    def mixup(cls, lam: float = 0.25) -> "PerturbationStrategy":
        return cls(kind="mixup", lam=lam)

    @classmethod
    def gaussian(
        cls,
        mu: float = DEFAULT_GAUSSIAN_MU,
        sigma: float = DEFAULT_GAUSSIAN_SIGMA,
        seed: int = 0,
    ) -> "PerturbationStrategy":
        return cls(kind="gaussian", mu=mu, sigma=sigma, seed=seed)

    @classmethod
    def dropout(cls, p: float, seed: int = 0) -> "PerturbationStrategy":
        return cls(kind="dropout", p=p, seed=seed)

    @classmethod
    def mask(cls) -> "PerturbationStrategy":
        return cls(kind="mask")

    @classmethod
    def keep(cls) -> "PerturbationStrategy":
        return cls(kind="keep")


def perturb_embedding(
    strategy: PerturbationStrategy,
    target_emb: EmbeddingVector,
    synonym_embs: list[EmbeddingVector],
) -> EmbeddingVector:
    """Apply the strategy to the target embedding.

    Mix-up requires a non-empty synonym embedding list; callers that may
    have none should fall back to the Gaussian strategy (see
    :func:`proposal_scores`).  The seeded generator is local to each call,
    so the same seed always reproduces the same noise or dropout mask.
    """
    for emb in synonym_embs:
        if emb.shape != target_emb.shape:
            raise ValidationError(
                f"synonym embedding dim {emb.shape} != target dim {target_emb.shape}"
            )
    if strategy.kind == "mixup":
        if not synonym_embs:
            raise ValidationError("mixup requires at least one synonym embedding")
        mean = np.mean(synonym_embs, axis=0)
        return strategy.lam * target_emb + (1.0 - strategy.lam) * mean
    if strategy.kind == "gaussian":
        rng = np.random.default_rng(strategy.seed)
        noise = rng.normal(strategy.mu, strategy.sigma, size=target_emb.shape)
        return target_emb + noise
    if strategy.kind == "dropout":
        rng = np.random.default_rng(strategy.seed)
        keep_mask = rng.random(target_emb.shape) >= strategy.p
        return target_emb * keep_mask
    if strategy.kind == "mask":
        return np.zeros_like(target_emb)
    return target_emb.copy()  # keep


def perturbed_prediction(
    predictor: TargetWordPredictor,
    tokens: list[str] | tuple[str, ...],
    target_index: int,
    strategy: PerturbationStrategy,
    synonyms: set[str],
    fallback: PerturbationStrategy | None = None,
) -> dict[str, float]:
    """Predictor vocabulary scores under the perturbed target embedding.

    Synonym embeddings (for mix-up) come from the same predictor.  When the
    strategy is mix-up but ``synonyms`` is empty, ``fallback`` is applied
    instead (defaulting to Gaussian noise with mu 0, sigma 0.01, seed 0):
    words the lexicon does not know still need a usable perturbation.
    """
    if not 0 <= target_index < len(tokens):
        raise ValidationError(f"target_index {target_index} out of range")
    target_emb = predictor.input_embedding(tokens[target_index])
    if strategy.kind == "mixup" and not synonyms:
        strategy = fallback if fallback is not None else PerturbationStrategy.gaussian()
    # Sorted for byte-stable float summation in the synonym mean.
    synonym_embs = (
        [predictor.input_embedding(s) for s in sorted(synonyms)]
        if strategy.kind == "mixup"
        else []
    )
    perturbed = perturb_embedding(strategy, target_emb, synonym_embs)
    return predictor.predict(list(tokens), target_index, perturbed)


def proposal_scores(
    predictor: TargetWordPredictor,
    tokens: list[str] | tuple[str, ...],
    target_index: int,
    candidates: set[str],
    strategy: PerturbationStrategy,
    synonyms: set[str],
    fallback: PerturbationStrategy | None = None,
) -> dict[str, float]:
    """Softmax of predictor scores over exactly the candidate set.

    The target embedding is perturbed per ``strategy`` before prediction
    (see :func:`perturbed_prediction` for the mix-up fallback rule).
    Returns a map candidate -> probability summing to 1, computed with
    max-shifted exponentials.
    """
    if not candidates:
        raise ValidationError("candidate set must be non-empty")
    vocabulary_scores = perturbed_prediction(
        predictor, tokens, target_index, strategy, synonyms, fallback
    )
    ordered = sorted(candidates)
    raw = np.array([vocabulary_scores[word] for word in ordered], dtype=float)
    shifted = np.exp(raw - raw.max())
    probabilities = shifted / shifted.sum()
    return dict(zip(ordered, probabilities.tolist()))
