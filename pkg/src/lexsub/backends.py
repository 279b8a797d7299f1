"""Model backend contracts and their deterministic stub implementations.

The scoring pipeline consumes six backend capabilities (word predictor,
sentence encoder, sentence-pair similarity model, gloss selector, translator,
contextual token encoder).  Real neural adapters plug in behind the same
interfaces; the stubs shipped here are pure letter-count arithmetic so that
every downstream number is hand-checkable and identical across platforms.

All stub embeddings live in a 26-dimensional space of lowercase letter
counts, L2-normalized.  Cosine similarity with a zero vector is defined as
0 everywhere in this package; that convention is set once, here.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .errors import BackendError, ParseError, ValidationError

# An embedding is a fixed-length 1-D vector of finite floats.
EmbeddingVector = np.ndarray

# Scores over a predictor's vocabulary: word -> real.
VocabularyScores = dict[str, float]

EMBED_DIM = 26


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity, defined as 0.0 when either vector is zero.

    Computed as dot / sqrt(|a|^2 * |b|^2) so that identical vectors give
    exactly 1.0, and clipped to [-1, 1] against round-off.
    """
    na = float(np.dot(a, a))
    nb = float(np.dot(b, b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    value = float(np.dot(a, b)) / math.sqrt(na * nb)
    return min(1.0, max(-1.0, value))


@dataclass
class TokenAnalysis:
    """Per-token contextual vectors plus a token-to-token attention table.

    ``attention[i, j]`` is the (non-negative) attention weight from source
    token i to token j, averaged over whatever structure the backend has.
    """

    token_vectors: list[EmbeddingVector]
    attention: np.ndarray

    def __post_init__(self):
        n = len(self.token_vectors)
        if self.attention.shape != (n, n):
            raise ValidationError(
                f"attention table shape {self.attention.shape} does not match "
                f"{n} tokens"
            )
        if np.any(self.attention < 0):
            raise ValidationError("attention weights must be non-negative")

    def attention_from(self, source_index: int) -> np.ndarray:
        """Attention weights from the given source token to every position."""
        return self.attention[source_index]


class TargetWordPredictor(Protocol):
    """Scores vocabulary words as replacements for a target token.

    ``predict`` receives the replacement embedding for the target position
    (already perturbed by the caller) and must return a score for every word
    it is later queried with; reference adapters score out-of-vocabulary
    words by their first sub-token.
    """

    def input_embedding(self, word: str) -> EmbeddingVector: ...

    def predict(
        self, tokens: list[str], target_index: int, replacement_embedding: EmbeddingVector
    ) -> VocabularyScores: ...


class SentenceEncoder(Protocol):
    def encode(self, text: str) -> EmbeddingVector: ...


class PairSimilarityModel(Protocol):
    """Maps a sentence pair to a similarity in [0, 1]; trainable in place."""

    def score(self, text_a: str, text_b: str) -> float: ...

    def fit(self, pairs: list[tuple[str, str, float]], epochs: int) -> None: ...


class GlossSelector(Protocol):
    """Picks the context-appropriate gloss: returns an index into ``glosses``."""

    def choose(self, tokens: list[str], target_index: int, glosses: list[str]) -> int: ...


class Translator(Protocol):
    def translate(self, text: str, route: str) -> str: ...


class ContextualTokenEncoder(Protocol):
    def analyze(self, tokens: list[str]) -> TokenAnalysis: ...


# ---------------------------------------------------------------------------
# Stub implementations


def stub_embed(text: str) -> EmbeddingVector:
    """L2-normalized lowercase-letter-count vector of ``text`` (dim 26).

    Text with no ASCII letters maps to the zero vector.
    """
    counts = np.zeros(EMBED_DIM)
    for ch in text.lower():
        idx = ord(ch) - ord("a")
        if 0 <= idx < EMBED_DIM:
            counts[idx] += 1.0
    norm = float(np.linalg.norm(counts))
    if norm == 0.0:
        return counts
    return counts / norm


def stub_predict(
    tokens: list[str],
    target_index: int,
    replacement_embedding: EmbeddingVector,
    vocabulary: set[str],
) -> VocabularyScores:
    """Score every vocabulary word by negative distance to the replacement.

    score(w) = -||replacement_embedding - stub_embed(w)||_2.  Context tokens
    are ignored by design: the stub isolates the embedding arithmetic.
    """
    if not vocabulary:
        raise ValidationError("vocabulary must be non-empty")
    return {
        word: -float(np.linalg.norm(replacement_embedding - stub_embed(word)))
        for word in vocabulary
    }


def stub_pair_score(a: str, b: str) -> float:
    """(1 + cosine of letter-count embeddings) / 2, so the range is [0, 1]."""
    return (1.0 + cosine(stub_embed(a), stub_embed(b))) / 2.0


def stub_analyze(tokens: list[str]) -> TokenAnalysis:
    """Letter-count vector per token and uniform 1/n attention everywhere."""
    if not tokens:
        raise ValidationError("token list must be non-empty")
    n = len(tokens)
    return TokenAnalysis(
        token_vectors=[stub_embed(t) for t in tokens],
        attention=np.full((n, n), 1.0 / n),
    )


def stub_gloss_choose(tokens: list[str], target_index: int, glosses: list[str]) -> int:
    """Index of the gloss most letter-cosine-similar to the joined sentence.

    Ties break toward the lowest index.
    """
    if not glosses:
        raise ValidationError("gloss list must be non-empty")
    sentence_vec = stub_embed(" ".join(tokens))
    best_index = 0
    best_value = -math.inf
    for i, gloss in enumerate(glosses):
        value = cosine(stub_embed(gloss), sentence_vec)
        if value > best_value:
            best_index, best_value = i, value
    return best_index


class _OnDemandScores(dict):
    """Vocabulary scores that also cover words outside the seeded vocabulary.

    The ranking layer may query candidates the stub vocabulary does not
    contain (e.g. lexicon-derived or gold-pool words); those are scored on
    first access with the same letter-distance rule.
    """

    def __init__(self, seeded: VocabularyScores, replacement: EmbeddingVector):
        super().__init__(seeded)
        self._replacement = replacement

    def __missing__(self, word: str) -> float:
        score = -float(np.linalg.norm(self._replacement - stub_embed(word)))
        self[word] = score
        return score


class StubPredictor:
    """Letter-count realization of :class:`TargetWordPredictor`."""

    concurrency_safe = True

    def __init__(self, vocabulary: set[str]):
        if not vocabulary:
            raise ValidationError("stub predictor requires a non-empty vocabulary")
        self.vocabulary = set(vocabulary)

    def input_embedding(self, word: str) -> EmbeddingVector:
        return stub_embed(word)

    def predict(
        self, tokens: list[str], target_index: int, replacement_embedding: EmbeddingVector
    ) -> VocabularyScores:
        seeded = stub_predict(tokens, target_index, replacement_embedding, self.vocabulary)
        return _OnDemandScores(seeded, replacement_embedding)


class StubSentenceEncoder:
    concurrency_safe = True

    def encode(self, text: str) -> EmbeddingVector:
        return stub_embed(text)


class StubPairModel:
    """Letter-cosine pair similarity; ``fit`` records pairs and nothing else."""

    concurrency_safe = True

    def __init__(self):
        self.fitted_pairs: list[tuple[str, str, float]] = []
        self.fit_epochs: list[int] = []

    def score(self, text_a: str, text_b: str) -> float:
        return stub_pair_score(text_a, text_b)

    def fit(self, pairs: list[tuple[str, str, float]], epochs: int) -> None:
        self.fitted_pairs.extend(pairs)
        self.fit_epochs.append(epochs)


class StubGlossSelector:
    concurrency_safe = True

    def choose(self, tokens: list[str], target_index: int, glosses: list[str]) -> int:
        return stub_gloss_choose(tokens, target_index, glosses)


class StubContextualEncoder:
    concurrency_safe = True

    def analyze(self, tokens: list[str]) -> TokenAnalysis:
        return stub_analyze(tokens)


@dataclass
class StubTranslator:
    """Table-driven translator: per-route deterministic token rewrites.

    A route configured with an empty rewrite map is an identity route.  Every
    ``translate`` call is appended to :attr:`calls` as (route, input, output)
    so tests can assert exact call sequences.
    """

    tables: dict[str, dict[str, str]]
    calls: list[tuple[str, str, str]] = field(default_factory=list)
    concurrency_safe = False  # the call log is shared mutable state

    def __post_init__(self):
        self._lock = threading.Lock()

    def translate(self, text: str, route: str) -> str:
        if route not in self.tables:
            raise BackendError(f"unknown translation route: {route!r}")
        table = self.tables[route]
        result = " ".join(table.get(token, token) for token in text.split())
        with self._lock:
            self.calls.append((route, text, result))
        return result


def load_translation_tables(path: str | Path) -> dict[str, dict[str, str]]:
    """Load stub translator rewrite tables from a TSV file.

    Each line is ``route<TAB>from<TAB>to``; a line with only a route name
    declares an identity route with no rewrites.
    """
    tables: dict[str, dict[str, str]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) == 1:
                tables.setdefault(fields[0], {})
            elif len(fields) == 3:
                route, source, target = fields
                if not source:
                    tables.setdefault(route, {})
                else:
                    tables.setdefault(route, {})[source] = target
            else:
                raise ParseError(
                    f"expected 'route', or 'route<TAB>from<TAB>to', got {len(fields)} fields",
                    line_number,
                )
    return tables
