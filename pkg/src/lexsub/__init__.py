"""Lexical substitution toolkit.

Generates, ranks, and evaluates single-word substitutes for a target word
in context.  Four component scores are combined linearly: a candidate-set
softmax over a masked-word predictor driven by perturbed target embeddings
(mix-up with synonyms, gaussian noise, dropout, mask, or keep), dictionary
gloss similarity, whole-sentence similarity, and an attention-weighted
validation score.  Also included: SemEval-style best/oot/P@1/GAP metrics,
sentence-pair training-data construction with two-level back-translation,
and substitution-based data augmentation.

Model backends are pluggable; deterministic letter-count stubs make every
pipeline testable without downloads.
"""

from .augment import LabeledText, augment_dataset, augment_sentence
from .backends import (
    ContextualTokenEncoder,
    GlossSelector,
    PairSimilarityModel,
    SentenceEncoder,
    StubContextualEncoder,
    StubGlossSelector,
    StubPairModel,
    StubPredictor,
    StubSentenceEncoder,
    StubTranslator,
    TargetWordPredictor,
    TokenAnalysis,
    Translator,
    cosine,
    load_translation_tables,
)
from .config import RunConfig, build_pipeline, build_scorers, load_run_config
from .dataset_io import (
    GoldAnnotations,
    LexSubInstance,
    PredictionRecord,
    build_candidate_pools,
    parse_gold,
    parse_instances,
    parse_predictions,
    write_predictions,
)
from .errors import (
    BackendError,
    ConfigError,
    LexiconError,
    LexSubError,
    ParseError,
    ScorerError,
    ValidationError,
)
from .gloss import GlossScoreInput, gloss_score
from .lexicon import (
    Lexicon,
    SynsetRecord,
    all_synonyms,
    load_lexicon,
    relation_candidates,
    select_gloss,
    select_synset,
)
from .metrics import (
    EvaluationReport,
    best_scores,
    evaluate_dataset,
    format_report,
    gap,
    oot_scores,
    precision_at_1,
    write_report_json,
)
from .proposal import (
    PerturbationStrategy,
    perturb_embedding,
    perturbed_prediction,
    proposal_scores,
)
from .ranking import (
    CombinationWeights,
    ScoredCandidate,
    ScorerBundle,
    SubstitutionPipeline,
    generate_candidates,
    rank,
    tune_weights,
)
from .sentence import (
    SentencePairExample,
    back_translate,
    build_sts_pairs,
    finetune_similarity,
    read_sts_pairs,
    sentence_similarity_score,
    write_sts_pairs,
)
from .validation import ValidationBreakdown, validation_score

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "CombinationWeights",
    "ConfigError",
    "ContextualTokenEncoder",
    "EvaluationReport",
    "GlossScoreInput",
    "GlossSelector",
    "GoldAnnotations",
    "LabeledText",
    "LexSubError",
    "LexSubInstance",
    "Lexicon",
    "LexiconError",
    "PairSimilarityModel",
    "ParseError",
    "PerturbationStrategy",
    "PredictionRecord",
    "RunConfig",
    "ScoredCandidate",
    "ScorerBundle",
    "ScorerError",
    "SentenceEncoder",
    "SentencePairExample",
    "StubContextualEncoder",
    "StubGlossSelector",
    "StubPairModel",
    "StubPredictor",
    "StubSentenceEncoder",
    "StubTranslator",
    "SubstitutionPipeline",
    "SynsetRecord",
    "TargetWordPredictor",
    "TokenAnalysis",
    "Translator",
    "ValidationBreakdown",
    "ValidationError",
    "all_synonyms",
    "augment_dataset",
    "augment_sentence",
    "back_translate",
    "best_scores",
    "build_candidate_pools",
    "build_pipeline",
    "build_scorers",
    "build_sts_pairs",
    "cosine",
    "evaluate_dataset",
    "finetune_similarity",
    "format_report",
    "gap",
    "generate_candidates",
    "gloss_score",
    "load_lexicon",
    "load_run_config",
    "load_translation_tables",
    "oot_scores",
    "parse_gold",
    "parse_instances",
    "parse_predictions",
    "perturb_embedding",
    "perturbed_prediction",
    "precision_at_1",
    "proposal_scores",
    "rank",
    "read_sts_pairs",
    "relation_candidates",
    "select_gloss",
    "select_synset",
    "sentence_similarity_score",
    "tune_weights",
    "validation_score",
    "write_predictions",
    "write_report_json",
    "write_sts_pairs",
]
