"""Run configuration: a flat key=value file plus typed validation and wiring.

The format is deliberately minimal so configs stay diff-able: one ``key =
value`` per line, blank lines skipped, lines starting with ``#`` ignored.
Unknown and duplicate keys are hard errors — a typo should never silently
fall back to a default.  Every key is listed in :data:`CONFIG_KEYS` with its
default, and the CLI prints that table under ``--help``.

Backends are selected per role with either ``stub`` (the deterministic
built-ins) or ``external:<module>:<factory>``, where the factory is imported
and called with the :class:`RunConfig`.
"""

from __future__ import annotations

import importlib
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

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
    Translator,
    load_translation_tables,
)
from .errors import ConfigError
from .lexicon import Lexicon, load_lexicon
from .proposal import STRATEGY_KINDS, PerturbationStrategy
from .ranking import (
    DEFAULT_CANDIDATE_COUNT,
    DEFAULT_WEIGHTS,
    CombinationWeights,
    ScorerBundle,
    SubstitutionPipeline,
)

# key -> (default shown in help, description).  A None default means optional.
CONFIG_KEYS: dict[str, tuple[str | None, str]] = {
    "backend.predictor": ("stub", "target-word predictor backend"),
    "backend.gloss_selector": ("stub", "gloss selection backend"),
    "backend.sentence_encoder": ("stub", "sentence embedding backend"),
    "backend.pair_model": ("stub", "sentence-pair similarity backend"),
    "backend.token_encoder": ("stub", "contextual token/attention backend"),
    "backend.translator": ("stub", "translation backend"),
    "predictor.vocab": (None, "word-per-line vocabulary file (stub predictor)"),
    "lexicon.path": (None, "synset lexicon TSV"),
    "translator.table": (None, "route rewrite table TSV (stub translator)"),
    "data.instances": (None, "default instances file for commands that read one"),
    "data.gold": (None, "default gold file for commands that read one"),
    "routes.level1_out": ("en-de", "translation route for the outbound leg"),
    "routes.level1_back": ("de-en", "translation route for the return leg"),
    "routes.level2_mid": ("de-fr", "intermediate route when the round trip is a no-op"),
    "proposal.strategy": ("mixup", f"one of {', '.join(STRATEGY_KINDS)}"),
    "proposal.lambda": ("0.25", "mixup interpolation factor, in [0, 1]"),
    "proposal.mu": ("0.0", "gaussian noise mean"),
    "proposal.sigma": ("0.01", "gaussian noise standard deviation, >= 0"),
    "proposal.dropout_p": ("0.3", "dropout zeroing probability, in [0, 1]"),
    "proposal.seed": ("0", "seed for the gaussian/dropout strategies, >= 0"),
    "weights.proposal": ("0.05", "combination weight of the proposal score, in [0, 1]"),
    "weights.gloss": ("0.05", "combination weight of the gloss score, in [0, 1]"),
    "weights.sentence": ("1.0", "combination weight of the sentence score, in [0, 1]"),
    "weights.validation": ("0.5", "combination weight of the validation score, in [0, 1]"),
    "candidates.k": ("30", "number of candidates to generate, >= 1"),
    "tune.grid_step": ("0.05", "weight grid spacing; 1/step must be an integer"),
    "sts.epochs": ("4", "fine-tuning epochs for the pair model, >= 0"),
    "sts.include_bt_gold": ("true", "emit back-translated gold pairs"),
    "sts.include_bt_synonym": ("true", "emit back-translated synonym pairs"),
    "validation.include_target": ("true", "include the target position in the validation score"),
}

_PATH_KEYS = (
    "predictor.vocab",
    "lexicon.path",
    "translator.table",
    "data.instances",
    "data.gold",
)


def config_help_text() -> str:
    """Table of every config key with its default, for the CLI --help epilog."""
    lines = ["configuration keys (key = value per line, '#' starts a comment):"]
    for key, (default, description) in CONFIG_KEYS.items():
        shown = "unset" if default is None else default
        lines.append(f"  {key:<26} {description} (default: {shown})")
    return "\n".join(lines)


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a config file into a raw string mapping, rejecting bad keys."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{line_number}: expected 'key = value', got {line!r}")
            key = key.strip()
            value = value.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{line_number}: unknown config key {key!r}")
            if key in values:
                raise ConfigError(f"{path}:{line_number}: duplicate config key {key!r}")
            values[key] = value
    return values


def _as_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _as_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _as_bool(key: str, text: str) -> bool:
    lowered = text.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise ConfigError(f"{key}: expected 'true' or 'false', got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    """Validated, typed snapshot of every tunable the toolkit exposes."""

    predictor_backend: str = "stub"
    gloss_selector_backend: str = "stub"
    sentence_encoder_backend: str = "stub"
    pair_model_backend: str = "stub"
    token_encoder_backend: str = "stub"
    translator_backend: str = "stub"
    predictor_vocab: Path | None = None
    lexicon_path: Path | None = None
    translator_table: Path | None = None
    instances_path: Path | None = None
    gold_path: Path | None = None
    route_level1_out: str = "en-de"
    route_level1_back: str = "de-en"
    route_level2_mid: str = "de-fr"
    strategy_kind: str = "mixup"
    mixup_lambda: float = 0.25
    gaussian_mu: float = 0.0
    gaussian_sigma: float = 0.01
    dropout_p: float = 0.3
    strategy_seed: int = 0
    weight_proposal: float = DEFAULT_WEIGHTS[0]
    weight_gloss: float = DEFAULT_WEIGHTS[1]
    weight_sentence: float = DEFAULT_WEIGHTS[2]
    weight_validation: float = DEFAULT_WEIGHTS[3]
    candidate_count: int = DEFAULT_CANDIDATE_COUNT
    grid_step: float = 0.05
    sts_epochs: int = 4
    include_bt_gold: bool = True
    include_bt_synonym: bool = True
    validation_include_target: bool = True

    def strategy(self, kind: str | None = None, seed: int | None = None) -> PerturbationStrategy:
        """The configured perturbation strategy, with optional overrides."""
        kind = kind if kind is not None else self.strategy_kind
        seed = seed if seed is not None else self.strategy_seed
        if kind == "mixup":
            return PerturbationStrategy.mixup(self.mixup_lambda)
        if kind == "gaussian":
            return PerturbationStrategy.gaussian(self.gaussian_mu, self.gaussian_sigma, seed)
        if kind == "dropout":
            return PerturbationStrategy.dropout(self.dropout_p, seed)
        if kind == "mask":
            return PerturbationStrategy.mask()
        if kind == "keep":
            return PerturbationStrategy.keep()
        raise ConfigError(f"proposal.strategy: unknown strategy {kind!r}")

    def weights(self) -> CombinationWeights:
        return CombinationWeights(
            self.weight_proposal,
            self.weight_gloss,
            self.weight_sentence,
            self.weight_validation,
        )


def _check_range(key: str, value: float, low: float, high: float) -> float:
    if not low <= value <= high:
        raise ConfigError(f"{key}: must be in [{low:g}, {high:g}], got {value}")
    return value


def build_run_config(values: Mapping[str, str]) -> RunConfig:
    """Convert raw string values into a validated :class:`RunConfig`."""
    for key in values:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")

    def text(key: str) -> str | None:
        raw = values.get(key, CONFIG_KEYS[key][0])
        return raw

    def required_text(key: str) -> str:
        raw = text(key)
        assert raw is not None  # keys with a documented default
        return raw

    def path(key: str) -> Path | None:
        raw = text(key)
        return Path(raw) if raw is not None else None

    strategy_kind = required_text("proposal.strategy")
    if strategy_kind not in STRATEGY_KINDS:
        raise ConfigError(
            f"proposal.strategy: expected one of {', '.join(STRATEGY_KINDS)}, "
            f"got {strategy_kind!r}"
        )

    seed = _as_int("proposal.seed", required_text("proposal.seed"))
    if seed < 0:
        raise ConfigError(f"proposal.seed: must be >= 0, got {seed}")
    sigma = _as_float("proposal.sigma", required_text("proposal.sigma"))
    if sigma < 0.0:
        raise ConfigError(f"proposal.sigma: must be >= 0, got {sigma}")
    k = _as_int("candidates.k", required_text("candidates.k"))
    if k < 1:
        raise ConfigError(f"candidates.k: must be >= 1, got {k}")
    epochs = _as_int("sts.epochs", required_text("sts.epochs"))
    if epochs < 0:
        raise ConfigError(f"sts.epochs: must be >= 0, got {epochs}")
    grid_step = _as_float("tune.grid_step", required_text("tune.grid_step"))
    if not 0.0 < grid_step <= 1.0 or abs(round(1.0 / grid_step) - 1.0 / grid_step) > 1e-9:
        raise ConfigError(
            f"tune.grid_step: must be in (0, 1] with 1/step an integer, got {grid_step}"
        )

    config = RunConfig(
        predictor_backend=required_text("backend.predictor"),
        gloss_selector_backend=required_text("backend.gloss_selector"),
        sentence_encoder_backend=required_text("backend.sentence_encoder"),
        pair_model_backend=required_text("backend.pair_model"),
        token_encoder_backend=required_text("backend.token_encoder"),
        translator_backend=required_text("backend.translator"),
        predictor_vocab=path("predictor.vocab"),
        lexicon_path=path("lexicon.path"),
        translator_table=path("translator.table"),
        instances_path=path("data.instances"),
        gold_path=path("data.gold"),
        route_level1_out=required_text("routes.level1_out"),
        route_level1_back=required_text("routes.level1_back"),
        route_level2_mid=required_text("routes.level2_mid"),
        strategy_kind=strategy_kind,
        mixup_lambda=_check_range(
            "proposal.lambda", _as_float("proposal.lambda", required_text("proposal.lambda")), 0.0, 1.0
        ),
        gaussian_mu=_as_float("proposal.mu", required_text("proposal.mu")),
        gaussian_sigma=sigma,
        dropout_p=_check_range(
            "proposal.dropout_p",
            _as_float("proposal.dropout_p", required_text("proposal.dropout_p")),
            0.0,
            1.0,
        ),
        strategy_seed=seed,
        weight_proposal=_check_range(
            "weights.proposal", _as_float("weights.proposal", required_text("weights.proposal")), 0.0, 1.0
        ),
        weight_gloss=_check_range(
            "weights.gloss", _as_float("weights.gloss", required_text("weights.gloss")), 0.0, 1.0
        ),
        weight_sentence=_check_range(
            "weights.sentence", _as_float("weights.sentence", required_text("weights.sentence")), 0.0, 1.0
        ),
        weight_validation=_check_range(
            "weights.validation",
            _as_float("weights.validation", required_text("weights.validation")),
            0.0,
            1.0,
        ),
        candidate_count=k,
        grid_step=grid_step,
        sts_epochs=epochs,
        include_bt_gold=_as_bool("sts.include_bt_gold", required_text("sts.include_bt_gold")),
        include_bt_synonym=_as_bool(
            "sts.include_bt_synonym", required_text("sts.include_bt_synonym")
        ),
        validation_include_target=_as_bool(
            "validation.include_target", required_text("validation.include_target")
        ),
    )

    for key in _PATH_KEYS:
        if key in values and not Path(values[key]).is_file():
            raise ConfigError(f"{key}: file not found: {values[key]}")
    return config


def load_run_config(
    path: str | Path | None = None, overrides: Mapping[str, str] | None = None
) -> RunConfig:
    """Load a config file (optional) and apply CLI-flag overrides on top."""
    values: dict[str, str] = {}
    if path is not None:
        values.update(parse_config_file(path))
    if overrides:
        for key, value in overrides.items():
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = value
    return build_run_config(values)


def load_vocabulary(path: str | Path) -> set[str]:
    """Word-per-line vocabulary file; blank lines skipped."""
    words = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            word = line.strip()
            if word:
                words.add(word)
    if not words:
        raise ConfigError(f"vocabulary file is empty: {path}")
    return words


def _resolve_backend(role: str, selector: str, config: RunConfig, stub_factory):
    if selector == "stub":
        return stub_factory(config)
    prefix = "external:"
    if selector.startswith(prefix):
        module_name, sep, attr = selector[len(prefix):].partition(":")
        if not (module_name and sep and attr):
            raise ConfigError(
                f"backend.{role}: expected 'external:<module>:<factory>', got {selector!r}"
            )
        try:
            module = importlib.import_module(module_name)
        except ImportError as exc:
            raise ConfigError(f"backend.{role}: cannot import {module_name!r}: {exc}") from exc
        try:
            factory = getattr(module, attr)
        except AttributeError:
            raise ConfigError(
                f"backend.{role}: module {module_name!r} has no attribute {attr!r}"
            ) from None
        return factory(config)
    raise ConfigError(
        f"backend.{role}: expected 'stub' or 'external:<module>:<factory>', got {selector!r}"
    )


def _stub_predictor(config: RunConfig) -> StubPredictor:
    if config.predictor_vocab is None:
        raise ConfigError("predictor.vocab is required when backend.predictor = stub")
    return StubPredictor(load_vocabulary(config.predictor_vocab))


def _stub_translator(config: RunConfig) -> StubTranslator:
    if config.translator_table is None:
        raise ConfigError("translator.table is required when backend.translator = stub")
    return StubTranslator(load_translation_tables(config.translator_table))


def build_predictor(config: RunConfig) -> TargetWordPredictor:
    return _resolve_backend("predictor", config.predictor_backend, config, _stub_predictor)


def build_gloss_selector(config: RunConfig) -> GlossSelector:
    return _resolve_backend(
        "gloss_selector", config.gloss_selector_backend, config, lambda _: StubGlossSelector()
    )


def build_sentence_encoder(config: RunConfig) -> SentenceEncoder:
    return _resolve_backend(
        "sentence_encoder", config.sentence_encoder_backend, config, lambda _: StubSentenceEncoder()
    )


def build_pair_model(config: RunConfig) -> PairSimilarityModel:
    return _resolve_backend(
        "pair_model", config.pair_model_backend, config, lambda _: StubPairModel()
    )


def build_token_encoder(config: RunConfig) -> ContextualTokenEncoder:
    return _resolve_backend(
        "token_encoder", config.token_encoder_backend, config, lambda _: StubContextualEncoder()
    )


def build_translator(config: RunConfig) -> Translator:
    return _resolve_backend("translator", config.translator_backend, config, _stub_translator)


def load_configured_lexicon(config: RunConfig) -> Lexicon:
    if config.lexicon_path is None:
        raise ConfigError("lexicon.path is required for this command")
    return load_lexicon(config.lexicon_path)


def build_scorers(
    config: RunConfig,
    strategy: PerturbationStrategy | None = None,
) -> ScorerBundle:
    """Wire every scoring backend into a :class:`ScorerBundle`."""
    return ScorerBundle(
        lexicon=load_configured_lexicon(config),
        predictor=build_predictor(config),
        gloss_selector=build_gloss_selector(config),
        sentence_encoder=build_sentence_encoder(config),
        pair_model=build_pair_model(config),
        token_encoder=build_token_encoder(config),
        strategy=strategy if strategy is not None else config.strategy(),
        validation_include_target=config.validation_include_target,
    )


def build_pipeline(
    config: RunConfig,
    strategy: PerturbationStrategy | None = None,
) -> SubstitutionPipeline:
    return SubstitutionPipeline(
        scorers=build_scorers(config, strategy),
        weights=config.weights(),
        k=config.candidate_count,
    )
