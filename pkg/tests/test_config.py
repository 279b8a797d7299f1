"""Config parsing, typed validation, backend resolution, and pipeline wiring."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

from lexsub.backends import StubPairModel, StubPredictor, StubTranslator
from lexsub.config import (
    CONFIG_KEYS,
    RunConfig,
    build_pair_model,
    build_pipeline,
    build_predictor,
    build_run_config,
    build_scorers,
    build_translator,
    config_help_text,
    load_run_config,
    load_vocabulary,
    parse_config_file,
)
from lexsub.errors import ConfigError
from lexsub.proposal import PerturbationStrategy

from conftest import write_config


class TestParseConfigFile:
    def test_comments_and_blank_lines_skipped(self, tmp_path: Path):
        path = tmp_path / "cfg"
        path.write_text("# a comment\n\nproposal.lambda = 0.5\n")
        assert parse_config_file(path) == {"proposal.lambda": "0.5"}

    def test_unknown_key_names_file_and_line(self, tmp_path: Path):
        path = tmp_path / "cfg"
        path.write_text("# ok\nproposal.lambdaa = 0.5\n")
        with pytest.raises(ConfigError, match=r"cfg:2: unknown config key 'proposal\.lambdaa'"):
            parse_config_file(path)

    def test_duplicate_key(self, tmp_path: Path):
        path = tmp_path / "cfg"
        path.write_text("candidates.k = 5\ncandidates.k = 6\n")
        with pytest.raises(ConfigError, match="duplicate config key"):
            parse_config_file(path)

    def test_missing_equals(self, tmp_path: Path):
        path = tmp_path / "cfg"
        path.write_text("candidates.k 5\n")
        with pytest.raises(ConfigError, match="expected 'key = value'"):
            parse_config_file(path)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(ConfigError, match="config file not found"):
            parse_config_file(tmp_path / "absent")

    def test_values_may_contain_equals(self, tmp_path: Path):
        path = tmp_path / "cfg"
        path.write_text("backend.predictor = external:mod:make=x\n")
        assert parse_config_file(path) == {"backend.predictor": "external:mod:make=x"}


class TestConfigHelpText:
    def test_lists_every_key_with_default(self):
        text = config_help_text()
        for key, (default, _) in CONFIG_KEYS.items():
            assert key in text
            assert ("unset" if default is None else default) in text


class TestBuildRunConfig:
    def test_defaults(self):
        config = build_run_config({})
        assert config.strategy_kind == "mixup"
        assert config.mixup_lambda == 0.25
        assert config.gaussian_sigma == 0.01
        assert (config.weight_proposal, config.weight_gloss) == (0.05, 0.05)
        assert (config.weight_sentence, config.weight_validation) == (1.0, 0.5)
        assert config.candidate_count == 30
        assert config.sts_epochs == 4
        assert config.grid_step == 0.05
        assert config.lexicon_path is None

    @pytest.mark.parametrize(
        ("key", "value", "message"),
        [
            ("proposal.strategy", "shuffle", "expected one of"),
            ("proposal.lambda", "1.5", "must be in"),
            ("proposal.lambda", "abc", "expected a number"),
            ("proposal.sigma", "-0.1", "must be >= 0"),
            ("proposal.dropout_p", "2", "must be in"),
            ("proposal.seed", "-1", "must be >= 0"),
            ("proposal.seed", "1.5", "expected an integer"),
            ("weights.sentence", "1.2", "must be in"),
            ("candidates.k", "0", "must be >= 1"),
            ("sts.epochs", "-1", "must be >= 0"),
            ("tune.grid_step", "0.3", "1/step an integer"),
            ("tune.grid_step", "0", "1/step an integer"),
            ("sts.include_bt_gold", "yes", "expected 'true' or 'false'"),
        ],
    )
    def test_rejects_out_of_range_values(self, key, value, message):
        with pytest.raises(ConfigError, match=message):
            build_run_config({key: value})

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            build_run_config({"proposal.speed": "1"})

    def test_path_keys_must_exist(self, tmp_path: Path):
        with pytest.raises(ConfigError, match="file not found"):
            build_run_config({"lexicon.path": str(tmp_path / "absent.tsv")})

    def test_existing_path_accepted(self, tmp_path: Path):
        path = tmp_path / "vocab.txt"
        path.write_text("bright\n")
        config = build_run_config({"predictor.vocab": str(path)})
        assert config.predictor_vocab == path

    def test_boolean_parsing_is_case_insensitive(self):
        config = build_run_config({"sts.include_bt_gold": "FALSE"})
        assert config.include_bt_gold is False


class TestRunConfigStrategy:
    def test_each_kind(self):
        config = build_run_config(
            {
                "proposal.lambda": "0.5",
                "proposal.mu": "0.1",
                "proposal.sigma": "0.2",
                "proposal.dropout_p": "0.4",
                "proposal.seed": "7",
            }
        )
        assert config.strategy("mixup") == PerturbationStrategy.mixup(0.5)
        assert config.strategy("gaussian") == PerturbationStrategy.gaussian(0.1, 0.2, 7)
        assert config.strategy("dropout") == PerturbationStrategy.dropout(0.4, 7)
        assert config.strategy("mask") == PerturbationStrategy.mask()
        assert config.strategy("keep") == PerturbationStrategy.keep()

    def test_configured_kind_and_seed_override(self):
        config = build_run_config({"proposal.strategy": "gaussian"})
        assert config.strategy().kind == "gaussian"
        assert config.strategy(seed=5).seed == 5

    def test_weights_accessor(self):
        weights = build_run_config({"weights.proposal": "1"}).weights()
        assert weights.proposal == 1.0
        assert weights.sentence == 1.0


class TestLoadRunConfig:
    def test_overrides_replace_file_values(self, tmp_path: Path):
        path = tmp_path / "cfg"
        path.write_text("candidates.k = 10\n")
        config = load_run_config(path, {"candidates.k": "20"})
        assert config.candidate_count == 20

    def test_no_file_just_overrides(self):
        config = load_run_config(None, {"candidates.k": "3"})
        assert config.candidate_count == 3

    def test_override_with_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            load_run_config(None, {"candidate.k": "3"})


class TestLoadVocabulary:
    def test_blank_lines_skipped(self, tmp_path: Path):
        path = tmp_path / "vocab.txt"
        path.write_text("bright\n\n  smart  \n")
        assert load_vocabulary(path) == {"bright", "smart"}

    def test_empty_file_rejected(self, tmp_path: Path):
        path = tmp_path / "vocab.txt"
        path.write_text("\n\n")
        with pytest.raises(ConfigError, match="vocabulary file is empty"):
            load_vocabulary(path)


class TestBackendResolution:
    def test_stub_predictor_requires_vocab(self):
        with pytest.raises(ConfigError, match="predictor.vocab is required"):
            build_predictor(RunConfig())

    def test_stub_translator_requires_table(self):
        with pytest.raises(ConfigError, match="translator.table is required"):
            build_translator(RunConfig())

    def test_stub_predictor_built_from_vocab_file(self, tmp_path: Path):
        vocab = tmp_path / "vocab.txt"
        vocab.write_text("bright\nsmart\n")
        predictor = build_predictor(RunConfig(predictor_vocab=vocab))
        assert isinstance(predictor, StubPredictor)
        assert predictor.vocabulary == {"bright", "smart"}

    def test_default_backends_are_stubs(self):
        assert isinstance(build_pair_model(RunConfig()), StubPairModel)

    def test_external_backend_factory(self, tmp_path: Path, monkeypatch):
        module = tmp_path / "fake_pair_backend.py"
        module.write_text(
            "def make(config):\n"
            "    class Model:\n"
            "        concurrency_safe = True\n"
            "        def score(self, a, b):\n"
            "            return 0.5\n"
            "        def fit(self, pairs, epochs):\n"
            "            pass\n"
            "    return Model()\n"
        )
        monkeypatch.syspath_prepend(str(tmp_path))
        config = RunConfig(pair_model_backend="external:fake_pair_backend:make")
        model = build_pair_model(config)
        assert model.score("a", "b") == 0.5

    @pytest.mark.parametrize(
        ("selector", "message"),
        [
            ("external:only_module", "expected 'external:<module>:<factory>'"),
            ("external:no_such_module_xyz:make", "cannot import"),
            ("external:json:no_such_factory", "has no attribute"),
            ("builtin", "expected 'stub' or"),
        ],
    )
    def test_bad_selectors(self, selector, message):
        with pytest.raises(ConfigError, match=message):
            build_pair_model(RunConfig(pair_model_backend=selector))


class TestWiring:
    def test_build_scorers_uses_configured_strategy(self, tmp_path: Path):
        config_path = write_config(
            tmp_path / "cfg", **{"proposal.strategy": "keep"}
        )
        config = load_run_config(config_path)
        scorers = build_scorers(config)
        assert scorers.strategy == PerturbationStrategy.keep()
        assert scorers.validation_include_target is True

    def test_build_pipeline_plumbs_k_and_weights(self, tmp_path: Path):
        config_path = write_config(
            tmp_path / "cfg",
            **{"candidates.k": "7", "weights.sentence": "0.25"},
        )
        pipeline = build_pipeline(load_run_config(config_path))
        assert pipeline.k == 7
        assert pipeline.weights.sentence == 0.25

    def test_build_translator_loads_tables(self, tmp_path: Path):
        config_path = write_config(tmp_path / "cfg")
        translator = build_translator(load_run_config(config_path))
        assert isinstance(translator, StubTranslator)
        assert "en-de" in translator.tables

    def test_build_scorers_requires_lexicon(self):
        with pytest.raises(ConfigError, match="lexicon.path is required"):
            build_scorers(RunConfig())
