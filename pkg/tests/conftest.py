"""Shared fixtures: bundled data paths, tiny lexicons, and stub scorer bundles."""

from __future__ import annotations

import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from lexsub.backends import (
    StubContextualEncoder,
    StubGlossSelector,
    StubPairModel,
    StubPredictor,
    StubSentenceEncoder,
)
from lexsub.cli import main as cli_main
from lexsub.lexicon import Lexicon, load_lexicon
from lexsub.ranking import ScorerBundle

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


def write_lexicon(path: Path, rows: list[tuple[str, str, str, str, str, str]]) -> Path:
    """Write lexicon rows as strict 6-field TSV (trailing fields may be empty)."""
    path.write_text(
        "".join("\t".join(row) + "\n" for row in rows), encoding="utf-8"
    )
    return path


# A small self-consistent lexicon used by unit tests that need real lookups:
# two adjective senses of "bright", a noun "house" with hypernym/hyponym
# links, and a verb "run" synset.
SMALL_LEXICON_ROWS = [
    ("a-bright-1", "a", "intelligent and quick to learn", "bright,smart,clever", "", ""),
    ("a-bright-2", "a", "emitting much light", "bright,shining,brilliant", "", ""),
    ("n-house-1", "n", "a building where people live", "house,home,dwelling", "n-building-1", "n-cottage-1"),
    ("n-building-1", "n", "a structure with walls and a roof", "building,edifice", "", "n-house-1"),
    ("n-cottage-1", "n", "a small simple house", "cottage,cabin", "n-house-1", ""),
    ("v-run-1", "v", "move fast on foot", "run,sprint,jog", "", ""),
    ("n-sea_side-1", "n", "land near the sea", "seaside,sea_shore,coast", "", ""),
]


@pytest.fixture()
def small_lexicon(tmp_path: Path) -> Lexicon:
    return load_lexicon(write_lexicon(tmp_path / "lexicon.tsv", SMALL_LEXICON_ROWS))


DEFAULT_VOCAB = {
    "bright", "smart", "clever", "shining", "brilliant", "luminous",
    "house", "home", "building", "cottage", "dwelling",
    "run", "sprint", "jog", "walk",
    "big", "large", "huge",
}


def make_scorers(lexicon: Lexicon, vocabulary: set[str] | None = None, **kwargs) -> ScorerBundle:
    return ScorerBundle(
        lexicon=lexicon,
        predictor=StubPredictor(vocabulary or set(DEFAULT_VOCAB)),
        gloss_selector=StubGlossSelector(),
        sentence_encoder=StubSentenceEncoder(),
        pair_model=StubPairModel(),
        token_encoder=StubContextualEncoder(),
        **kwargs,
    )


@pytest.fixture()
def stub_scorers(small_lexicon: Lexicon) -> ScorerBundle:
    return make_scorers(small_lexicon)


def write_config(path: Path, **extra: str) -> Path:
    """Write a stub config pointing at the bundled data/ via absolute paths."""
    values = {
        "predictor.vocab": str(DATA_DIR / "vocab.txt"),
        "lexicon.path": str(DATA_DIR / "lexicon.tsv"),
        "translator.table": str(DATA_DIR / "routes.tsv"),
        "data.instances": str(DATA_DIR / "instances.tsv"),
        "data.gold": str(DATA_DIR / "gold.txt"),
    }
    values.update(extra)
    path.write_text(
        "".join(f"{key} = {value}\n" for key, value in values.items()),
        encoding="utf-8",
    )
    return path


def run_cli(*argv: str) -> tuple[int, str, str]:
    """Invoke the CLI in-process, capturing (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(list(argv))
    return code, out.getvalue(), err.getvalue()
