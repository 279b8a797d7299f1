"""Shared setup for the demo scripts: load the bundled stub configuration.

The bundled ``data/config.cfg`` uses working-directory-relative paths; the
demos override the path keys with absolute ones so they run from anywhere.
"""

from __future__ import annotations

from pathlib import Path

from lexsub.config import RunConfig, load_run_config

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def load_demo_config() -> RunConfig:
    overrides = {
        "predictor.vocab": str(DATA / "vocab.txt"),
        "lexicon.path": str(DATA / "lexicon.tsv"),
        "translator.table": str(DATA / "routes.tsv"),
        "data.instances": str(DATA / "instances.tsv"),
        "data.gold": str(DATA / "gold.txt"),
    }
    return load_run_config(DATA / "config.cfg", overrides)


def heading(text: str) -> None:
    print(f"\n{text}")
    print("-" * len(text))
