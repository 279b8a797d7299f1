#!/usr/bin/env python3
"""Augment a labeled dataset by substitution, then grid-search the weights.

Augmentation swaps exactly one eligible word per variant: a position is
drawn uniformly, then the replacement is drawn proportionally to the
pipeline's final scores. Everything is seeded, so reruns are byte-identical.

Weight tuning evaluates every weight tuple on a [0, 1]^4 grid against the
gold annotations of a trial set and keeps the best-scoring (ties resolve to
the smallest tuple).
"""

import tempfile
from pathlib import Path

from demo_helpers import DATA, heading, load_demo_config

from lexsub.config import build_pipeline, build_scorers
from lexsub.dataset_io import parse_gold, parse_instances
from lexsub.augment import augment_dataset, read_labeled
from lexsub.ranking import tune_weights


def main() -> None:
    config = load_demo_config()
    pipeline = build_pipeline(config)

    heading("Augmenting data/sentences.tsv (one variant per line, seed 7)")
    with tempfile.TemporaryDirectory() as scratch:
        output = Path(scratch) / "augmented.tsv"
        warnings = augment_dataset(pipeline, DATA / "sentences.tsv", output, 1, seed=7)
        for message in warnings:
            print(f"skipped {message}")
        originals = {example.text for example in read_labeled(DATA / "sentences.tsv")}
        for example in read_labeled(output):
            marker = "original" if example.text in originals else "variant "
            print(f"  {marker} [{example.label}] {example.text}")

    heading("Tuning combination weights on the bundled trial set")
    instances = parse_instances(config.instances_path)
    gold = parse_gold(config.gold_path)
    weights = tune_weights(instances, gold, build_scorers(config), grid_step=0.25, k=10)
    print(f"proposal={weights.proposal:g} gloss={weights.gloss:g}")
    print(f"sentence={weights.sentence:g} validation={weights.validation:g}")


if __name__ == "__main__":
    main()
