#!/usr/bin/env python3
"""Generate predictions for the bundled dataset and score them.

Two tasks share the same measures machinery:

- generation: the system proposes its own substitutes; best/best-mode score
  the top guess, oot/oot-mode the top ten, P@1 whether the top guess is any
  gold substitute (all percentages).
- candidate ranking: the system orders a given pool (here: the gold
  substitutes of all instances sharing the target word); quality is the
  generalized average precision (GAP) in [0, 1].
"""

from demo_helpers import heading, load_demo_config

from lexsub.config import build_pipeline
from lexsub.dataset_io import (
    PredictionRecord,
    build_candidate_pools,
    parse_gold,
    parse_instances,
)
from lexsub.metrics import evaluate_dataset, format_report


def main() -> None:
    config = load_demo_config()
    pipeline = build_pipeline(config)
    instances = parse_instances(config.instances_path)
    gold = parse_gold(config.gold_path)

    heading("Generation task")
    records = []
    for instance in instances:
        ranked = pipeline.rank_instance(instance)
        records.append(
            PredictionRecord(instance.key, instance.instance_id, [c.word for c in ranked[:10]])
        )
    report = evaluate_dataset(records, gold, "generation")
    print(format_report(report), end="")
    print(f"instances scored: {report.counts['best']}")

    heading("Candidate-ranking task")
    pools = build_candidate_pools(gold)
    ranked_records = []
    for instance in instances:
        pool = pools.get(instance.key)
        if not pool:
            continue
        ranked = pipeline.rank_pool(instance, pool)
        ranked_records.append(
            PredictionRecord(instance.key, instance.instance_id, [c.word for c in ranked])
        )
    report = evaluate_dataset(ranked_records, gold, "ranking")
    print(format_report(report), end="")
    print(f"instances scored: {report.counts['gap']}")
    example = ranked_records[0]
    print(f"example ranking for {example.key} {example.instance_id}: {', '.join(example.guesses)}")


if __name__ == "__main__":
    main()
