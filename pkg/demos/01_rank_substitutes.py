#!/usr/bin/env python3
"""Rank substitutes for one sentence and inspect every scoring signal.

The pipeline generates candidates (lexicon synonyms first, predictor
vocabulary to fill up), scores each against four signals, and combines them
with configurable weights:

- proposal:   softmax of predictor scores under a perturbed target embedding
- gloss:      similarity of the target's and candidate's dictionary glosses
- sentence:   similarity of the sentence and its substituted variant
- validation: attention-weighted per-token similarity after substitution

The second half swaps in each target-embedding perturbation strategy and
shows how it reorders the proposal scores alone.
"""

from demo_helpers import heading, load_demo_config

from lexsub.config import build_pipeline
from lexsub.dataset_io import parse_instances
from lexsub.lexicon import all_synonyms
from lexsub.proposal import STRATEGY_KINDS, proposal_scores


def main() -> None:
    config = load_demo_config()
    pipeline = build_pipeline(config)
    instance = parse_instances(config.instances_path)[0]

    heading("Instance")
    print(f"sentence: {' '.join(instance.tokens)}")
    print(f"target:   {instance.target_token!r} (lemma {instance.lemma!r}, pos {instance.pos!r})")

    heading("Ranked substitutes (top 8 of %d candidates)" % config.candidate_count)
    ranked = pipeline.rank_instance(instance)
    print(f"{'rank':>4}  {'word':<12} {'proposal':>9} {'gloss':>7} {'sentence':>9} {'validation':>11} {'final':>8}")
    for position, c in enumerate(ranked[:8], start=1):
        print(
            f"{position:>4}  {c.word:<12} {c.s_p:>9.4f} {c.s_g:>7.4f}"
            f" {c.s_sim:>9.4f} {c.s_val:>11.4f} {c.final:>8.4f}"
        )

    heading("Proposal score under each perturbation strategy")
    scorers = pipeline.scorers
    synonyms = all_synonyms(scorers.lexicon, instance.lemma)
    candidates = {c.word for c in ranked[:6]}
    print(f"candidates: {sorted(candidates)}")
    print(f"lexicon synonyms feeding mix-up: {sorted(synonyms)}")
    for kind in STRATEGY_KINDS:
        scores = proposal_scores(
            scorers.predictor,
            instance.tokens,
            instance.target_index,
            candidates,
            config.strategy(kind),
            synonyms,
        )
        top = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:3]
        rendered = ", ".join(f"{word} {score:.3f}" for word, score in top)
        print(f"{kind:>8}: {rendered}")


if __name__ == "__main__":
    main()
