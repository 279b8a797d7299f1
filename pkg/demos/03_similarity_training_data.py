#!/usr/bin/env python3
"""Build sentence-pair training data and fine-tune the pair model on it.

Pairs come from three sources per instance: gold substitutes (labeled by
annotator weight over the instance maximum), lexicon synonyms of the chosen
sense (labeled 1.0), and back-translated variants of both. Back-translation
goes out and back through a translation route; when the round trip returns
the sentence unchanged, a second hop through a third language is inserted —
so the translator is called exactly twice or exactly five times.
"""

from collections import Counter

from demo_helpers import heading, load_demo_config

from lexsub.backends import StubPairModel
from lexsub.config import build_gloss_selector, build_translator, load_configured_lexicon
from lexsub.dataset_io import parse_gold, parse_instances
from lexsub.sentence import back_translate, build_sts_pairs, finetune_similarity


def main() -> None:
    config = load_demo_config()
    translator = build_translator(config)

    heading("Back-translation call discipline")
    for text in ("they moved here", "the lamp glows"):
        translator.calls.clear()
        result = back_translate(
            translator,
            text,
            config.route_level1_out,
            config.route_level1_back,
            config.route_level2_mid,
        )
        routes = " -> ".join(route for route, _, _ in translator.calls)
        print(f"{text!r} became {result!r} via {len(translator.calls)} calls ({routes})")

    heading("Building pairs from the bundled dataset")
    pairs = build_sts_pairs(
        parse_instances(config.instances_path),
        parse_gold(config.gold_path),
        load_configured_lexicon(config),
        build_gloss_selector(config),
        translator,
        seed=0,
        route_out=config.route_level1_out,
        route_back=config.route_level1_back,
        route_mid=config.route_level2_mid,
    )
    by_source = Counter(pair.source for pair in pairs)
    print(f"built {len(pairs)} pairs: {dict(by_source)}")
    for pair in pairs[:4]:
        print(f"  [{pair.source}] label {pair.label:.2f}: {pair.text_b!r}")

    heading("Fine-tuning the stub pair model")
    model = StubPairModel()
    finetune_similarity(model, pairs, epochs=config.sts_epochs)
    print(f"model saw {len(model.fitted_pairs)} pairs, epoch log {model.fit_epochs}")


if __name__ == "__main__":
    main()
