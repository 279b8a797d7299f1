"""Command-line interface: generate, rank, evaluate, and augment.

Each subcommand loads a flat key=value config (every key is listed under
``--help``), applies flag overrides, wires the configured backends, and runs
one operation.  Exit codes: 0 success, 1 run error, 2 usage/configuration
error.

Determinism: with stub backends and fixed seeds every command is
reproducible byte-for-byte, including under ``--jobs N`` — workers compute
in parallel, but results are merged and written in input order, and a global
lock serializes backends that do not declare themselves concurrency-safe.
"""

from __future__ import annotations

import argparse
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from .augment import augment_dataset
from .config import (
    RunConfig,
    build_gloss_selector,
    build_pair_model,
    build_pipeline,
    build_scorers,
    build_translator,
    config_help_text,
    load_configured_lexicon,
    load_run_config,
)
from .dataset_io import (
    LexSubInstance,
    PredictionRecord,
    build_candidate_pools,
    parse_gold,
    parse_instances,
    parse_predictions,
    write_predictions,
)
from .errors import ConfigError, LexSubError, ValidationError
from .metrics import evaluate_dataset, format_report, write_report_json
from .proposal import STRATEGY_KINDS
from .ranking import ScoredCandidate, tune_weights
from .sentence import (
    build_sts_pairs,
    finetune_similarity,
    read_sts_pairs,
    write_sts_pairs,
)


def _existing_path(value: str | Path | None, what: str) -> Path:
    if value is None:
        raise ConfigError(f"{what}: no path given on the command line or in the config")
    path = Path(value)
    if not path.is_file():
        raise ConfigError(f"{what}: file not found: {path}")
    return path


def _prepare_output(value: str) -> Path:
    path = Path(value)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _load_config(args: argparse.Namespace, overrides: dict[str, str]) -> RunConfig:
    return load_run_config(args.config, overrides)


def _strategy_overrides(args: argparse.Namespace) -> dict[str, str]:
    overrides: dict[str, str] = {}
    if getattr(args, "strategy", None) is not None:
        overrides["proposal.strategy"] = args.strategy
    if getattr(args, "seed", None) is not None:
        overrides["proposal.seed"] = str(args.seed)
    if getattr(args, "k", None) is not None:
        overrides["candidates.k"] = str(args.k)
    return overrides


RankOutcome = tuple[LexSubInstance, "list[ScoredCandidate] | None", "LexSubError | None"]


def _rank_all(
    concurrency_safe: bool,
    instances: Sequence[LexSubInstance],
    ranker: Callable[[LexSubInstance], list[ScoredCandidate]],
    jobs: int,
) -> list[RankOutcome]:
    """Run ``ranker`` over all instances, preserving input order.

    Per-instance failures are captured, not raised, so callers can choose
    between strict and skip-and-report handling.  When any backend is not
    concurrency-safe, a single lock serializes the actual ranking work.
    """
    if jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {jobs}")
    lock = threading.Lock() if (jobs > 1 and not concurrency_safe) else None

    def worker(instance: LexSubInstance) -> RankOutcome:
        try:
            if lock is not None:
                with lock:
                    return (instance, ranker(instance), None)
            return (instance, ranker(instance), None)
        except LexSubError as exc:
            return (instance, None, exc)

    if jobs == 1:
        return [worker(instance) for instance in instances]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(worker, instances))


def _report_outcomes(
    outcomes: list[RankOutcome], strict: bool
) -> list[tuple[LexSubInstance, list[ScoredCandidate]]]:
    """Split outcomes into successes, honoring strict vs skip-and-report."""
    successes = []
    for instance, ranked, error in outcomes:
        if error is not None:
            if strict:
                raise error
            print(f"skipped {instance.key} {instance.instance_id}: {error}", file=sys.stderr)
            continue
        assert ranked is not None
        successes.append((instance, ranked))
    return successes


def cmd_substitute(args: argparse.Namespace) -> int:
    """Generate and rank substitutes; write best and oot prediction files."""
    config = _load_config(args, _strategy_overrides(args))
    instances = parse_instances(
        _existing_path(args.instances or config.instances_path, "instances")
    )
    pipeline = build_pipeline(config)
    outcomes = _rank_all(
        pipeline.scorers.concurrency_safe(), instances, pipeline.rank_instance, args.jobs
    )

    best_records: list[PredictionRecord] = []
    oot_records: list[PredictionRecord] = []
    for instance, ranked in _report_outcomes(outcomes, args.strict):
        if not ranked:
            message = f"no candidates for {instance.key} {instance.instance_id}"
            if args.strict:
                raise ValidationError(message)
            print(f"skipped {message}", file=sys.stderr)
            continue
        guesses = [candidate.word for candidate in ranked]
        best_records.append(PredictionRecord(instance.key, instance.instance_id, guesses[:1]))
        oot_records.append(PredictionRecord(instance.key, instance.instance_id, guesses[:10]))

    output = _prepare_output(args.output)
    write_predictions(best_records, "best", f"{output}.best")
    write_predictions(oot_records, "oot", f"{output}.oot")
    print(f"wrote {len(best_records)} predictions to {output}.best and {output}.oot")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    """Score a prediction file against gold and print the report."""
    config = _load_config(args, {})
    gold = parse_gold(_existing_path(args.gold or config.gold_path, "gold"))
    predictions = parse_predictions(_existing_path(args.predictions, "predictions"))
    report = evaluate_dataset(predictions, gold, args.mode, args.coverage_only)
    if report.errors:
        level = "warning" if args.skip_errors else "error"
        for message in report.errors:
            print(f"{level}: {message}", file=sys.stderr)
        if not args.skip_errors:
            return 1
    sys.stdout.write(format_report(report, gap_percent=args.gap_percent))
    if args.json:
        write_report_json(report, _prepare_output(args.json))
    return 0


def cmd_rank_candidates(args: argparse.Namespace) -> int:
    """Rank the gold-derived candidate pool per instance; report mean GAP."""
    config = _load_config(args, _strategy_overrides(args))
    instances = parse_instances(
        _existing_path(args.instances or config.instances_path, "instances")
    )
    gold = parse_gold(_existing_path(args.gold or config.gold_path, "gold"))
    pools = build_candidate_pools(gold)
    pipeline = build_pipeline(config)

    def ranker(instance: LexSubInstance) -> list[ScoredCandidate]:
        pool = pools.get(instance.key)
        if not pool:
            raise ValidationError(f"no single-word candidate pool for key {instance.key}")
        return pipeline.rank_pool(instance, pool)

    outcomes = _rank_all(pipeline.scorers.concurrency_safe(), instances, ranker, args.jobs)
    records = [
        PredictionRecord(instance.key, instance.instance_id, [c.word for c in ranked])
        for instance, ranked in _report_outcomes(outcomes, args.strict)
    ]
    write_predictions(records, "best", _prepare_output(args.output))
    report = evaluate_dataset(records, gold, "ranking", args.coverage_only)
    sys.stdout.write(format_report(report, gap_percent=args.gap_percent))
    if args.json:
        write_report_json(report, _prepare_output(args.json))
    return 0


def cmd_build_sts_data(args: argparse.Namespace) -> int:
    """Build sentence-pair training data from gold, synonyms, and round trips."""
    config = _load_config(args, {})
    instances = parse_instances(
        _existing_path(args.instances or config.instances_path, "instances")
    )
    gold = parse_gold(_existing_path(args.gold or config.gold_path, "gold"))
    pairs_from = build_sts_pairs(
        instances,
        gold,
        load_configured_lexicon(config),
        build_gloss_selector(config),
        build_translator(config),
        seed=args.seed,
        route_out=config.route_level1_out,
        route_back=config.route_level1_back,
        route_mid=config.route_level2_mid,
        include_bt_gold=config.include_bt_gold,
        include_bt_synonym=config.include_bt_synonym,
    )
    write_sts_pairs(pairs_from, _prepare_output(args.output))
    print(f"wrote {len(pairs_from)} sentence pairs to {args.output}")
    return 0


def cmd_finetune(args: argparse.Namespace) -> int:
    """Fine-tune the sentence-pair model on a pair TSV."""
    overrides = {"sts.epochs": str(args.epochs)} if args.epochs is not None else {}
    config = _load_config(args, overrides)
    pairs = read_sts_pairs(_existing_path(args.pairs, "pairs"))
    model = build_pair_model(config)
    finetune_similarity(model, pairs, config.sts_epochs)
    print(f"fine-tuned pair model on {len(pairs)} pairs for {config.sts_epochs} epochs")
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    """Expand a label<TAB>text dataset with substitution variants."""
    config = _load_config(args, _strategy_overrides(args))
    pipeline = build_pipeline(config)
    input_path = _existing_path(args.input, "input")
    warnings = augment_dataset(
        pipeline,
        input_path,
        _prepare_output(args.output),
        args.per_example,
        args.seed,
        strict=args.strict,
    )
    for message in warnings:
        print(f"skipped {message}", file=sys.stderr)
    print(f"augmented {input_path} -> {args.output} ({args.per_example} variants per line)")
    return 0


def cmd_tune_weights(args: argparse.Namespace) -> int:
    """Grid-search combination weights on a trial set; print config lines."""
    overrides = _strategy_overrides(args)
    if args.grid_step is not None:
        overrides["tune.grid_step"] = str(args.grid_step)
    config = _load_config(args, overrides)
    instances = parse_instances(
        _existing_path(args.instances or config.instances_path, "instances")
    )
    gold = parse_gold(_existing_path(args.gold or config.gold_path, "gold"))
    scorers = build_scorers(config)
    weights = tune_weights(instances, gold, scorers, config.grid_step, config.candidate_count)
    print(f"weights.proposal = {weights.proposal:g}")
    print(f"weights.gloss = {weights.gloss:g}")
    print(f"weights.sentence = {weights.sentence:g}")
    print(f"weights.validation = {weights.validation:g}")
    return 0


def _add_config_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="key=value configuration file")


def _add_strategy_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--strategy",
        choices=STRATEGY_KINDS,
        help="override proposal.strategy for this run",
    )
    parser.add_argument(
        "--seed", type=int, help="override proposal.seed (gaussian/dropout strategies)"
    )


def _add_jobs_and_strict(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--jobs", type=int, default=1, metavar="N", help="instances ranked in parallel (default 1)"
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="fail on the first instance error instead of skip-and-report",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexsub",
        description=(
            "Lexical substitution toolkit: generate, rank, and evaluate word "
            "substitutes; build similarity training pairs; augment datasets."
        ),
        epilog=config_help_text(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    substitute = commands.add_parser(
        "substitute",
        help="generate ranked substitutes; write .best and .oot prediction files",
    )
    _add_config_flag(substitute)
    substitute.add_argument("--instances", metavar="PATH", help="instance TSV to process")
    substitute.add_argument(
        "--output", required=True, metavar="PATH", help="output base path (suffixes added)"
    )
    _add_strategy_flags(substitute)
    substitute.add_argument("--k", type=int, help="override candidates.k")
    _add_jobs_and_strict(substitute)
    substitute.set_defaults(func=cmd_substitute)

    evaluate = commands.add_parser("evaluate", help="score a prediction file against gold")
    _add_config_flag(evaluate)
    evaluate.add_argument("--predictions", required=True, metavar="PATH")
    evaluate.add_argument("--gold", metavar="PATH")
    evaluate.add_argument(
        "--mode",
        choices=("generation", "ranking"),
        default="generation",
        help="generation: best/oot/P@1; ranking: mean GAP (default generation)",
    )
    evaluate.add_argument(
        "--coverage-only",
        action="store_true",
        help="average only over predicted instances instead of all gold instances",
    )
    evaluate.add_argument(
        "--gap-percent", action="store_true", help="report GAP on a 0-100 scale"
    )
    evaluate.add_argument(
        "--skip-errors",
        action="store_true",
        help="downgrade unknown/duplicate prediction rows to warnings",
    )
    evaluate.add_argument("--json", metavar="PATH", help="also write the report as JSON")
    evaluate.set_defaults(func=cmd_evaluate)

    rank = commands.add_parser(
        "rank-candidates",
        help="rank the gold-derived candidate pool per instance and report GAP",
    )
    _add_config_flag(rank)
    rank.add_argument("--instances", metavar="PATH")
    rank.add_argument("--gold", metavar="PATH")
    rank.add_argument("--output", required=True, metavar="PATH", help="ranked-list output file")
    _add_strategy_flags(rank)
    rank.add_argument(
        "--coverage-only",
        action="store_true",
        help="average GAP only over instances that were ranked",
    )
    rank.add_argument("--gap-percent", action="store_true", help="report GAP on a 0-100 scale")
    rank.add_argument("--json", metavar="PATH", help="also write the report as JSON")
    _add_jobs_and_strict(rank)
    rank.set_defaults(func=cmd_rank_candidates)

    sts = commands.add_parser(
        "build-sts-data", help="build sentence-pair similarity training data"
    )
    _add_config_flag(sts)
    sts.add_argument("--instances", metavar="PATH")
    sts.add_argument("--gold", metavar="PATH")
    sts.add_argument("--output", required=True, metavar="PATH", help="pair TSV output file")
    sts.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    sts.set_defaults(func=cmd_build_sts_data)

    finetune = commands.add_parser(
        "finetune", help="fine-tune the sentence-pair model on a pair TSV"
    )
    _add_config_flag(finetune)
    finetune.add_argument("--pairs", required=True, metavar="PATH", help="pair TSV file")
    finetune.add_argument("--epochs", type=int, help="override sts.epochs")
    finetune.set_defaults(func=cmd_finetune)

    augment = commands.add_parser(
        "augment", help="expand a label<TAB>text dataset with substitution variants"
    )
    _add_config_flag(augment)
    augment.add_argument("--input", required=True, metavar="PATH", help="label<TAB>text file")
    augment.add_argument("--output", required=True, metavar="PATH")
    augment.add_argument(
        "--per-example", type=int, default=1, metavar="N", help="variants per line (default 1)"
    )
    augment.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    augment.add_argument("--k", type=int, help="override candidates.k")
    augment.add_argument(
        "--strict", action="store_true", help="fail on the first variant error"
    )
    augment.set_defaults(func=cmd_augment)

    tune = commands.add_parser(
        "tune-weights", help="grid-search combination weights on a trial set"
    )
    _add_config_flag(tune)
    tune.add_argument("--instances", metavar="PATH")
    tune.add_argument("--gold", metavar="PATH")
    tune.add_argument("--grid-step", type=float, help="override tune.grid_step")
    _add_strategy_flags(tune)
    tune.add_argument("--k", type=int, help="override candidates.k")
    tune.set_defaults(func=cmd_tune_weights)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LexSubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
