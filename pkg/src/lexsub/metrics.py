"""Official evaluation measures: best, oot, their mode variants, P@1, GAP.

Semantics follow the SemEval-2007 task-10 scorer.  For an instance with
guess set G and gold weights H (total weight T):

- best item score  = sum(H[g] for g in G) / (|G| * T), averaged * 100
- oot item score   = sum(H[g] for g in G) / T, averaged * 100 (|G| <= 10)
- mode variants score only instances with a unique maximum-weight gold
  substitute: best-mode checks the first guess, oot-mode containment
- P@1 = 100 * fraction of instances whose top guess is any gold substitute
- GAP credits each gold hit by the average accumulated gold weight at its
  rank, normalized by the ideal (weight-descending) ranking; it lives in
  [0, 1] while the other measures live in [0, 100]

Gold matching is case-insensitive.  By default instances with no prediction
count as misses (the official scorer penalizes non-coverage); pass
``coverage_only=True`` to average over predicted instances only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

from .dataset_io import GoldAnnotations, PredictionRecord
from .errors import ValidationError


def _lower_weights(weights: dict[str, int | float]) -> dict[str, float]:
    lowered: dict[str, float] = {}
    for sub, weight in weights.items():
        lowered[sub.lower()] = lowered.get(sub.lower(), 0.0) + float(weight)
    return lowered


def _check_known(
    predictions: Sequence[PredictionRecord],
    gold: dict[tuple[str, int], GoldAnnotations],
) -> None:
    seen: set[tuple[str, int]] = set()
    for record in predictions:
        ident = (record.key, record.instance_id)
        if ident not in gold:
            raise ValidationError(f"no gold entry for {record.key} {record.instance_id}")
        if ident in seen:
            raise ValidationError(f"duplicate prediction for {record.key} {record.instance_id}")
        seen.add(ident)


def best_scores(
    predictions: Sequence[PredictionRecord],
    gold: dict[tuple[str, int], GoldAnnotations],
    coverage_only: bool = False,
) -> tuple[float, float]:
    """(best, best-mode), each 100 * mean over their instance sets."""
    _check_known(predictions, gold)
    by_id = {(r.key, r.instance_id): r for r in predictions}

    item_total = 0.0
    mode_hits = 0
    mode_count = 0
    count = 0
    for ident, entry in gold.items():
        record = by_id.get(ident)
        if record is None and coverage_only:
            continue
        count += 1
        weights = _lower_weights(entry.weights)
        if record is not None:
            hits = sum(weights.get(g.lower(), 0.0) for g in record.guesses)
            item_total += hits / (len(record.guesses) * entry.total_weight)
        mode = entry.mode()
        if mode is not None:
            mode_count += 1
            if record is not None and record.guesses[0].lower() == mode.lower():
                mode_hits += 1
    best = 100.0 * item_total / count if count else 0.0
    best_mode = 100.0 * mode_hits / mode_count if mode_count else 0.0
    return best, best_mode


def oot_scores(
    predictions: Sequence[PredictionRecord],
    gold: dict[tuple[str, int], GoldAnnotations],
    coverage_only: bool = False,
) -> tuple[float, float]:
    """(oot, oot-mode): coverage of the gold list by up to ten guesses."""
    _check_known(predictions, gold)
    for record in predictions:
        if len(record.guesses) > 10:
            raise ValidationError(
                f"{record.key} {record.instance_id}: oot allows at most 10 guesses"
            )
    by_id = {(r.key, r.instance_id): r for r in predictions}

    item_total = 0.0
    mode_hits = 0
    mode_count = 0
    count = 0
    for ident, entry in gold.items():
        record = by_id.get(ident)
        if record is None and coverage_only:
            continue
        count += 1
        weights = _lower_weights(entry.weights)
        if record is not None:
            hits = sum(weights.get(g.lower(), 0.0) for g in record.guesses)
            item_total += hits / entry.total_weight
        mode = entry.mode()
        if mode is not None:
            mode_count += 1
            if record is not None and mode.lower() in {g.lower() for g in record.guesses}:
                mode_hits += 1
    oot = 100.0 * item_total / count if count else 0.0
    oot_mode = 100.0 * mode_hits / mode_count if mode_count else 0.0
    return oot, oot_mode


def precision_at_1(
    rankings: Sequence[PredictionRecord],
    gold: dict[tuple[str, int], GoldAnnotations],
    coverage_only: bool = False,
) -> float:
    """100 * fraction of instances whose top-ranked candidate is gold."""
    _check_known(rankings, gold)
    by_id = {(r.key, r.instance_id): r for r in rankings}
    hits = 0
    count = 0
    for ident, entry in gold.items():
        record = by_id.get(ident)
        if record is None and coverage_only:
            continue
        count += 1
        if record is not None and record.guesses[0].lower() in _lower_weights(entry.weights):
            hits += 1
    return 100.0 * hits / count if count else 0.0


def gap(ranked: Sequence[str], gold_weights: dict[str, float]) -> float:
    """Generalized average precision of a ranked list against weighted gold.

    Candidates absent from gold contribute weight 0 but still advance the
    rank index; the denominator is the same sum evaluated on the ideal
    (weight-descending) gold ranking.  Returns a value in [0, 1].
    """
    if not gold_weights:
        raise ValidationError("gold weights must be non-empty")
    if any(w <= 0 for w in gold_weights.values()):
        raise ValidationError("gold weights must be positive")
    lowered_ranked = [word.lower() for word in ranked]
    if len(set(lowered_ranked)) != len(lowered_ranked):
        raise ValidationError("ranked list contains duplicates")
    weights = _lower_weights(gold_weights)

    numerator = 0.0
    cumulative = 0.0
    for rank, word in enumerate(lowered_ranked, start=1):
        weight = weights.get(word, 0.0)
        cumulative += weight
        if weight > 0.0:
            numerator += cumulative / rank

    denominator = 0.0
    cumulative = 0.0
    for rank, weight in enumerate(sorted(weights.values(), reverse=True), start=1):
        cumulative += weight
        denominator += cumulative / rank
    return numerator / denominator


EvaluationMode = Literal["generation", "ranking"]


@dataclass
class EvaluationReport:
    """Computed measures plus per-measure instance counts and soft errors.

    best/oot/mode/P@1 are percentages in [0, 100]; gap is a fraction in
    [0, 1].  Measures not computed for the mode are None.
    """

    best: float | None = None
    best_mode: float | None = None
    oot: float | None = None
    oot_mode: float | None = None
    p_at_1: float | None = None
    gap: float | None = None
    counts: dict[str, int] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    def measures(self) -> dict[str, float]:
        names = ("best", "best_mode", "oot", "oot_mode", "p_at_1", "gap")
        return {n: getattr(self, n) for n in names if getattr(self, n) is not None}


def evaluate_dataset(
    rankings: Iterable[PredictionRecord],
    gold: dict[tuple[str, int], GoldAnnotations],
    mode: EvaluationMode,
    coverage_only: bool = False,
) -> EvaluationReport:
    """Evaluate ranked predictions against gold without aborting on bad rows.

    Generation mode scores best/best-mode on each record's first guess,
    oot/oot-mode on its first ten, and P@1.  Ranking mode computes mean GAP
    after discarding multi-word gold substitutes and dropping instances left
    with no gold.  Records without a gold entry are reported in
    ``errors`` and skipped.
    """
    report = EvaluationReport()
    known: list[PredictionRecord] = []
    seen: set[tuple[str, int]] = set()
    for record in rankings:
        ident = (record.key, record.instance_id)
        if ident not in gold:
            report.errors.append(f"no gold entry for {record.key} {record.instance_id}")
            continue
        if ident in seen:
            report.errors.append(
                f"duplicate prediction for {record.key} {record.instance_id}"
            )
            continue
        seen.add(ident)
        known.append(record)

    if mode == "generation":
        top_1 = [
            PredictionRecord(r.key, r.instance_id, r.guesses[:1]) for r in known
        ]
        top_10 = [
            PredictionRecord(r.key, r.instance_id, r.guesses[:10]) for r in known
        ]
        report.best, report.best_mode = best_scores(top_1, gold, coverage_only)
        report.oot, report.oot_mode = oot_scores(top_10, gold, coverage_only)
        report.p_at_1 = precision_at_1(top_1, gold, coverage_only)
        scored = len(gold) if not coverage_only else len(known)
        with_mode = sum(
            1
            for ident, entry in gold.items()
            if entry.mode() is not None and (not coverage_only or ident in seen)
        )
        report.counts = {
            "best": scored,
            "best_mode": with_mode,
            "oot": scored,
            "oot_mode": with_mode,
            "p_at_1": scored,
        }
    elif mode == "ranking":
        by_id = {(r.key, r.instance_id): r for r in known}
        values = []
        for ident, entry in gold.items():
            single_word = {s: w for s, w in entry.weights.items() if " " not in s}
            if not single_word:
                continue  # instance retained no gold after multi-word removal
            record = by_id.get(ident)
            if record is None:
                if coverage_only:
                    continue
                values.append(0.0)
                continue
            values.append(gap(record.guesses, dict(single_word)))
        report.gap = sum(values) / len(values) if values else 0.0
        report.counts = {"gap": len(values)}
    else:
        raise ValidationError(f"mode must be 'generation' or 'ranking', got {mode!r}")
    return report


def format_report(report: EvaluationReport, gap_percent: bool = False) -> str:
    """Line-oriented ``measure<TAB>value`` text rendering of a report."""
    lines = []
    for name, value in report.measures().items():
        if name == "gap" and gap_percent:
            value *= 100.0
        lines.append(f"{name}\t{value:.6f}")
    return "".join(line + "\n" for line in lines)


def write_report_json(report: EvaluationReport, path: str | Path) -> None:
    """Machine-readable report: measures, counts, and accumulated errors."""
    payload = {
        "measures": report.measures(),
        "counts": report.counts,
        "errors": report.errors,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
