"""Substitution-based data augmentation for labeled text datasets.

Each augmented variant of a sentence swaps exactly one word: a position is
sampled uniformly among eligible tokens (alphabetic, length >= 3, so
punctuation and function-word noise are never substituted), candidates are
generated and ranked by the full pipeline, and the replacement is drawn with
probability proportional to the final scores.  Scores are shifted by the
minimum when any are negative, then normalized by their sum; when every
shifted score is zero the draw degenerates to uniform, which is also the
correct limit for all-equal scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset_io import LexSubInstance
from .errors import LexSubError, ParseError, ValidationError
from .ranking import SubstitutionPipeline

Seed = int | Sequence[int]


@dataclass(frozen=True)
class LabeledText:
    """One classification example: ``label<TAB>text`` on disk."""

    label: str
    text: str

    def __post_init__(self):
        if not self.label or not self.text:
            raise ValidationError("label and text must be non-empty")


def _eligible_positions(tokens: Sequence[str]) -> list[int]:
    return [i for i, tok in enumerate(tokens) if tok.isalpha() and len(tok) >= 3]


def sample_index(rng: np.random.Generator, probabilities: np.ndarray) -> int:
    """Inverse-CDF draw: the smallest index whose cumulative mass exceeds u.

    Kept explicit (rather than ``rng.choice``) so the draw's mapping from
    the uniform variate to an index is directly testable.
    """
    u = float(rng.random())
    accumulated = 0.0
    for i, p in enumerate(probabilities):
        accumulated += float(p)
        if u < accumulated:
            return i
    return len(probabilities) - 1


def augment_sentence(
    pipeline: SubstitutionPipeline, tokens: Sequence[str], seed: Seed
) -> list[str]:
    """Replace one sampled word with a score-proportionally sampled substitute.

    Returns the tokens unchanged when nothing is eligible or no candidates
    exist.  Deterministic given the seed: the position draw and the
    substitute draw come from one seeded generator, in that order.
    """
    if not tokens:
        raise ValidationError("token list must be non-empty")
    rng = np.random.default_rng(seed)
    positions = _eligible_positions(tokens)
    if not positions:
        return list(tokens)
    position = positions[int(rng.integers(len(positions)))]

    word = tokens[position].lower()
    instance = LexSubInstance(
        key=f"{word}.n", instance_id=1, target_index=position, tokens=tuple(tokens)
    )
    ranked = pipeline.rank_instance(instance)
    if not ranked:
        return list(tokens)

    finals = np.array([c.final for c in ranked])
    if finals.min() < 0.0:
        finals = finals - finals.min()
    total = float(finals.sum())
    if total > 0.0:
        probabilities = finals / total
    else:
        probabilities = np.full(len(ranked), 1.0 / len(ranked))
    choice = sample_index(rng, probabilities)

    result = list(tokens)
    result[position] = ranked[choice].word
    return result


def read_labeled(path: str | Path) -> list[LabeledText]:
    """Parse a ``label<TAB>text`` file."""
    examples = []
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            label, sep, text = line.partition("\t")
            if not sep:
                raise ParseError("expected 'label<TAB>text'", line_number)
            try:
                examples.append(LabeledText(label, text))
            except ValidationError as exc:
                raise ParseError(str(exc), line_number) from None
    return examples


def augment_dataset(
    pipeline: SubstitutionPipeline,
    input_path: str | Path,
    output_path: str | Path,
    per_example: int,
    seed: int,
    strict: bool = False,
) -> list[str]:
    """Write each input line followed by ``per_example`` augmented variants.

    Labels are preserved and token counts never change.  Every variant draws
    from a generator seeded by (seed, line index, variant index), so output
    is byte-identical across runs for a fixed seed.

    A variant whose augmentation fails is dropped and described in the
    returned warning list; with ``strict`` the failure is raised instead.
    """
    if per_example < 0:
        raise ValidationError(f"per_example must be >= 0, got {per_example}")
    examples = read_labeled(input_path)
    lines = []
    warnings = []
    for line_index, example in enumerate(examples):
        lines.append(f"{example.label}\t{example.text}")
        tokens = example.text.split()
        for variant in range(per_example):
            try:
                augmented = augment_sentence(pipeline, tokens, (seed, line_index, variant))
            except LexSubError as exc:
                if strict:
                    raise
                warnings.append(f"line {line_index + 1} variant {variant}: {exc}")
                continue
            lines.append(f"{example.label}\t{' '.join(augmented)}")
    Path(output_path).write_text(
        "".join(line + "\n" for line in lines), encoding="utf-8"
    )
    return warnings
