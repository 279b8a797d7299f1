"""Benchmark file formats: instances, gold annotations, prediction files.

Instance files are tab-separated: ``key<TAB>id<TAB>target_index<TAB>sentence``
with a space-tokenized sentence.  Gold files follow the official scorer
layout ``key id :: sub1 w1;sub2 w2;``.  Prediction files use ``::`` (best)
or ``:::`` (out-of-ten) separators and are consumable by the official
scorer.  Substitute strings are kept verbatim at parse time; lowercasing
happens only inside the metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

from .errors import ParseError, ValidationError

POS_TAGS = ("n", "v", "a", "r")


def split_key(key: str) -> tuple[str, str]:
    """Split a ``lemma.pos`` key, validating the pos tag."""
    if key.count(".") != 1:
        raise ValidationError(f"key {key!r} must contain exactly one '.'")
    lemma, pos = key.split(".")
    if not lemma:
        raise ValidationError(f"key {key!r} has an empty lemma")
    if pos not in POS_TAGS:
        raise ValidationError(f"key {key!r} has pos {pos!r}, expected one of {POS_TAGS}")
    return lemma, pos


@dataclass(frozen=True)
class LexSubInstance:
    """One evaluation item: a tokenized sentence with a marked target token."""

    key: str
    instance_id: int
    target_index: int
    tokens: tuple[str, ...]

    def __post_init__(self):
        split_key(self.key)
        if self.instance_id < 1:
            raise ValidationError(f"instance id must be positive, got {self.instance_id}")
        if not self.tokens or any(not t for t in self.tokens):
            raise ValidationError("tokens must be a non-empty list of non-empty strings")
        if not 0 <= self.target_index < len(self.tokens):
            raise ValidationError(
                f"target_index out of range: {self.target_index} for "
                f"{len(self.tokens)} tokens"
            )

    @property
    def lemma(self) -> str:
        return split_key(self.key)[0]

    @property
    def pos(self) -> str:
        return split_key(self.key)[1]

    @property
    def target_token(self) -> str:
        return self.tokens[self.target_index]


@dataclass(frozen=True)
class GoldAnnotations:
    """Gold substitutes with annotator counts for one instance."""

    key: str
    instance_id: int
    weights: dict[str, int]

    def __post_init__(self):
        if not self.weights:
            raise ValidationError(f"{self.key} {self.instance_id}: empty gold weights")
        for sub, count in self.weights.items():
            if count < 1:
                raise ValidationError(
                    f"{self.key} {self.instance_id}: weight for {sub!r} must be >= 1"
                )

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def mode(self) -> str | None:
        """The unique maximum-weight substitute, or None when the max is tied."""
        best = max(self.weights.values())
        top = [sub for sub, count in self.weights.items() if count == best]
        return top[0] if len(top) == 1 else None


@dataclass(frozen=True)
class PredictionRecord:
    """Ordered substitute guesses for one instance."""

    key: str
    instance_id: int
    guesses: tuple[str, ...]

    def __post_init__(self):
        if not self.guesses:
            raise ValidationError(f"{self.key} {self.instance_id}: no guesses")
        if any(not g for g in self.guesses):
            raise ValidationError(f"{self.key} {self.instance_id}: empty guess")
        if len(set(self.guesses)) != len(self.guesses):
            raise ValidationError(f"{self.key} {self.instance_id}: duplicate guesses")


def parse_instances(path: str | Path) -> list[LexSubInstance]:
    """Parse an instance file, one instance per non-empty line, order preserved."""
    instances = []
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(
                    f"expected 4 tab-separated fields, got {len(fields)}", line_number
                )
            key, id_text, index_text, sentence = fields
            try:
                instance_id = int(id_text)
                target_index = int(index_text)
            except ValueError:
                raise ParseError(
                    f"id and target_index must be integers, got {id_text!r} / "
                    f"{index_text!r}",
                    line_number,
                ) from None
            tokens = sentence.split(" ")
            try:
                instances.append(
                    LexSubInstance(key, instance_id, target_index, tuple(tokens))
                )
            except ValidationError as exc:
                raise ValidationError(f"line {line_number}: {exc}") from None
    return instances


def parse_gold(path: str | Path) -> dict[tuple[str, int], GoldAnnotations]:
    """Parse a gold file into a map keyed by (key, instance id).

    Substitutes may contain internal spaces; the annotator count is the last
    space-separated token of each ``;``-delimited entry.  A repeated
    (key, id) line is an error rather than a silent merge.
    """
    gold: dict[tuple[str, int], GoldAnnotations] = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            head, sep, tail = line.partition("::")
            if not sep:
                raise ParseError("missing '::' separator", line_number)
            head_fields = head.split()
            if len(head_fields) != 2:
                raise ParseError(
                    f"expected 'key id' before '::', got {head.strip()!r}", line_number
                )
            key, id_text = head_fields
            try:
                instance_id = int(id_text)
            except ValueError:
                raise ParseError(f"non-integer instance id {id_text!r}", line_number) from None

            weights: dict[str, int] = {}
            for chunk in tail.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                sub, _, weight_text = chunk.rpartition(" ")
                if not sub:
                    raise ParseError(f"entry {chunk!r} has no weight", line_number)
                try:
                    weight = int(weight_text)
                except ValueError:
                    raise ParseError(
                        f"non-integer weight {weight_text!r} for {sub!r}", line_number
                    ) from None
                if sub in weights:
                    raise ParseError(f"duplicate substitute {sub!r}", line_number)
                weights[sub] = weight

            map_key = (key, instance_id)
            if map_key in gold:
                raise ValidationError(
                    f"line {line_number}: duplicate gold entry for {key} {instance_id}"
                )
            try:
                gold[map_key] = GoldAnnotations(key, instance_id, weights)
            except ValidationError as exc:
                raise ParseError(str(exc), line_number) from None
    return gold


PredictionMode = Literal["best", "oot"]

_SEPARATORS: dict[str, str] = {"best": "::", "oot": ":::"}


def write_predictions(
    records: Iterable[PredictionRecord], mode: PredictionMode, path: str | Path
) -> None:
    """Write a scorer-compatible prediction file, one record per line.

    ``best`` uses the ``::`` separator, ``oot`` uses ``:::`` and allows at
    most 10 guesses per record.
    """
    if mode not in _SEPARATORS:
        raise ValidationError(f"mode must be 'best' or 'oot', got {mode!r}")
    separator = _SEPARATORS[mode]
    lines = []
    for record in records:
        if mode == "oot" and len(record.guesses) > 10:
            raise ValidationError(
                f"{record.key} {record.instance_id}: oot records allow at most "
                f"10 guesses, got {len(record.guesses)}"
            )
        for guess in record.guesses:
            if ";" in guess or "\n" in guess:
                raise ValidationError(
                    f"{record.key} {record.instance_id}: guess {guess!r} contains "
                    "a reserved character"
                )
        lines.append(f"{record.key} {record.instance_id} {separator} " + ";".join(record.guesses))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def parse_predictions(path: str | Path) -> list[PredictionRecord]:
    """Parse a prediction file written in either the best or oot format."""
    records = []
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            # ':::' must be probed first; '::' is a prefix of it.
            for separator in (" ::: ", " :: "):
                head, sep, tail = line.partition(separator)
                if sep:
                    break
            else:
                raise ParseError("missing '::' or ':::' separator", line_number)
            head_fields = head.split()
            if len(head_fields) != 2:
                raise ParseError(f"expected 'key id', got {head!r}", line_number)
            key, id_text = head_fields
            try:
                instance_id = int(id_text)
            except ValueError:
                raise ParseError(f"non-integer instance id {id_text!r}", line_number) from None
            guesses = tuple(g for g in (p.strip() for p in tail.split(";")) if g)
            try:
                records.append(PredictionRecord(key, instance_id, guesses))
            except ValidationError as exc:
                raise ParseError(str(exc), line_number) from None
    return records


def build_candidate_pools(
    gold: dict[tuple[str, int], GoldAnnotations]
) -> dict[str, set[str]]:
    """Merge gold substitutes per key into candidate pools for pool ranking.

    Multi-word substitutes (anything containing a space) are discarded, and
    keys whose pool ends up empty are dropped entirely.
    """
    pools: dict[str, set[str]] = {}
    for annotations in gold.values():
        pool = pools.setdefault(annotations.key, set())
        pool.update(sub for sub in annotations.weights if " " not in sub)
    return {key: pool for key, pool in pools.items() if pool}
