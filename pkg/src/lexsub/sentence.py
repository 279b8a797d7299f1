"""Sentence similarity score and the pair set used to fine-tune its model.

The score itself is a thin call into a sentence-pair similarity backend:
similarity between the original sentence and the sentence with the candidate
substituted in.  The interesting machinery is the training-pair builder,
which combines three sources: gold substitutes (labeled by annotator-weight
max-normalization), lemmas of the context-selected synset (labeled 1.0), and
the same pairs rebuilt on a back-translated copy of the sentence when the
target word survives the round trip.

Back-translation is two-level: a plain round trip first, and when that
returns the input unchanged, a second attempt routed through an intermediate
language (out -> mid -> back).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .backends import GlossSelector, PairSimilarityModel, Translator
from .dataset_io import GoldAnnotations, LexSubInstance
from .errors import ParseError, ValidationError
from .lexicon import Lexicon, SynsetRecord, select_synset

PAIR_SOURCES = ("gold", "synonym", "backtranslated-gold", "backtranslated-synonym")


@dataclass(frozen=True)
class SentencePairExample:
    """One (sentence, variant) training pair with a similarity label."""

    text_a: str
    text_b: str
    label: float
    source: str

    def __post_init__(self):
        if not self.text_a or not self.text_b:
            raise ValidationError("pair texts must be non-empty")
        if not 0.0 <= self.label <= 1.0:
            raise ValidationError(f"label must be in [0, 1], got {self.label}")
        if self.source not in PAIR_SOURCES:
            raise ValidationError(f"unknown pair source {self.source!r}")


def _substitute(tokens: list[str] | tuple[str, ...], index: int, word: str) -> str:
    replaced = list(tokens)
    replaced[index] = word
    return " ".join(replaced)


def sentence_similarity_score(
    pair_model: PairSimilarityModel,
    tokens: list[str] | tuple[str, ...],
    target_index: int,
    candidate: str,
) -> float:
    """Backend similarity between the sentence and its substituted variant."""
    if not candidate or " " in candidate:
        raise ValidationError(
            f"candidate must be a non-empty single word, got {candidate!r}"
        )
    if not 0 <= target_index < len(tokens):
        raise ValidationError(f"target_index {target_index} out of range")
    return pair_model.score(" ".join(tokens), _substitute(tokens, target_index, candidate))


def back_translate(
    translator: Translator,
    text: str,
    level1_route_out: str,
    level1_route_back: str,
    level2_route_mid: str,
) -> str:
    """Round-trip translate ``text``, inserting a second hop when it is a no-op.

    Level 1 is out-and-back (two translator calls).  If that reproduces the
    input exactly, the sentence is re-sent through out -> mid -> back (three
    further calls).  The result is returned as-is even if it still equals the
    input.
    """
    round_trip = translator.translate(
        translator.translate(text, level1_route_out), level1_route_back
    )
    if round_trip != text:
        return round_trip
    return translator.translate(
        translator.translate(
            translator.translate(text, level1_route_out), level2_route_mid
        ),
        level1_route_back,
    )


def _chosen_synset(
    lexicon: Lexicon,
    gloss_selector: GlossSelector,
    instance: LexSubInstance,
) -> SynsetRecord | None:
    tokens = list(instance.tokens)
    record = select_synset(
        lexicon, gloss_selector, tokens, instance.target_index,
        instance.target_token, instance.pos,
    )
    if record is None and instance.lemma.lower() != instance.target_token.lower():
        record = select_synset(
            lexicon, gloss_selector, tokens, instance.target_index,
            instance.lemma, instance.pos,
        )
    return record


def build_sts_pairs(
    train_instances: list[LexSubInstance],
    gold: dict[tuple[str, int], GoldAnnotations],
    lexicon: Lexicon,
    gloss_selector: GlossSelector,
    translator: Translator,
    seed: int = 0,
    *,
    route_out: str,
    route_back: str,
    route_mid: str,
    include_bt_gold: bool = True,
    include_bt_synonym: bool = True,
) -> list[SentencePairExample]:
    """Build the similarity-model fine-tuning pairs for a training set.

    Per instance, in deterministic order (instance order, then source
    category, then substitute lexicographically):

    - gold pairs: (sentence, sentence with gold substitute), labeled by the
      substitute's annotator weight divided by the instance's max weight,
      so every instance contributes at least one pair labeled 1.0;
    - synonym pairs: one per other lemma of the context-selected synset of
      the target, labeled 1.0 (skipped when the lexicon has no entry);
    - the same two categories rebuilt on the back-translated sentence when
      it still contains the target token (exact lowercase token match),
      individually toggleable via ``include_bt_gold``/``include_bt_synonym``.

    ``seed`` is reserved for sampling translator backends; the builder
    itself is deterministic.
    """
    del seed
    pairs: list[SentencePairExample] = []
    for instance in train_instances:
        entry = gold.get((instance.key, instance.instance_id))
        if entry is None:
            raise ValidationError(
                f"no gold entry for training instance {instance.key} "
                f"{instance.instance_id}"
            )
        sentence = " ".join(instance.tokens)
        max_weight = max(entry.weights.values())
        gold_labels = [
            (sub, entry.weights[sub] / max_weight) for sub in sorted(entry.weights)
        ]
        for sub, label in gold_labels:
            pairs.append(
                SentencePairExample(
                    sentence, _substitute(instance.tokens, instance.target_index, sub),
                    label, "gold",
                )
            )

        synset = _chosen_synset(lexicon, gloss_selector, instance)
        excluded = {instance.target_token.lower(), instance.lemma.lower()}
        synonyms = (
            sorted(
                {l.lower() for l in synset.lemmas} - excluded
            )
            if synset is not None
            else []
        )
        for synonym in synonyms:
            pairs.append(
                SentencePairExample(
                    sentence,
                    _substitute(instance.tokens, instance.target_index, synonym),
                    1.0, "synonym",
                )
            )

        if not (include_bt_gold or include_bt_synonym):
            continue
        translated = back_translate(translator, sentence, route_out, route_back, route_mid)
        translated_tokens = translated.split()
        target_lower = instance.target_token.lower()
        position = next(
            (i for i, tok in enumerate(translated_tokens) if tok.lower() == target_lower),
            None,
        )
        if position is None:
            continue
        if include_bt_gold:
            for sub, label in gold_labels:
                pairs.append(
                    SentencePairExample(
                        translated, _substitute(translated_tokens, position, sub),
                        label, "backtranslated-gold",
                    )
                )
        if include_bt_synonym:
            for synonym in synonyms:
                pairs.append(
                    SentencePairExample(
                        translated, _substitute(translated_tokens, position, synonym),
                        1.0, "backtranslated-synonym",
                    )
                )
    return pairs


def finetune_similarity(
    pair_model: PairSimilarityModel,
    pairs: list[SentencePairExample],
    epochs: int = 4,
) -> None:
    """Fine-tune the pair model in place; requires exclusive backend access."""
    if not pairs:
        raise ValidationError("cannot fine-tune on an empty pair list")
    if epochs < 0:
        raise ValidationError(f"epochs must be >= 0, got {epochs}")
    pair_model.fit([(p.text_a, p.text_b, p.label) for p in pairs], epochs)


def write_sts_pairs(pairs: list[SentencePairExample], path: str | Path) -> None:
    """Write pairs as TSV: ``text_a<TAB>text_b<TAB>label<TAB>source``."""
    lines = []
    for pair in pairs:
        for text in (pair.text_a, pair.text_b):
            if "\t" in text or "\n" in text:
                raise ValidationError(f"pair text contains a reserved character: {text!r}")
        lines.append(f"{pair.text_a}\t{pair.text_b}\t{pair.label!r}\t{pair.source}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_sts_pairs(path: str | Path) -> list[SentencePairExample]:
    """Parse a pair TSV written by :func:`write_sts_pairs`."""
    pairs = []
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
            text_a, text_b, label_text, source = fields
            try:
                label = float(label_text)
            except ValueError:
                raise ParseError(f"non-numeric label {label_text!r}", line_number) from None
            try:
                pairs.append(SentencePairExample(text_a, text_b, label, source))
            except ValidationError as exc:
                raise ParseError(str(exc), line_number) from None
    return pairs
