"""Synonym, relation, and gloss lookups over a WordNet-style lexicon.

The lexicon is loaded from a TSV file
(``synset_id<TAB>pos<TAB>gloss<TAB>lemmas<TAB>hypernym_ids<TAB>hyponym_ids``)
and is immutable afterwards; all lookups are read-only.  An adapter for a
real WordNet installation only has to emit this format.

Lemma matching is case-insensitive and candidates are emitted lowercase,
matching the lowercased benchmarks.  When a (word, pos) pair has no synsets
the lookup retries across all pos tags before giving up: pos coverage in
lexical databases is uneven and generation should degrade gracefully.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from .backends import GlossSelector
from .dataset_io import POS_TAGS
from .errors import LexiconError, ParseError, ValidationError

# Serializes gloss-selector backends that declare themselves unsafe.
_UNSAFE_SELECTOR_LOCK = threading.Lock()


@dataclass(frozen=True)
class SynsetRecord:
    """One synset: mutually synonymous lemmas sharing a gloss."""

    synset_id: str
    pos: str
    lemmas: frozenset[str]
    gloss: str
    hypernym_ids: frozenset[str]
    hyponym_ids: frozenset[str]

    def __post_init__(self):
        if self.pos not in POS_TAGS:
            raise ValidationError(f"synset {self.synset_id}: bad pos {self.pos!r}")
        if not self.lemmas:
            raise ValidationError(f"synset {self.synset_id}: no lemmas")
        if not self.gloss:
            raise ValidationError(f"synset {self.synset_id}: empty gloss")


@dataclass(frozen=True)
class Lexicon:
    """Synset records plus a (lowercase lemma, pos) index, fixed after load."""

    records: dict[str, SynsetRecord]
    index: dict[tuple[str, str], list[str]]

    def synsets(self, word: str, pos: str | None = None, fallback: bool = True) -> list[SynsetRecord]:
        """Synsets for a word, in file order.

        With a pos, the pos-specific synsets are returned; if there are none
        and ``fallback`` is set, synsets under every pos tag are returned
        instead.  ``pos=None`` always spans all pos tags.
        """
        lemma = word.lower()
        if pos is not None:
            ids = self.index.get((lemma, pos), [])
            if ids or not fallback:
                return [self.records[i] for i in ids]
        seen: dict[str, None] = {}
        for tag in POS_TAGS:
            for synset_id in self.index.get((lemma, tag), []):
                seen.setdefault(synset_id)
        return [self.records[i] for i in seen]


def load_lexicon(path: str | Path) -> Lexicon:
    """Load and index a lexicon TSV file.

    Multi-word lemmas may use underscores in the file; they are stored with
    spaces.  The last two fields (hypernym and hyponym id lists) may be
    empty.  Relation ids that do not resolve to a loaded synset are a load
    error.
    """
    records: dict[str, SynsetRecord] = {}
    index: dict[tuple[str, str], list[str]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 6:
                raise ParseError(
                    f"expected 6 tab-separated fields, got {len(fields)}", line_number
                )
            synset_id, pos, gloss, lemma_field, hyper_field, hypo_field = fields
            if synset_id in records:
                raise ParseError(f"duplicate synset id {synset_id!r}", line_number)
            lemmas = frozenset(
                lemma.replace("_", " ").strip()
                for lemma in lemma_field.split(",")
                if lemma.strip()
            )
            try:
                record = SynsetRecord(
                    synset_id=synset_id,
                    pos=pos,
                    lemmas=lemmas,
                    gloss=gloss,
                    hypernym_ids=frozenset(i for i in hyper_field.split(",") if i),
                    hyponym_ids=frozenset(i for i in hypo_field.split(",") if i),
                )
            except ValidationError as exc:
                raise ParseError(str(exc), line_number) from None
            records[synset_id] = record
            for lemma in record.lemmas:
                ids = index.setdefault((lemma.lower(), record.pos), [])
                if synset_id not in ids:
                    ids.append(synset_id)

    dangling = sorted(
        related
        for record in records.values()
        for related in record.hypernym_ids | record.hyponym_ids
        if related not in records
    )
    if dangling:
        raise LexiconError(f"dangling relation ids: {', '.join(dangling)}")
    return Lexicon(records=records, index=index)


def all_synonyms(lexicon: Lexicon, word: str) -> set[str]:
    """Lowercased lemmas sharing any synset with ``word``, under any pos.

    The word itself is excluded (case-insensitively); unknown words give the
    empty set.  Spanning every pos tag minimizes the chance of a synonym set
    that contains nothing but the word itself.
    """
    lemma = word.lower()
    synonyms: set[str] = set()
    for record in lexicon.synsets(word, pos=None):
        synonyms.update(l.lower() for l in record.lemmas)
    synonyms.discard(lemma)
    return synonyms


def relation_candidates(lexicon: Lexicon, lemma: str, pos: str) -> set[str]:
    """Single-word substitute candidates from synonym/hypernym/hyponym links.

    Takes the union of lemmas over the (lemma, pos) synsets plus their
    hypernym and hyponym synsets, one level deep.  The query lemma and any
    multi-word lemma are excluded; everything is lowercased.
    """
    candidates: set[str] = set()
    for record in lexicon.synsets(lemma, pos):
        related = [record]
        related += [lexicon.records[i] for i in record.hypernym_ids]
        related += [lexicon.records[i] for i in record.hyponym_ids]
        for synset in related:
            candidates.update(l.lower() for l in synset.lemmas)
    candidates.discard(lemma.lower())
    return {c for c in candidates if " " not in c}


def select_synset(
    lexicon: Lexicon,
    gloss_selector: GlossSelector,
    tokens: list[str],
    target_index: int,
    word: str,
    pos: str,
) -> SynsetRecord | None:
    """The context-appropriate synset for ``word``, or None when unknown.

    A single synset is returned without consulting the selector backend;
    with several, the backend chooses among their glosses given the sentence
    context.  Backend failures propagate (they are distinct from the
    None unknown-word answer).
    """
    synsets = lexicon.synsets(word, pos)
    if not synsets:
        return None
    if len(synsets) == 1:
        return synsets[0]
    glosses = [record.gloss for record in synsets]
    if getattr(gloss_selector, "concurrency_safe", False):
        chosen = gloss_selector.choose(list(tokens), target_index, glosses)
    else:
        with _UNSAFE_SELECTOR_LOCK:
            chosen = gloss_selector.choose(list(tokens), target_index, glosses)
    if not 0 <= chosen < len(synsets):
        raise LexiconError(
            f"gloss selector returned index {chosen} for {len(synsets)} glosses"
        )
    return synsets[chosen]


def select_gloss(
    lexicon: Lexicon,
    gloss_selector: GlossSelector,
    tokens: list[str],
    target_index: int,
    word: str,
    pos: str,
) -> str | None:
    """Gloss of the context-appropriate synset for ``word``, or None."""
    record = select_synset(lexicon, gloss_selector, tokens, target_index, word, pos)
    return None if record is None else record.gloss
