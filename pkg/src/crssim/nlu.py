"""Natural language understanding: intent classification, slot extraction,
and the training-time satisfaction classifier.

Intent and satisfaction classification share one scheme: utterances become
sparse TF-IDF vectors and are matched against L2-normalized per-class
centroids by cosine similarity. Slot extraction is a deterministic
gazetteer with greedy longest-match scanning; the lexicon is harvested from
the annotated sample and the item collection.
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dialogue import AnnotatedUtterance, Dialogue, Intent, Participant, SlotValue
from .domain import Domain, ItemCollection
from .errors import EmptySample, UnknownSlot

logger = logging.getLogger(__name__)

UNKNOWN_INTENT = Intent("UNKNOWN")

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# sparse token -> weight map; zero weights are never stored
TokenVector = dict[str, float]


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; drops empty tokens."""
    return _TOKEN_RE.findall(text.lower())


def _l2_normalize(vector: TokenVector) -> TokenVector:
    norm = math.sqrt(sum(w * w for w in vector.values()))
    if norm == 0.0:
        return {}
    return {t: w / norm for t, w in vector.items()}


def _tfidf(tokens: Sequence[str], idf: dict[str, float]) -> TokenVector:
    """Raw term counts weighted by idf; tokens outside the vocabulary are
    ignored (they carry no trained weight)."""
    vector: TokenVector = {}
    for token, count in Counter(tokens).items():
        weight = idf.get(token)
        if weight is not None:
            vector[token] = count * weight
    return vector


def _smoothed_idf(token_lists: Sequence[list[str]]) -> dict[str, float]:
    """idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the N training utterances."""
    n = len(token_lists)
    df = Counter()
    for tokens in token_lists:
        for token in set(tokens):
            df[token] += 1
    return {t: math.log((1 + n) / (1 + d)) + 1.0 for t, d in sorted(df.items())}


def _centroids(labeled: Sequence[tuple[list[str], object]],
               idf: dict[str, float]) -> dict[object, TokenVector]:
    grouped: dict[object, list[TokenVector]] = {}
    for tokens, label in labeled:
        grouped.setdefault(label, []).append(_tfidf(tokens, idf))
    centroids: dict[object, TokenVector] = {}
    for label, vectors in grouped.items():
        mean: TokenVector = {}
        for vector in vectors:
            for token, weight in vector.items():
                mean[token] = mean.get(token, 0.0) + weight / len(vectors)
        centroids[label] = _l2_normalize(mean)
    return centroids


def _cosine_to_unit(query: TokenVector, unit_centroid: TokenVector) -> float:
    """Cosine between a raw query vector and an already unit-norm centroid."""
    norm = math.sqrt(sum(w * w for w in query.values()))
    if norm == 0.0:
        return 0.0
    return sum(w * unit_centroid.get(t, 0.0) for t, w in query.items()) / norm


@dataclass
class IntentModel:
    """Per-intent unit-norm TF-IDF centroids plus the shared idf table."""

    idf: dict[str, float]
    centroids: dict[Intent, TokenVector]
    fallback_intent: Intent = UNKNOWN_INTENT
    min_similarity: float = 0.0

    @property
    def vocabulary(self) -> list[str]:
        return sorted(self.idf)

    def to_dict(self) -> dict:
        return {
            "idf": dict(sorted(self.idf.items())),
            "centroids": {
                intent.label: dict(sorted(vec.items()))
                for intent, vec in sorted(self.centroids.items())
            },
            "fallback_intent": self.fallback_intent.label,
            "min_similarity": self.min_similarity,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "IntentModel":
        return cls(
            idf=dict(doc["idf"]),
            centroids={Intent(label): dict(vec)
                       for label, vec in doc["centroids"].items()},
            fallback_intent=Intent(doc["fallback_intent"]),
            min_similarity=doc["min_similarity"],
        )


def train_intent_classifier(
    samples: Sequence[tuple[str, Intent]],
    fallback_intent: Intent = UNKNOWN_INTENT,
    min_similarity: float = 0.0,
) -> IntentModel:
    """Fit one centroid per intent seen in ``samples``."""
    if not samples:
        raise EmptySample("cannot train an intent classifier on no samples")
    token_lists = [tokenize(text) for text, _ in samples]
    idf = _smoothed_idf(token_lists)
    labeled = [(tokens, intent) for tokens, (_, intent) in zip(token_lists, samples)]
    centroids = _centroids(labeled, idf)
    return IntentModel(idf=idf, centroids=centroids,
                       fallback_intent=fallback_intent,
                       min_similarity=min_similarity)


def classify_intent(model: IntentModel, text: str) -> tuple[Intent, float]:
    """Return the best-matching intent and its cosine similarity.

    An empty query vector, or a best similarity below ``min_similarity``,
    yields ``(fallback_intent, 0.0)``. Ties break toward the
    lexicographically smallest intent label.
    """
    query = _tfidf(tokenize(text), model.idf)
    if not query:
        return model.fallback_intent, 0.0
    best_intent: Intent | None = None
    best_similarity = -1.0
    for intent in sorted(model.centroids):
        similarity = _cosine_to_unit(query, model.centroids[intent])
        if similarity > best_similarity:
            best_intent, best_similarity = intent, similarity
    assert best_intent is not None
    if best_similarity < model.min_similarity:
        return model.fallback_intent, 0.0
    return best_intent, best_similarity


@dataclass
class ExtractionLexicon:
    """Gazetteer mapping lowercased token phrases to (slot, canonical value)."""

    entries: dict[str, tuple[str, str]] = field(default_factory=dict)
    max_phrase_len: int = 1

    def to_dict(self) -> dict:
        return {
            "entries": {k: list(v) for k, v in sorted(self.entries.items())},
            "max_phrase_len": self.max_phrase_len,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExtractionLexicon":
        return cls(
            entries={k: (v[0], v[1]) for k, v in doc["entries"].items()},
            max_phrase_len=doc["max_phrase_len"],
        )


def _phrase(value: str) -> str:
    return " ".join(tokenize(value))


def annotated_utterances(dialogues: Iterable[Dialogue]) -> list[AnnotatedUtterance]:
    return [u for d in dialogues for u in d.utterances
            if isinstance(u, AnnotatedUtterance)]


def train_slot_extractor(
    sample: Iterable[Dialogue],
    items: ItemCollection,
    domain: Domain,
) -> ExtractionLexicon:
    """Harvest a lexicon from sample annotations and the item collection.

    Sources: every annotated slot value, every item name (under the
    ``title`` slot, when the domain declares one), and every item attribute
    value under its own slot. A phrase claimed by two different slots goes
    to the earlier-declared slot; a same-slot clash takes the
    lexicographically smaller canonical value. Either collision is logged.
    """
    candidates: dict[str, tuple[str, str]] = {}

    def offer(surface: str, slot: str, value: str) -> None:
        phrase = _phrase(surface)
        if not phrase:
            return
        if not domain.has_slot(slot):
            raise UnknownSlot(f"annotation references unknown slot {slot!r}")
        current = candidates.get(phrase)
        if current is None:
            candidates[phrase] = (slot, value)
            return
        if current == (slot, value):
            return
        keep = min(current, (slot, value),
                   key=lambda sv: (domain.slot_priority(sv[0]), sv[1]))
        dropped = current if keep != current else (slot, value)
        candidates[phrase] = keep
        logger.warning(
            "lexicon collision for %r: kept %s=%s, dropped %s=%s",
            phrase, keep[0], keep[1], dropped[0], dropped[1],
        )

    for utterance in annotated_utterances(sample):
        for sv in utterance.slot_values:
            offer(sv.value, sv.slot, sv.value)
    title_slot = next((s for s in domain.slots if s.lower() == "title"), None)
    for item in items:
        if title_slot is not None:
            offer(item.name, title_slot, item.name)
        for slot, values in item.attributes.items():
            for value in values:
                offer(value, slot, value)

    if not candidates:
        raise EmptySample("slot extractor training produced an empty lexicon")
    max_len = max(len(phrase.split()) for phrase in candidates)
    return ExtractionLexicon(entries=candidates, max_phrase_len=max_len)


def extract_slots(lexicon: ExtractionLexicon, text: str) -> list[SlotValue]:
    """Greedy longest-match scan; matched spans never overlap."""
    tokens = tokenize(text)
    found: list[SlotValue] = []
    i = 0
    while i < len(tokens):
        matched = False
        longest = min(lexicon.max_phrase_len, len(tokens) - i)
        for length in range(longest, 0, -1):
            phrase = " ".join(tokens[i:i + length])
            entry = lexicon.entries.get(phrase)
            if entry is not None:
                found.append(SlotValue(slot=entry[0], value=entry[1]))
                i += length
                matched = True
                break
        if not matched:
            i += 1
    return found


@dataclass
class SatisfactionModel:
    """Centroid classifier over satisfaction levels 1..5."""

    idf: dict[str, float]
    centroids: dict[int, TokenVector]
    default_level: int = 3

    def to_dict(self) -> dict:
        return {
            "idf": dict(sorted(self.idf.items())),
            "centroids": {str(level): dict(sorted(vec.items()))
                          for level, vec in sorted(self.centroids.items())},
            "default_level": self.default_level,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SatisfactionModel":
        return cls(
            idf=dict(doc["idf"]),
            centroids={int(level): dict(vec)
                       for level, vec in doc["centroids"].items()},
            default_level=doc["default_level"],
        )


def train_satisfaction_classifier(
    samples: Sequence[tuple[str, int]],
    default_level: int = 3,
) -> SatisfactionModel:
    """Fit per-level centroids; levels may cover any subset of 1..5."""
    if not samples:
        raise EmptySample("cannot train a satisfaction classifier on no samples")
    for _, level in samples:
        if not 1 <= level <= 5:
            raise ValueError(f"satisfaction level {level} outside [1, 5]")
    token_lists = [tokenize(text) for text, _ in samples]
    idf = _smoothed_idf(token_lists)
    labeled = [(tokens, level) for tokens, (_, level) in zip(token_lists, samples)]
    centroids = _centroids(labeled, idf)
    return SatisfactionModel(idf=idf, centroids=centroids,
                             default_level=default_level)


def predict_satisfaction(model: SatisfactionModel, text: str) -> int:
    """Best-matching level by cosine; no vocabulary overlap falls back to
    the default level (scale midpoint)."""
    query = _tfidf(tokenize(text), model.idf)
    if not query:
        return model.default_level
    best_level: int | None = None
    best_similarity = 0.0
    for level in sorted(model.centroids):
        similarity = _cosine_to_unit(query, model.centroids[level])
        if similarity > best_similarity:
            best_level, best_similarity = level, similarity
    if best_level is None:
        return model.default_level
    return best_level
