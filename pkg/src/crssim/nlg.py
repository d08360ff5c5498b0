"""Template-based generation of user utterances.

Templates are harvested from an annotated dialogue sample by cutting each
annotated slot value out of the utterance text and leaving a ``{slot}``
placeholder. Selection is conditioned on the situation: dissatisfied users
pick from templates that were uttered at matching satisfaction levels, and
late-night or group settings prefer the shorter half of the candidates.
"""

from __future__ import annotations

import random
import re
import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

from .dialogue import AnnotatedUtterance, Dialogue, Intent, Participant
from .errors import MissingSlotValue, ParseError
from .interaction import InteractionModel
from .nlu import tokenize
from .population import ContextState, Setting, TimeOfDay

_PLACEHOLDER = re.compile(r"\{([^{}]+)\}")
_NEGATION_WORDS = ("not", "don't", "dont", "hate", "dislike", "no")
_POSITIVE_WORDS = ("like", "love", "want")
_NEGATION_RE = re.compile(
    r"\b(?:" + "|".join(re.escape(w) for w in _NEGATION_WORDS) + r")\b",
    re.IGNORECASE)
_POSITIVE_RE = re.compile(
    r"\b(?:" + "|".join(re.escape(w) for w in _POSITIVE_WORDS) + r")\b",
    re.IGNORECASE)

#: Marker in default patterns that stands for "whatever slots are needed".
SLOT_MARKER = "{slot}"

#: Built-in fallback patterns so every intent can always say something.
BUILTIN_DEFAULT_PATTERNS: dict[str, str] = {
    "GREETING": "Hello.",
    "DISCLOSE": "I am looking for {slot}.",
    "REVISE": "I would prefer {slot} instead.",
    "INQUIRE": "Can you tell me more?",
    "ACCEPT": "That sounds good.",
    "REJECT": "No, not that one.",
    "DONE": "Thank you, goodbye.",
}
_GENERIC_SLOTTED = "I am thinking of {slot}."
_GENERIC_SLOTLESS = "Okay."


class Polarity(str, Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"
    NEUTRAL = "NEUTRAL"


class SatisfactionBucket(str, Enum):
    LOW = "LOW"    # satisfaction 1-2
    MID = "MID"    # satisfaction 3
    HIGH = "HIGH"  # satisfaction 4-5
    ANY = "ANY"    # harvested without a satisfaction label


def bucket_of(satisfaction: int) -> SatisfactionBucket:
    if satisfaction <= 2:
        return SatisfactionBucket.LOW
    if satisfaction == 3:
        return SatisfactionBucket.MID
    return SatisfactionBucket.HIGH


def detect_polarity(text: str) -> Polarity:
    """Negation words win over liking words; neither → neutral."""
    if _NEGATION_RE.search(text):
        return Polarity.NEGATIVE
    if _POSITIVE_RE.search(text):
        return Polarity.POSITIVE
    return Polarity.NEUTRAL


@dataclass(frozen=True)
class Template:
    """One utterance pattern with ``{slot}`` placeholders and styling facts."""

    intent: Intent
    pattern: str
    polarity: Polarity
    bucket: SatisfactionBucket = SatisfactionBucket.ANY
    slots: frozenset[str] = field(init=False)
    length: int = field(init=False)

    def __post_init__(self) -> None:
        placeholders = frozenset(_PLACEHOLDER.findall(self.pattern))
        object.__setattr__(self, "slots", placeholders)
        object.__setattr__(self, "length", len(tokenize(self.pattern)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "intent": str(self.intent),
            "pattern": self.pattern,
            "polarity": self.polarity.value,
            "bucket": self.bucket.value,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Template":
        return cls(intent=Intent(data["intent"]), pattern=data["pattern"],
                   polarity=Polarity(data["polarity"]),
                   bucket=SatisfactionBucket(data["bucket"]))


def instantiate(template: Template, slot_values: Mapping[str, str]) -> str:
    """Fill every placeholder; raise :class:`MissingSlotValue` on a gap."""

    def fill(match: re.Match) -> str:
        slot = match.group(1)
        if slot not in slot_values:
            raise MissingSlotValue(
                f"template for {template.intent} needs a value for slot "
                f"{slot!r}")
        return slot_values[slot]

    return _PLACEHOLDER.sub(fill, template.pattern)


def _specialize_default(pattern: str, slots: Iterable[str]) -> str:
    """Rewrite the generic ``{slot}`` marker for concrete slot names."""
    if SLOT_MARKER not in pattern:
        return pattern
    names = sorted(slots)
    if not names:
        return pattern.replace(SLOT_MARKER, "something")
    return pattern.replace(SLOT_MARKER,
                           " and ".join("{" + s + "}" for s in names))


@dataclass
class TemplateStore:
    """All harvested templates plus per-intent synthesized defaults."""

    templates: dict[Intent, list[Template]] = field(default_factory=dict)
    default_templates: dict[Intent, Template] = field(default_factory=dict)
    default_patterns: dict[str, str] = field(default_factory=dict)

    def add(self, template: Template) -> None:
        bucket = self.templates.setdefault(template.intent, [])
        for existing in bucket:
            if (existing.pattern == template.pattern
                    and existing.bucket == template.bucket
                    and existing.polarity == template.polarity):
                return
        bucket.append(template)

    def templates_for(self, intent: Intent) -> list[Template]:
        return list(self.templates.get(intent, []))

    def default_for(self, intent: Intent,
                    needed_slots: Iterable[str] = ()) -> Template:
        """A default template covering exactly the needed slots."""
        needed = frozenset(needed_slots)
        stored = self.default_templates.get(intent)
        if stored is not None and needed <= stored.slots:
            return stored
        raw = self.default_patterns.get(str(intent))
        if raw is None:
            raw = BUILTIN_DEFAULT_PATTERNS.get(
                str(intent), _GENERIC_SLOTTED if needed else _GENERIC_SLOTLESS)
        return Template(intent=intent,
                        pattern=_specialize_default(raw, needed),
                        polarity=Polarity.NEUTRAL,
                        bucket=SatisfactionBucket.ANY)

    def to_dict(self) -> dict[str, Any]:
        return {
            "templates": {
                str(intent): [t.to_dict() for t in self.templates[intent]]
                for intent in sorted(self.templates)
            },
            "default_templates": {
                str(intent): self.default_templates[intent].to_dict()
                for intent in sorted(self.default_templates)
            },
            "default_patterns": {
                label: self.default_patterns[label]
                for label in sorted(self.default_patterns)
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TemplateStore":
        store = cls()
        for label, entries in data.get("templates", {}).items():
            store.templates[Intent(label)] = [
                Template.from_dict(e) for e in entries]
        for label, entry in data.get("default_templates", {}).items():
            store.default_templates[Intent(label)] = Template.from_dict(entry)
        store.default_patterns = dict(data.get("default_patterns", {}))
        return store


def _pattern_from(utterance: AnnotatedUtterance) -> str:
    """Cut annotated values out of the text, longest value first."""
    pattern = utterance.text
    pairs = sorted(utterance.slot_values,
                   key=lambda sv: (-len(sv.value), sv.slot, sv.value))
    for sv in pairs:
        placeholder = "{" + sv.slot + "}"
        if sv.value and sv.value in pattern:
            pattern = pattern.replace(sv.value, placeholder, 1)
    return pattern


def extract_templates(
    sample: Iterable[Dialogue],
    model: InteractionModel | None = None,
    default_patterns: Mapping[str, str] | None = None,
) -> TemplateStore:
    """Harvest user-utterance templates from an annotated sample.

    Every annotated USER utterance yields one template: slot values are
    replaced by placeholders, polarity is read off the pattern's wording,
    and the utterance's satisfaction label (when present) fixes the
    satisfaction bucket. Exact duplicates collapse. When an interaction
    model is supplied, every declared user intent additionally receives a
    neutral default template so no intent is left speechless.
    """
    store = TemplateStore()
    store.default_patterns = dict(default_patterns or BUILTIN_DEFAULT_PATTERNS)
    for dialogue in sample:
        for utterance in dialogue.utterances:
            if not isinstance(utterance, AnnotatedUtterance):
                continue
            if utterance.participant is not Participant.USER:
                continue
            pattern = _pattern_from(utterance)
            bucket = (bucket_of(utterance.satisfaction)
                      if utterance.satisfaction is not None
                      else SatisfactionBucket.ANY)
            store.add(Template(intent=utterance.intent, pattern=pattern,
                               polarity=detect_polarity(pattern),
                               bucket=bucket))
    if model is not None:
        for intent in model.user_intents:
            store.default_templates[intent] = store.default_for(
                intent, model.slots_for(intent))
    return store


def _bucket_for_context(context: ContextState) -> SatisfactionBucket:
    return bucket_of(context.satisfaction)


def _prefers_short(context: ContextState) -> bool:
    return (context.time_of_day is TimeOfDay.NIGHT
            or context.setting is Setting.GROUP)


def select_template(
    store: TemplateStore,
    intent: Intent,
    needed_slots: Iterable[str],
    polarity: Polarity,
    context: ContextState,
    rng: random.Random,
) -> Template:
    """Pick a template, relaxing constraints one at a time until one fits.

    Stage 1 demands everything: the intent, placeholder coverage of the
    needed slots, matching polarity, a satisfaction bucket equal to the
    context's, and — at night or in company — membership in the shorter
    half of those candidates (token length at most their median). Stages
    2-4 drop the length preference, then the bucket, then the polarity.
    Stage 5 falls back to the intent's default template.
    """
    needed = frozenset(needed_slots)
    bucket = _bucket_for_context(context)
    base = [t for t in store.templates_for(intent) if t.slots >= needed]

    def stage(check_polarity: bool, check_bucket: bool,
              check_length: bool) -> list[Template]:
        candidates = base
        if check_polarity:
            candidates = [t for t in candidates if t.polarity is polarity]
        if check_bucket:
            candidates = [t for t in candidates if t.bucket is bucket]
        if check_length and candidates and _prefers_short(context):
            median = statistics.median(t.length for t in candidates)
            candidates = [t for t in candidates if t.length <= median]
        return candidates

    for check_polarity, check_bucket, check_length in (
            (True, True, True),    # everything
            (True, True, False),   # drop length preference
            (True, False, False),  # drop satisfaction bucket
            (False, False, False),  # drop polarity
    ):
        candidates = stage(check_polarity, check_bucket, check_length)
        if candidates:
            return candidates[0] if len(candidates) == 1 else rng.choice(
                candidates)
    return store.default_for(intent, needed)


def load_default_patterns(text: str) -> dict[str, str]:
    """Parse the YAML intent → default-pattern table."""
    import yaml

    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed default-template table: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise ParseError("default-template table must be a mapping")
    return {str(intent): str(pattern) for intent, pattern in doc.items()}
