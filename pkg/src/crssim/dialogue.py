"""Core dialogue types: participants, intents, utterances, annotations, dialogues."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Participant(str, Enum):
    """Which side of the conversation an utterance belongs to."""

    USER = "USER"
    AGENT = "AGENT"


@dataclass(frozen=True, order=True)
class Intent:
    """A discrete dialogue-act label. Compared by exact string match."""

    label: str

    def __post_init__(self) -> None:
        if not self.label or any(c.isspace() for c in self.label):
            raise ValueError(f"intent label must be a non-empty token, got {self.label!r}")

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class SlotValue:
    """A typed entity annotation, e.g. genre=action.

    Slot membership in a domain is enforced at the parsing and training
    boundaries where a :class:`~crssim.domain.Domain` is in scope.
    """

    slot: str
    value: str


@dataclass(frozen=True)
class Utterance:
    """A single unannotated utterance within a dialogue."""

    participant: Participant
    text: str
    turn_index: int

    def __post_init__(self) -> None:
        if self.turn_index < 0:
            raise ValueError("turn_index must be non-negative")


@dataclass(frozen=True)
class AnnotatedUtterance:
    """An utterance carrying an intent, slot-value pairs, and optionally a
    user-satisfaction label in [1, 5].

    Satisfaction labels are only meaningful on USER utterances.
    """

    utterance: Utterance
    intent: Intent
    slot_values: tuple[SlotValue, ...] = ()
    satisfaction: int | None = None

    def __post_init__(self) -> None:
        # allow lists at construction for convenience
        if not isinstance(self.slot_values, tuple):
            object.__setattr__(self, "slot_values", tuple(self.slot_values))
        if self.satisfaction is not None:
            if not 1 <= self.satisfaction <= 5:
                raise ValueError("satisfaction must be in [1, 5]")
            if self.utterance.participant is not Participant.USER:
                raise ValueError("satisfaction labels belong on USER utterances only")

    @property
    def participant(self) -> Participant:
        return self.utterance.participant

    @property
    def text(self) -> str:
        return self.utterance.text

    @property
    def turn_index(self) -> int:
        return self.utterance.turn_index


AnyUtterance = Utterance | AnnotatedUtterance


def _base(u: AnyUtterance) -> Utterance:
    return u.utterance if isinstance(u, AnnotatedUtterance) else u


@dataclass
class Dialogue:
    """An ordered two-party conversation plus run metadata.

    Invariants enforced at construction: non-empty id, strictly increasing
    turn indices, strict speaker alternation after the opening utterance,
    and an outcome flag (when present) of SUCCESS or FAILURE.
    """

    dialogue_id: str
    agent_id: str
    user_id: str
    utterances: list[AnyUtterance] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.dialogue_id:
            raise ValueError("dialogue_id must be non-empty")
        previous: Utterance | None = None
        for u in self.utterances:
            cur = _base(u)
            if previous is not None:
                if cur.turn_index <= previous.turn_index:
                    raise ValueError("turn_index must strictly increase")
                if cur.participant is previous.participant:
                    raise ValueError("participants must alternate")
            previous = cur
        outcome = self.metadata.get("outcome")
        if outcome is not None and outcome not in ("SUCCESS", "FAILURE"):
            raise ValueError(f"outcome must be SUCCESS or FAILURE, got {outcome!r}")

    def user_utterances(self) -> list[AnyUtterance]:
        return [u for u in self.utterances if _base(u).participant is Participant.USER]

    @property
    def turns(self) -> int:
        """Number of USER utterances (the toolkit-wide turn definition)."""
        return len(self.user_utterances())
