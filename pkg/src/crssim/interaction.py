"""Interaction model: intent spaces, expected responses, intent transitions.

The interaction model declares which intents the user and agent may express,
which agent intents count as the expected follow-up to each user intent, and
how user intents chain over a conversation (a first-order transition model
learned from annotated dialogues, carried on the interaction model itself).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Any, Iterable, Mapping

import yaml

from .dialogue import AnnotatedUtterance, Dialogue, Intent, Participant
from .errors import EmptySample, NoTerminalIntent, ParseError, UnknownIntent

#: Synthetic boundary markers for transition rows; never uttered.
START = Intent("START")
END = Intent("END")


@dataclass
class TransitionModel:
    """First-order user-intent transition probabilities.

    Rows are conditioning intents (including :data:`START`), columns range
    over user intents plus :data:`END`. Rows never observed in training
    fall through to ``{END: 1.0}``, so the end of the conversation stays
    reachable from everywhere.
    """

    probabilities: dict[Intent, dict[Intent, float]] = field(
        default_factory=dict)

    def row(self, current: Intent) -> dict[Intent, float]:
        return self.probabilities.get(current, {END: 1.0})

    def sample_next(self, current: Intent, rng: random.Random) -> Intent:
        """Draw the next intent given the current one."""
        row = self.row(current)
        intents = sorted(row)
        weights = [row[i] for i in intents]
        return rng.choices(intents, weights=weights, k=1)[0]

    def to_dict(self) -> dict[str, Any]:
        return {
            str(current): {str(nxt): row[nxt] for nxt in sorted(row)}
            for current, row in sorted(self.probabilities.items())
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Mapping[str, float]]
                  ) -> "TransitionModel":
        return cls(probabilities={
            Intent(current): {Intent(nxt): float(p) for nxt, p in row.items()}
            for current, row in data.items()
        })


@dataclass(frozen=True)
class InteractionModel:
    """Declarative description of one agent's conversational contract."""

    name: str
    user_intents: tuple[Intent, ...]
    agent_intents: tuple[Intent, ...]
    required_slots: Mapping[Intent, tuple[str, ...]]
    expected_responses: Mapping[Intent, frozenset[Intent]]
    terminal_intent: Intent
    accept_intent: Intent
    reject_intent: Intent
    recommendation_intents: frozenset[Intent]
    transitions: TransitionModel | None = None

    def __post_init__(self) -> None:
        users = set(self.user_intents)
        agents = set(self.agent_intents)
        if not users:
            raise UnknownIntent("interaction model declares no user intents")
        if not agents:
            raise UnknownIntent("interaction model declares no agent intents")
        for intent in self.required_slots:
            if intent not in users:
                raise UnknownIntent(f"required_slots references undeclared "
                                    f"user intent {intent}")
        for intent, responses in self.expected_responses.items():
            if intent not in users:
                raise UnknownIntent(f"expected_responses references "
                                    f"undeclared user intent {intent}")
            for response in responses:
                if response not in agents:
                    raise UnknownIntent(f"expected response {response} to "
                                        f"{intent} is not an agent intent")
        if self.terminal_intent not in users:
            raise NoTerminalIntent(f"terminal intent {self.terminal_intent} "
                                   "is not a declared user intent")
        for role, intent in (("accept", self.accept_intent),
                             ("reject", self.reject_intent)):
            if intent not in users:
                raise UnknownIntent(f"{role} intent {intent} is not a "
                                    "declared user intent")
        for intent in self.recommendation_intents:
            if intent not in agents:
                raise UnknownIntent(f"recommendation intent {intent} is not "
                                    "a declared agent intent")
        if self.transitions is not None:
            self._check_transitions(self.transitions, users)

    @staticmethod
    def _check_transitions(transitions: TransitionModel,
                           users: set[Intent]) -> None:
        columns = users | {END}
        for current, row in transitions.probabilities.items():
            if current != START and current not in users:
                raise UnknownIntent(f"transition row for non-user intent "
                                    f"{current}")
            if abs(sum(row.values()) - 1.0) > 1e-9:
                raise ValueError(f"transition row for {current} does not "
                                 "sum to 1")
            if current != START and row.get(END, 0.0) <= 0.0:
                raise ValueError(f"transition row for {current} assigns END "
                                 "zero mass")
            for nxt in row:
                if nxt not in columns:
                    raise UnknownIntent(f"transition from {current} to "
                                        f"undeclared intent {nxt}")

    def is_user_intent(self, intent: Intent) -> bool:
        return intent in set(self.user_intents)

    def is_agent_intent(self, intent: Intent) -> bool:
        return intent in set(self.agent_intents)

    def slots_for(self, intent: Intent) -> tuple[str, ...]:
        return self.required_slots.get(intent, ())

    def is_expected_response(self, user_intent: Intent,
                             agent_intent: Intent) -> bool:
        """Is ``agent_intent`` an anticipated reply to ``user_intent``?"""
        return agent_intent in self.expected_responses.get(user_intent,
                                                           frozenset())

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "name": self.name,
            "user_intents": [str(i) for i in self.user_intents],
            "agent_intents": [str(i) for i in self.agent_intents],
            "required_slots": {
                str(intent): list(self.required_slots[intent])
                for intent in sorted(self.required_slots)
            },
            "expected_responses": {
                str(intent): sorted(str(r) for r in responses)
                for intent, responses in sorted(
                    self.expected_responses.items())
            },
            "terminal_intent": str(self.terminal_intent),
            "accept_intent": str(self.accept_intent),
            "reject_intent": str(self.reject_intent),
            "recommendation_intents": sorted(
                str(i) for i in self.recommendation_intents),
        }
        if self.transitions is not None:
            data["transitions"] = self.transitions.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "InteractionModel":
        transitions = data.get("transitions")
        return cls(
            name=data["name"],
            user_intents=tuple(Intent(i) for i in data["user_intents"]),
            agent_intents=tuple(Intent(i) for i in data["agent_intents"]),
            required_slots={
                Intent(i): tuple(slots)
                for i, slots in data.get("required_slots", {}).items()
            },
            expected_responses={
                Intent(i): frozenset(Intent(r) for r in responses)
                for i, responses in data.get("expected_responses", {}).items()
            },
            terminal_intent=Intent(data["terminal_intent"]),
            accept_intent=Intent(data.get("accept_intent", "ACCEPT")),
            reject_intent=Intent(data.get("reject_intent", "REJECT")),
            recommendation_intents=frozenset(
                Intent(i) for i in data.get("recommendation_intents",
                                            ["RECOMMEND"])),
            transitions=(TransitionModel.from_dict(transitions)
                         if transitions is not None else None),
        )


def parse_interaction_model(text: str) -> InteractionModel:
    """Parse the YAML interaction-model document.

    Required fields: ``name``, ``user_intents`` (mapping of intent label to
    an optional ``required_slots`` list), ``agent_intents`` (list),
    ``expected_responses`` (mapping of user intent to agent-intent list),
    and ``terminal_intent``. Optional: ``accept_intent`` (default ACCEPT),
    ``reject_intent`` (default REJECT), ``recommendation_intents``
    (default [RECOMMEND]).
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"malformed interaction config: {exc}",
                         line=mark.line + 1 if mark else None) from exc
    if not isinstance(doc, Mapping):
        raise ParseError("interaction config must be a mapping")
    if "terminal_intent" not in doc:
        raise NoTerminalIntent("interaction config is missing 'terminal_intent'")
    for key in ("name", "user_intents", "agent_intents"):
        if key not in doc:
            raise ParseError(f"interaction config is missing {key!r}")

    raw_users = doc["user_intents"]
    if isinstance(raw_users, Mapping):
        user_intents = tuple(Intent(str(label)) for label in raw_users)
        required = {}
        for label, spec in raw_users.items():
            slots = (spec or {}).get("required_slots", []) if isinstance(
                spec, Mapping) else []
            if slots:
                required[Intent(str(label))] = tuple(str(s) for s in slots)
    elif isinstance(raw_users, list):
        user_intents = tuple(Intent(str(label)) for label in raw_users)
        required = {}
    else:
        raise ParseError("'user_intents' must be a mapping or a list")

    agent_intents = tuple(Intent(str(label)) for label in doc["agent_intents"])
    expected: dict[Intent, frozenset[Intent]] = {}
    for label, responses in (doc.get("expected_responses") or {}).items():
        expected[Intent(str(label))] = frozenset(
            Intent(str(r)) for r in responses or [])

    recommendations = frozenset(
        Intent(str(r)) for r in doc.get("recommendation_intents",
                                        ["RECOMMEND"]))
    return InteractionModel(
        name=str(doc["name"]),
        user_intents=user_intents,
        agent_intents=agent_intents,
        required_slots=required,
        expected_responses=expected,
        terminal_intent=Intent(str(doc["terminal_intent"])),
        accept_intent=Intent(str(doc.get("accept_intent", "ACCEPT"))),
        reject_intent=Intent(str(doc.get("reject_intent", "REJECT"))),
        recommendation_intents=recommendations,
    )


def load_interaction_model(source: str | Path | IO[str]) -> InteractionModel:
    if isinstance(source, (str, Path)):
        return parse_interaction_model(Path(source).read_text(encoding="utf-8"))
    return parse_interaction_model(source.read())


def user_intent_sequences(dialogues: Iterable[Dialogue]
                          ) -> list[list[Intent]]:
    """Per-dialogue ordered lists of annotated user intents."""
    sequences = []
    for dialogue in dialogues:
        seq = [u.intent for u in dialogue.utterances
               if isinstance(u, AnnotatedUtterance)
               and u.participant is Participant.USER]
        if seq:
            sequences.append(seq)
    return sequences


def learn_transitions(sample: Iterable[Dialogue],
                      model: InteractionModel) -> InteractionModel:
    """Estimate intent transitions from annotated dialogues.

    Counts consecutive user-intent pairs (with START/END boundary markers)
    and applies add-one smoothing over each row's observed support plus END,
    so every observed row keeps a nonzero path to conversation end. Returns
    a copy of ``model`` carrying the learned transitions.
    """
    declared = set(model.user_intents)
    counts: dict[Intent, dict[Intent, int]] = {}
    for seq in user_intent_sequences(sample):
        for intent in seq:
            if intent not in declared:
                raise UnknownIntent(f"annotated user intent {intent} is not "
                                    "declared by the interaction model")
        chain = [START, *seq, END]
        for current, nxt in zip(chain, chain[1:]):
            counts.setdefault(current, {}).setdefault(nxt, 0)
            counts[current][nxt] += 1
    if not counts:
        raise EmptySample("no annotated user intents to learn transitions from")

    probabilities: dict[Intent, dict[Intent, float]] = {}
    for current in sorted(counts):
        row_counts = counts[current]
        support = sorted(set(row_counts) | {END})
        total = sum(row_counts.values()) + len(support)
        probabilities[current] = {
            nxt: (row_counts.get(nxt, 0) + 1) / total for nxt in support
        }
    return replace(model, transitions=TransitionModel(probabilities))
