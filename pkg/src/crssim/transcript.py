"""Transcript persistence: one JSON document per run, schema-versioned.

Normative utterance fields: ``participant``, ``text``, ``turn_index`` plus
optional ``intent``, ``slot_values``, ``satisfaction``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Any

from .dialogue import (
    AnnotatedUtterance,
    AnyUtterance,
    Dialogue,
    Intent,
    Participant,
    SlotValue,
    Utterance,
)
from .errors import ParseError, SchemaVersionMismatch

SCHEMA_VERSION = 1


def utterance_to_dict(u: AnyUtterance) -> dict[str, Any]:
    base = u.utterance if isinstance(u, AnnotatedUtterance) else u
    doc: dict[str, Any] = {
        "participant": base.participant.value,
        "text": base.text,
        "turn_index": base.turn_index,
    }
    if isinstance(u, AnnotatedUtterance):
        doc["intent"] = u.intent.label
        if u.slot_values:
            doc["slot_values"] = [{"slot": sv.slot, "value": sv.value}
                                  for sv in u.slot_values]
        if u.satisfaction is not None:
            doc["satisfaction"] = u.satisfaction
    return doc


def utterance_from_dict(doc: dict[str, Any]) -> AnyUtterance:
    try:
        base = Utterance(
            participant=Participant(doc["participant"]),
            text=doc["text"],
            turn_index=doc["turn_index"],
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed utterance record: {exc}") from exc
    if "intent" not in doc:
        return base
    return AnnotatedUtterance(
        utterance=base,
        intent=Intent(doc["intent"]),
        slot_values=tuple(SlotValue(sv["slot"], sv["value"])
                          for sv in doc.get("slot_values", [])),
        satisfaction=doc.get("satisfaction"),
    )


def dialogue_to_dict(d: Dialogue) -> dict[str, Any]:
    return {
        "dialogue_id": d.dialogue_id,
        "agent_id": d.agent_id,
        "user_id": d.user_id,
        "metadata": d.metadata,
        "utterances": [utterance_to_dict(u) for u in d.utterances],
    }


def dialogue_from_dict(doc: dict[str, Any]) -> Dialogue:
    try:
        return Dialogue(
            dialogue_id=doc["dialogue_id"],
            agent_id=doc["agent_id"],
            user_id=doc["user_id"],
            utterances=[utterance_from_dict(u) for u in doc["utterances"]],
            metadata=dict(doc.get("metadata", {})),
        )
    except KeyError as exc:
        raise ParseError(f"dialogue record is missing field {exc}") from exc


def dumps(dialogues: list[Dialogue]) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dialogues": [dialogue_to_dict(d) for d in dialogues],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> list[Dialogue]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed transcript document: {exc}",
                         line=exc.lineno) from exc
    if not isinstance(doc, dict) or "dialogues" not in doc:
        raise ParseError("transcript document must contain 'dialogues'")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"unsupported transcript schema version {version!r}"
        )
    return [dialogue_from_dict(d) for d in doc["dialogues"]]


def export_dialogues(dialogues: list[Dialogue], sink: str | Path | IO[str]) -> None:
    """Write all dialogues of a run into one JSON document."""
    text = dumps(dialogues)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def import_dialogues(source: str | Path | IO[str]) -> list[Dialogue]:
    """Inverse of :func:`export_dialogues`; round-trips field-for-field."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    return loads(text)
