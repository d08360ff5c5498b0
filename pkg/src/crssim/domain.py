"""Domain schema, item collection, and ratings ingestion."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import yaml

from .errors import (
    DuplicateItem,
    DuplicateSlot,
    EmptySlotList,
    ParseError,
    RatingOutOfScale,
    UnknownSlot,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Domain:
    """The application's slot schema, e.g. movies with title/genre/keyword.

    Slot declaration order doubles as the priority order used to resolve
    slot collisions during extractor training.
    """

    name: str
    slots: tuple[str, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.slots, tuple):
            object.__setattr__(self, "slots", tuple(self.slots))
        if not self.slots:
            raise EmptySlotList("domain declares no slots")
        seen: set[str] = set()
        for s in self.slots:
            if s.lower() in seen:
                raise DuplicateSlot(f"duplicate slot {s!r} (case-insensitive)")
            seen.add(s.lower())

    def has_slot(self, slot: str) -> bool:
        return slot in self.slots

    def slot_priority(self, slot: str) -> int:
        return self.slots.index(slot)


@dataclass(frozen=True)
class Item:
    """One recommendable item with its typed attributes."""

    item_id: str
    name: str
    attributes: dict[str, tuple[str, ...]] = field(default_factory=dict)


class ItemCollection:
    """Items keyed by id, with attribute keys restricted to domain slots."""

    def __init__(self, domain: Domain):
        self.domain = domain
        self._items: dict[str, Item] = {}

    def add(self, item: Item) -> None:
        if item.item_id in self._items:
            raise DuplicateItem(f"duplicate item id {item.item_id!r}")
        for slot in item.attributes:
            if not self.domain.has_slot(slot):
                raise UnknownSlot(f"attribute {slot!r} is not a domain slot")
        self._items[item.item_id] = item

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._items

    def __iter__(self) -> Iterable[Item]:
        return iter(self._items.values())

    def get(self, item_id: str) -> Item | None:
        return self._items.get(item_id)

    def by_name(self, name: str) -> Item | None:
        """Look an item up by its display name, case-insensitively."""
        wanted = name.strip().lower()
        for item in self._items.values():
            if item.name.lower() == wanted:
                return item
        return None

    def with_attribute(self, slot: str, value: str) -> list[Item]:
        """Items carrying ``value`` for ``slot``, in collection order."""
        wanted = value.lower()
        return [
            item
            for item in self._items.values()
            if any(v.lower() == wanted for v in item.attributes.get(slot, ()))
        ]

    def values_for_slot(self, slot: str) -> list[str]:
        """Distinct attribute values observed for ``slot``, sorted."""
        values: set[str] = set()
        for item in self._items.values():
            values.update(item.attributes.get(slot, ()))
        return sorted(values)


@dataclass(frozen=True)
class Rating:
    """One (user, item, rating) preference triple."""

    user_id: str
    item_id: str
    rating: float


@dataclass(frozen=True)
class RatingScale:
    """Inclusive [min, max] range ratings are expressed on."""

    min: float
    max: float

    def __post_init__(self) -> None:
        if not self.min < self.max:
            raise ValueError(f"degenerate rating scale [{self.min}, {self.max}]")


def _read_text(source: str | Path | IO[str]) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def parse_domain_config(text: str) -> Domain:
    """Parse a domain config document.

    The document is a YAML mapping with exactly two keys: ``name`` (string)
    and ``slots`` (ordered list of slot names). Errors are reported with the
    offending line.
    """
    try:
        root = yaml.compose(io.StringIO(text))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ParseError(f"malformed domain config: {exc}", line=line) from exc
    if not isinstance(root, yaml.MappingNode):
        raise ParseError("domain config must be a key-value mapping", line=1)

    name: str | None = None
    slot_nodes: list[yaml.Node] = []
    for key_node, value_node in root.value:
        key = key_node.value
        if key == "name":
            if not isinstance(value_node, yaml.ScalarNode) or not value_node.value:
                raise ParseError("'name' must be a non-empty string",
                                 line=value_node.start_mark.line + 1)
            name = str(value_node.value)
        elif key == "slots":
            if isinstance(value_node, yaml.SequenceNode):
                slot_nodes = list(value_node.value)
            elif isinstance(value_node, yaml.ScalarNode) and value_node.value in ("", None):
                slot_nodes = []
            else:
                raise ParseError("'slots' must be a list of slot names",
                                 line=value_node.start_mark.line + 1)
        else:
            raise ParseError(f"unknown domain config key {key!r}",
                             line=key_node.start_mark.line + 1)
    if name is None:
        raise ParseError("domain config is missing 'name'", line=1)
    if not slot_nodes:
        raise EmptySlotList("domain config declares no slots",
                            line=root.start_mark.line + 1)

    slots: list[str] = []
    seen: set[str] = set()
    for node in slot_nodes:
        if not isinstance(node, yaml.ScalarNode) or not str(node.value).strip():
            raise ParseError("slot names must be non-empty strings",
                             line=node.start_mark.line + 1)
        slot = str(node.value).strip()
        if slot.lower() in seen:
            raise DuplicateSlot(f"duplicate slot {slot!r} (case-insensitive)",
                                line=node.start_mark.line + 1)
        seen.add(slot.lower())
        slots.append(slot)
    return Domain(name=name, slots=tuple(slots))


def load_domain(source: str | Path | IO[str]) -> Domain:
    return parse_domain_config(_read_text(source))


def load_item_collection(source: str | Path | IO[str], domain: Domain) -> ItemCollection:
    """Load a pipe-delimited item file.

    Row format: ``item_id | name | slot=value[,value...][; slot=...]``.
    The attribute column may be empty. Lines starting with ``#`` and blank
    lines are skipped.
    """
    collection = ItemCollection(domain)
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) not in (2, 3):
            raise ParseError(
                f"expected 'item_id | name | attributes', got {len(parts)} column(s)",
                line=lineno,
            )
        item_id, name = parts[0], parts[1]
        if not item_id or not name:
            raise ParseError("item_id and name must be non-empty", line=lineno)
        attributes: dict[str, tuple[str, ...]] = {}
        if len(parts) == 3 and parts[2]:
            for group in parts[2].split(";"):
                group = group.strip()
                if not group:
                    continue
                if "=" not in group:
                    raise ParseError(f"malformed attribute group {group!r}", line=lineno)
                slot, _, joined = group.partition("=")
                slot = slot.strip()
                if not domain.has_slot(slot):
                    raise UnknownSlot(f"attribute {slot!r} is not a domain slot",
                                      line=lineno)
                values = tuple(v.strip() for v in joined.split(",") if v.strip())
                if not values:
                    raise ParseError(f"attribute {slot!r} has no values", line=lineno)
                attributes[slot] = attributes.get(slot, ()) + values
        try:
            collection.add(Item(item_id=item_id, name=name, attributes=attributes))
        except DuplicateItem:
            raise DuplicateItem(f"duplicate item id {item_id!r}", line=lineno) from None
    return collection


def load_ratings(source: str | Path | IO[str], scale: RatingScale) -> list[Rating]:
    """Load ``user_id,item_id,rating`` CSV triples, order preserved.

    A header row is detected by a non-numeric third field on the first data
    line; comment lines start with ``#``.
    """
    ratings: list[Rating] = []
    first_data_line = True
    reader = csv.reader(io.StringIO(_read_text(source)))
    for lineno, row in enumerate(reader, start=1):
        if not row or (row[0].startswith("#")):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=lineno)
        user_id, item_id, raw_value = (f.strip() for f in row)
        if first_data_line:
            first_data_line = False
            try:
                float(raw_value)
            except ValueError:
                continue  # header row
        try:
            value = float(raw_value)
        except ValueError:
            raise ParseError(f"non-numeric rating {raw_value!r}", line=lineno) from None
        if not scale.min <= value <= scale.max:
            raise RatingOutOfScale(
                f"rating {value} outside scale [{scale.min}, {scale.max}]", line=lineno
            )
        ratings.append(Rating(user_id=user_id, item_id=item_id, rating=value))
    return ratings
