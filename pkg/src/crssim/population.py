"""Persona traits, situational context, and user population generation."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import IO, Any, Mapping

import yaml

from .domain import ItemCollection, Rating, RatingScale
from .errors import InsufficientRatingsUsers, ParseError
from .preferences import PreferenceGraph, build_preference_graph


class TimeOfDay(str, Enum):
    MORNING = "morning"
    AFTERNOON = "afternoon"
    EVENING = "evening"
    NIGHT = "night"


class DayType(str, Enum):
    WEEKDAY = "weekday"
    WEEKEND = "weekend"


class Setting(str, Enum):
    ALONE = "alone"
    GROUP = "group"


class SatisfactionEvent(str, Enum):
    """What the agent's latest move did to the ongoing conversation."""

    EXPECTED_RESPONSE = "EXPECTED_RESPONSE"
    UNEXPECTED_RESPONSE = "UNEXPECTED_RESPONSE"
    GOOD_RECOMMENDATION = "GOOD_RECOMMENDATION"
    BAD_RECOMMENDATION = "BAD_RECOMMENDATION"


@dataclass(frozen=True)
class Persona:
    """Stable user traits.

    ``patience`` is the number of consecutive unexpected agent responses the
    user tolerates before quitting; ``cooperativeness`` is the probability of
    repeating the previous action (rather than switching to a new one) when
    the agent misbehaves.
    """

    patience: int
    cooperativeness: float

    def __post_init__(self) -> None:
        if self.patience < 1:
            raise ValueError("patience must be a positive integer")
        if not 0.0 <= self.cooperativeness <= 1.0:
            raise ValueError("cooperativeness must be in [0, 1]")


@dataclass(frozen=True)
class ContextState:
    """Temporal, relational, and conversational situation of the user."""

    time_of_day: TimeOfDay = TimeOfDay.EVENING
    day_type: DayType = DayType.WEEKDAY
    setting: Setting = Setting.ALONE
    satisfaction: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(self, "satisfaction",
                           min(5, max(1, self.satisfaction)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "time_of_day": self.time_of_day.value,
            "day_type": self.day_type.value,
            "setting": self.setting.value,
            "satisfaction": self.satisfaction,
        }


def update_satisfaction(context: ContextState,
                        event: SatisfactionEvent) -> ContextState:
    """Apply one event to the conversational satisfaction, clamped to [1, 5].

    Unexpected responses and bad recommendations cost one point, good
    recommendations earn one, expected responses are neutral.
    """
    delta = {
        SatisfactionEvent.EXPECTED_RESPONSE: 0,
        SatisfactionEvent.UNEXPECTED_RESPONSE: -1,
        SatisfactionEvent.GOOD_RECOMMENDATION: +1,
        SatisfactionEvent.BAD_RECOMMENDATION: -1,
    }[event]
    return replace(context, satisfaction=context.satisfaction + delta)


@dataclass
class UserProfile:
    """One simulated user: identity, traits, situation, and preferences."""

    user_id: str
    persona: Persona
    context: ContextState
    preferences: PreferenceGraph
    seed: int


WeightTable = dict[Any, float]


@dataclass
class PopulationConfig:
    """How to synthesize a user population.

    Each trait has a ``{value: weight}`` sampling table. With
    ``ground_in_ratings`` set, every profile's preference graph is built
    from a distinct user sampled out of the ratings dataset.
    """

    n_users: int
    seed: int = 0
    ground_in_ratings: bool = True
    patience: WeightTable = None  # type: ignore[assignment]
    cooperativeness: WeightTable = None  # type: ignore[assignment]
    time_of_day: WeightTable = None  # type: ignore[assignment]
    day_type: WeightTable = None  # type: ignore[assignment]
    setting: WeightTable = None  # type: ignore[assignment]
    satisfaction: WeightTable = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.n_users < 1:
            raise ValueError("n_users must be positive")
        defaults: dict[str, WeightTable] = {
            "patience": {3: 1.0},
            "cooperativeness": {0.8: 1.0},
            "time_of_day": {TimeOfDay.EVENING: 1.0},
            "day_type": {DayType.WEEKDAY: 1.0},
            "setting": {Setting.ALONE: 1.0},
            "satisfaction": {3: 1.0},
        }
        for trait, table in defaults.items():
            current = getattr(self, trait)
            if current is None:
                setattr(self, trait, table)
                current = table
            if any(w < 0 for w in current.values()) or not any(
                    w > 0 for w in current.values()):
                raise ValueError(f"trait {trait!r} needs non-negative weights, "
                                 "at least one positive")


def _sample(rng: random.Random, table: WeightTable) -> Any:
    values = list(table.keys())
    weights = [table[v] for v in values]
    return rng.choices(values, weights=weights, k=1)[0]


def parse_population_config(text: str) -> PopulationConfig:
    """Parse the YAML population document.

    Expected fields: ``n_users``, ``seed``, ``ground_in_ratings``, plus
    ``persona`` and ``context`` sections holding per-trait weight tables.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"malformed population config: {exc}",
                         line=mark.line + 1 if mark else None) from exc
    if not isinstance(doc, Mapping):
        raise ParseError("population config must be a mapping")
    if "n_users" not in doc:
        raise ParseError("population config is missing 'n_users'")
    known = {"n_users", "seed", "ground_in_ratings", "persona", "context"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ParseError("unknown population config "
                         f"key(s): {', '.join(map(repr, unknown))}")
    persona = doc.get("persona") or {}
    context = doc.get("context") or {}

    def table(section: Mapping, key: str, cast) -> WeightTable | None:
        raw = section.get(key)
        if raw is None:
            return None
        if not isinstance(raw, Mapping):
            raise ParseError(f"trait {key!r} must be a value: weight table")
        return {cast(value): float(weight) for value, weight in raw.items()}

    try:
        return PopulationConfig(
            n_users=int(doc["n_users"]),
            seed=int(doc.get("seed", 0)),
            ground_in_ratings=bool(doc.get("ground_in_ratings", True)),
            patience=table(persona, "patience", int),
            cooperativeness=table(persona, "cooperativeness", float),
            time_of_day=table(context, "time_of_day", TimeOfDay),
            day_type=table(context, "day_type", DayType),
            setting=table(context, "setting", Setting),
            satisfaction=table(context, "satisfaction", int),
        )
    except (ValueError, KeyError) as exc:
        raise ParseError(f"invalid population config: {exc}") from exc


def load_population_config(source: str | Path | IO[str]) -> PopulationConfig:
    if isinstance(source, (str, Path)):
        return parse_population_config(Path(source).read_text(encoding="utf-8"))
    return parse_population_config(source.read())


def generate_population(
    config: PopulationConfig,
    ratings: list[Rating],
    items: ItemCollection,
    scale: RatingScale = RatingScale(1.0, 5.0),
) -> list[UserProfile]:
    """Deterministically synthesize ``n_users`` profiles.

    A pure function of its inputs: per-user seeds derive from the master
    seed, and all trait draws use those seeds, so the same config and data
    always produce the same population.
    """
    master = random.Random(config.seed)
    grounding_users: list[str] = []
    if config.ground_in_ratings:
        distinct = sorted({r.user_id for r in ratings})
        if len(distinct) < config.n_users:
            raise InsufficientRatingsUsers(
                f"need {config.n_users} distinct ratings users, have {len(distinct)}"
            )
        grounding_users = master.sample(distinct, config.n_users)
    by_user: dict[str, list[Rating]] = {}
    for r in ratings:
        by_user.setdefault(r.user_id, []).append(r)

    width = max(4, len(str(config.n_users - 1)))
    profiles: list[UserProfile] = []
    for i in range(config.n_users):
        seed = master.getrandbits(32)
        rng = random.Random(seed)
        persona = Persona(
            patience=_sample(rng, config.patience),
            cooperativeness=_sample(rng, config.cooperativeness),
        )
        context = ContextState(
            time_of_day=_sample(rng, config.time_of_day),
            day_type=_sample(rng, config.day_type),
            setting=_sample(rng, config.setting),
            satisfaction=_sample(rng, config.satisfaction),
        )
        graph_seed = rng.getrandbits(32)
        if config.ground_in_ratings:
            graph = build_preference_graph(by_user[grounding_users[i]], items,
                                           scale, seed=graph_seed)
        else:
            graph = PreferenceGraph(items, seed=graph_seed)
        profiles.append(UserProfile(
            user_id=f"sim_user_{i:0{width}d}",
            persona=persona,
            context=context,
            preferences=graph,
            seed=seed,
        ))
    return profiles
