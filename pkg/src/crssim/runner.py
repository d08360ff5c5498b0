"""Training and simulation orchestration plus artifact persistence.

A run directory looks like::

    out/
      models/            trained model documents (JSON)
      transcripts.json   every simulated dialogue
      config-snapshot    the exact configuration of the run (JSON content)
      report.json        evaluation metrics (written by ``evaluate``)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .connector import DialogueParticipant, connect_dialogue
from .dialogue import AnnotatedUtterance, Dialogue, Participant
from .domain import (Domain, ItemCollection, RatingScale, load_domain,
                     load_item_collection, load_ratings)
from .errors import ParseError, SchemaVersionMismatch
from .interaction import (InteractionModel, learn_transitions,
                          load_interaction_model)
from .metrics import MetricsReport, evaluate
from .mock_agent import MockCRSAgent
from .nlg import TemplateStore, extract_templates, load_default_patterns
from .nlu import (ExtractionLexicon, IntentModel, SatisfactionModel,
                  UNKNOWN_INTENT, train_intent_classifier,
                  train_satisfaction_classifier, train_slot_extractor)
from .population import UserProfile, generate_population, load_population_config
from .simulator import SimulatedUser
from .transcript import export_dialogues, import_dialogues
from .wire import AgentEndpoint, WireAgent

SCHEMA_VERSION = 1
DEFAULT_SCALE = RatingScale(1.0, 5.0)

MODELS_DIR = "models"
TRANSCRIPTS_FILE = "transcripts.json"
SNAPSHOT_FILE = "config-snapshot"
REPORT_FILE = "report.json"


@dataclass
class TrainedArtifacts:
    """Everything the simulator learns from the annotated sample."""

    interaction_model: InteractionModel
    intent_model: IntentModel
    lexicon: ExtractionLexicon
    templates: TemplateStore
    satisfaction_model: SatisfactionModel | None = None


def train_simulator(
    sample: Sequence[Dialogue],
    interaction_model: InteractionModel,
    domain: Domain,
    items: ItemCollection,
    default_patterns: Mapping[str, str] | None = None,
) -> TrainedArtifacts:
    """Fit every trainable component from the annotated dialogue sample.

    The intent classifier is trained on *agent* utterances (the simulator
    must understand the other side), the satisfaction classifier on user
    utterances carrying satisfaction labels, the slot lexicon on all
    annotations plus the item collection, the transition model on user
    intent sequences, and the template store on user utterances.
    """
    agent_samples = [
        (u.text, u.intent)
        for d in sample for u in d.utterances
        if isinstance(u, AnnotatedUtterance)
        and u.participant is Participant.AGENT
    ]
    intent_model = train_intent_classifier(agent_samples,
                                           fallback_intent=UNKNOWN_INTENT)
    lexicon = train_slot_extractor(sample, items, domain)
    satisfaction_samples = [
        (u.text, u.satisfaction)
        for d in sample for u in d.utterances
        if isinstance(u, AnnotatedUtterance)
        and u.participant is Participant.USER
        and u.satisfaction is not None
    ]
    satisfaction_model = (train_satisfaction_classifier(satisfaction_samples)
                          if satisfaction_samples else None)
    model = learn_transitions(sample, interaction_model)
    templates = extract_templates(sample, model, default_patterns)
    return TrainedArtifacts(
        interaction_model=model,
        intent_model=intent_model,
        lexicon=lexicon,
        templates=templates,
        satisfaction_model=satisfaction_model,
    )


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    document = {"schema_version": SCHEMA_VERSION, **payload}
    path.write_text(json.dumps(document, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def _read_json(path: Path) -> dict[str, Any]:
    if not path.is_file():
        raise ParseError(f"missing model artifact: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(document, dict):
        raise ParseError(f"expected a JSON object in {path}")
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"{path}: schema_version {version!r}, expected {SCHEMA_VERSION}")
    return document


def save_artifacts(artifacts: TrainedArtifacts, out_dir: str | Path) -> Path:
    """Persist trained models under ``out_dir/models/``."""
    models = Path(out_dir) / MODELS_DIR
    models.mkdir(parents=True, exist_ok=True)
    _write_json(models / "interaction_model.json",
                artifacts.interaction_model.to_dict())
    _write_json(models / "intent_model.json", artifacts.intent_model.to_dict())
    _write_json(models / "slot_lexicon.json", artifacts.lexicon.to_dict())
    _write_json(models / "template_store.json", artifacts.templates.to_dict())
    if artifacts.satisfaction_model is not None:
        _write_json(models / "satisfaction_model.json",
                    artifacts.satisfaction_model.to_dict())
    return models


def load_artifacts(out_dir: str | Path) -> TrainedArtifacts:
    """Load trained models persisted by :func:`save_artifacts`."""
    models = Path(out_dir) / MODELS_DIR
    satisfaction_path = models / "satisfaction_model.json"
    return TrainedArtifacts(
        interaction_model=InteractionModel.from_dict(
            _read_json(models / "interaction_model.json")),
        intent_model=IntentModel.from_dict(
            _read_json(models / "intent_model.json")),
        lexicon=ExtractionLexicon.from_dict(
            _read_json(models / "slot_lexicon.json")),
        templates=TemplateStore.from_dict(
            _read_json(models / "template_store.json")),
        satisfaction_model=(SatisfactionModel.from_dict(
            _read_json(satisfaction_path))
            if satisfaction_path.is_file() else None),
    )


@dataclass
class SimulationConfig:
    """Everything one simulation run needs, by path or literal value."""

    domain: str
    items: str
    ratings: str
    interaction_model: str
    sample: str
    population: str
    agent: str = "mock"
    max_turns: int = 30
    seed: int | None = None
    out: str = "out"
    train: bool = False
    default_templates: str | None = None

    def __post_init__(self) -> None:
        if self.max_turns < 2:
            raise ValueError("max_turns must be at least 2")

    def to_dict(self) -> dict[str, Any]:
        return {
            "domain": self.domain,
            "items": self.items,
            "ratings": self.ratings,
            "interaction_model": self.interaction_model,
            "sample": self.sample,
            "population": self.population,
            "agent": self.agent,
            "max_turns": self.max_turns,
            "seed": self.seed,
            "out": self.out,
            "train": self.train,
            "default_templates": self.default_templates,
        }


def _agent_factory(config: SimulationConfig, items: ItemCollection
                   ) -> Callable[[UserProfile], DialogueParticipant]:
    if config.agent == "mock":
        return lambda profile: MockCRSAgent(items)
    endpoint = AgentEndpoint(config.agent)
    return lambda profile: WireAgent(endpoint, session_id=profile.user_id)


def _load_inputs(config: SimulationConfig):
    domain = load_domain(config.domain)
    items = load_item_collection(config.items, domain)
    ratings = load_ratings(config.ratings, DEFAULT_SCALE)
    interaction_model = load_interaction_model(config.interaction_model)
    sample = import_dialogues(config.sample)
    return domain, items, ratings, interaction_model, sample


def run_training(config: SimulationConfig) -> Path:
    """Train all simulator components and persist them under the run dir."""
    domain, items, _, interaction_model, sample = _load_inputs(config)
    patterns = (load_default_patterns(
        Path(config.default_templates).read_text(encoding="utf-8"))
        if config.default_templates else None)
    artifacts = train_simulator(sample, interaction_model, domain, items,
                                default_patterns=patterns)
    return save_artifacts(artifacts, config.out)


def run_simulation(config: SimulationConfig) -> Path:
    """Run one dialogue per generated user against the configured agent.

    Returns the run directory, containing ``transcripts.json`` and the
    ``config-snapshot``. Aborted dialogues (agent failures) are persisted
    with their cause; they never stop the run.
    """
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    domain = load_domain(config.domain)
    items = load_item_collection(config.items, domain)
    ratings = load_ratings(config.ratings, DEFAULT_SCALE)
    if config.train:
        run_training(config)
    artifacts = load_artifacts(out)

    population_config = load_population_config(config.population)
    if config.seed is not None:
        population_config = replace(population_config, seed=config.seed)
    population = generate_population(population_config, ratings, items,
                                     DEFAULT_SCALE)
    new_agent = _agent_factory(config, items)

    dialogues: list[Dialogue] = []
    for profile in population:
        user = SimulatedUser(
            profile=profile,
            interaction_model=artifacts.interaction_model,
            intent_model=artifacts.intent_model,
            lexicon=artifacts.lexicon,
            templates=artifacts.templates,
            items=items,
        )
        dialogue = connect_dialogue(
            user=user,
            agent=new_agent(profile),
            max_turns=config.max_turns,
            dialogue_id=f"dlg-{profile.user_id}",
            agent_id=config.agent,
            user_id=profile.user_id,
        )
        dialogues.append(dialogue)

    export_dialogues(dialogues, out / TRANSCRIPTS_FILE)
    _write_json(out / SNAPSHOT_FILE, config.to_dict())
    return out


def run_evaluation(transcripts: str | Path, out_dir: str | Path | None = None,
                   ) -> MetricsReport:
    """Evaluate a transcript file; optionally persist ``report.json``."""
    dialogues = import_dialogues(transcripts)
    report = evaluate(dialogues)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / REPORT_FILE, report.to_dict())
    return report
