"""Crosswalk from processing steps to a PROV document and PROV-N text.

Each processing step becomes an activity; the step's actor becomes an
agent tied in with wasAssociatedWith; inputs, methods, instruments,
software, the computing environment and the execution command become
entities connected with used; outputs become entities connected with
wasGeneratedBy. Files are identified by locator (pid, else link, else
name), so a file written by one step and read by a later one is a single
entity and the chain is visible in the graph.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import ProvError
from .isodates import parse_iso_datetime
from .model import EngMetaDataset, FileRef

DEFAULT_BASE_URI = "https://engmeta.example.org/prov#"
PREFIX = "ex"

# used(activity, entity), wasGeneratedBy(entity, activity),
# wasAssociatedWith(activity, agent)
RELATION_TYPES = ("used", "wasGeneratedBy", "wasAssociatedWith")


@dataclass(frozen=True)
class Activity:
    id: str
    date: str | None = None
    stepType: str | None = None


@dataclass(frozen=True)
class Agent:
    id: str
    name: str | None = None
    identifier: str | None = None


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str
    label: str


@dataclass(frozen=True)
class Relation:
    type: str
    subject: str
    object: str


@dataclass(frozen=True)
class ProvDocument:
    activities: tuple[Activity, ...] = ()
    agents: tuple[Agent, ...] = ()
    entities: tuple[Entity, ...] = ()
    relations: tuple[Relation, ...] = ()


def _stable_id(prefix: str, identity: str) -> str:
    digest = hashlib.sha256(identity.encode("utf-8")).hexdigest()[:12]
    return f"{prefix}_{digest}"


class _Builder:
    def __init__(self) -> None:
        self.activities: list[Activity] = []
        self.agents: dict[tuple, Agent] = {}
        self.entities: dict[tuple[str, str], Entity] = {}
        self.relations: list[Relation] = []
        self._seen_relations: set[tuple[str, str, str]] = set()

    def entity(self, kind: str, identity: str, label: str) -> Entity:
        key = (kind, identity)
        found = self.entities.get(key)
        if found is None:
            found = Entity(_stable_id(kind, identity), kind, label)
            self.entities[key] = found
        return found

    def agent(self, name: str | None, identifier: str | None) -> Agent:
        key = (name, identifier)
        found = self.agents.get(key)
        if found is None:
            identity = f"{name or ''}\x1f{identifier or ''}"
            found = Agent(_stable_id("agent", identity), name, identifier)
            self.agents[key] = found
        return found

    def relate(self, relation_type: str, subject: str, object_id: str) -> None:
        key = (relation_type, subject, object_id)
        if key not in self._seen_relations:
            self._seen_relations.add(key)
            self.relations.append(Relation(relation_type, subject, object_id))


def _file_entity(builder: _Builder, ref: FileRef) -> Entity | None:
    locator = ref.locator()
    if locator is None:
        return None
    return builder.entity("file", locator, ref.name or locator)


def to_prov(dataset: EngMetaDataset) -> ProvDocument:
    """Convert the document's processing steps into a provenance graph."""
    builder = _Builder()
    for i, step in enumerate(dataset.processingSteps):
        activity = Activity(f"act_{i}", step.date, step.stepType)
        builder.activities.append(activity)

        if step.actor is not None:
            identifier = step.actor.identifier.value if step.actor.identifier else None
            agent = builder.agent(step.actor.name, identifier)
            builder.relate("wasAssociatedWith", activity.id, agent.id)

        for ref in step.inputs:
            entity = _file_entity(builder, ref)
            if entity is not None:
                builder.relate("used", activity.id, entity.id)
        if step.method is not None:
            entity = builder.entity("method", repr(step.method), step.method.name or "method")
            builder.relate("used", activity.id, entity.id)
        if step.errorMethod is not None:
            entity = builder.entity(
                "errorMethod", repr(step.errorMethod), step.errorMethod.name or "error method"
            )
            builder.relate("used", activity.id, entity.id)
        for instrument in step.instrument:
            entity = builder.entity("instrument", repr(instrument), instrument.name or "instrument")
            builder.relate("used", activity.id, entity.id)
        for software in step.software:
            label = software.name or software.url or software.softwareSourceCode or "software"
            entity = builder.entity("software", repr(software), label)
            builder.relate("used", activity.id, entity.id)
        if step.environment is not None:
            entity = builder.entity(
                "environment", repr(step.environment), step.environment.name or "environment"
            )
            builder.relate("used", activity.id, entity.id)
        if step.executionCommand is not None:
            entity = builder.entity(
                "executionCommand", step.executionCommand, step.executionCommand
            )
            builder.relate("used", activity.id, entity.id)

        for ref in step.outputs:
            entity = _file_entity(builder, ref)
            if entity is not None:
                builder.relate("wasGeneratedBy", entity.id, activity.id)

    return ProvDocument(
        tuple(builder.activities),
        tuple(builder.agents.values()),
        tuple(builder.entities.values()),
        tuple(builder.relations),
    )


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _attr_list(pairs: list[tuple[str, str]]) -> str:
    return "[" + ", ".join(f"{key}={_quote(value)}" for key, value in pairs) + "]"


def serialize_prov_n(doc: ProvDocument, base_uri: str = DEFAULT_BASE_URI) -> str:
    """Render the document in the human-readable PROV notation.

    Statements are ordered activities, agents, entities, relations; each
    group is sorted, so equal documents serialize identically.
    """
    _check_referential_integrity(doc)

    statements: list[str] = []
    for activity in sorted(doc.activities, key=lambda a: a.id):
        end_time = "-"
        if activity.date is not None and parse_iso_datetime(activity.date) is not None:
            end_time = activity.date
        attrs = []
        if activity.stepType is not None:
            attrs.append((f"{PREFIX}:stepType", activity.stepType))
        if activity.date is not None:
            attrs.append((f"{PREFIX}:date", activity.date))
        suffix = f", {_attr_list(attrs)}" if attrs else ""
        statements.append(f"activity({PREFIX}:{activity.id}, -, {end_time}{suffix})")

    for agent in sorted(doc.agents, key=lambda a: a.id):
        attrs = []
        if agent.name is not None:
            attrs.append(("prov:label", agent.name))
        if agent.identifier is not None:
            attrs.append((f"{PREFIX}:identifier", agent.identifier))
        suffix = f", {_attr_list(attrs)}" if attrs else ""
        statements.append(f"agent({PREFIX}:{agent.id}{suffix})")

    for entity in sorted(doc.entities, key=lambda e: e.id):
        attrs = [("prov:label", entity.label), (f"{PREFIX}:kind", entity.kind)]
        statements.append(f"entity({PREFIX}:{entity.id}, {_attr_list(attrs)})")

    rank = {name: i for i, name in enumerate(RELATION_TYPES)}
    for relation in sorted(doc.relations, key=lambda r: (rank[r.type], r.subject, r.object)):
        statements.append(f"{relation.type}({PREFIX}:{relation.subject}, {PREFIX}:{relation.object})")

    if not statements:
        return "document\nendDocument\n"
    lines = ["document", f"prefix {PREFIX} <{base_uri}>", ""]
    lines.extend(statements)
    lines.append("endDocument")
    return "\n".join(lines) + "\n"


def _check_referential_integrity(doc: ProvDocument) -> None:
    activity_ids = {a.id for a in doc.activities}
    agent_ids = {a.id for a in doc.agents}
    entity_ids = {e.id for e in doc.entities}
    for relation in doc.relations:
        if relation.type == "used":
            ok = relation.subject in activity_ids and relation.object in entity_ids
        elif relation.type == "wasGeneratedBy":
            ok = relation.subject in entity_ids and relation.object in activity_ids
        elif relation.type == "wasAssociatedWith":
            ok = relation.subject in activity_ids and relation.object in agent_ids
        else:
            raise ProvError(f"unknown relation type {relation.type!r}")
        if not ok:
            raise ProvError(
                f"dangling endpoint in {relation.type}({relation.subject}, {relation.object})"
            )
