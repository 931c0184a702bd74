"""Core data model: the five explanation categories and the mental-model store.

A mental model is the engine's structured picture of one AI system prediction.
It is assembled once by an adapter through :class:`MentalModelBuilder` and then
frozen into a :class:`MentalModel` that dialogue sessions query concurrently:

* :class:`Kind`: an abstract class of entities (a named attribute schema plus
  shared constants).
* :class:`Entity`: a concrete instance of a kind with attribute values taken
  from the running prediction.
* :class:`RelationTemplate` / :class:`RelationInstance`: causal
  entity-to-entity explanation edges, carrying a human-readable reason and an
  integer priority (higher is presented first).
* :class:`Model`: a "story" of how kind attributes change, with context and
  result patterns used to match it against questioned relations.
* Theories: a placeholder label list only; no theory objects exist.

Insertion order is preserved everywhere and doubles as the deterministic
tiebreak, so identical build sequences produce identical mental models and
identical dialogues.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import (
    DuplicateKind,
    DuplicateTemplate,
    InconsistentModelOf,
    KindMismatch,
    MissingAttribute,
    OverlappingConstantAndAttribute,
    TypeMismatch,
    UnknownAttribute,
    UnknownKind,
)

# Attribute values are restricted to four literal types; they cover every
# field either adapter needs (floats, ints, booleans, strings).
AttributeValue = Union[float, int, bool, str]

VALUE_TYPES = ("real", "integer", "boolean", "text")

# The attribute every kind carries implicitly: a human-facing identifying name.
NAME_ATTRIBUTE = "name"


def check_value(tag: str, value: AttributeValue) -> AttributeValue:
    """Check `value` against a schema tag, normalizing ints to floats for reals.

    bool is a subclass of int in Python, so boolean is tested first and
    excluded from the numeric tags.
    """
    if tag == "boolean":
        if isinstance(value, bool):
            return value
    elif tag == "integer":
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif tag == "real":
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif tag == "text":
        if isinstance(value, str):
            return value
    else:
        raise TypeMismatch(f"unknown value type tag {tag!r}")
    raise TypeMismatch(f"value {value!r} does not match type {tag!r}")


@dataclass(frozen=True)
class Kind:
    """An abstract class of entities.

    `constants` hold characteristics shared by every instance; the
    `attribute_schema` maps per-instance attribute names to a value-type tag
    (one of real/integer/boolean/text). The schema always contains the
    implicit `name` text attribute.
    """

    name: str
    constants: dict[str, AttributeValue]
    attribute_schema: dict[str, str]

    def has_attribute(self, attribute: str) -> bool:
        return attribute in self.attribute_schema or attribute in self.constants


@dataclass(frozen=True)
class Entity:
    """A runtime instance of a kind; attribute keys equal the kind's schema keys."""

    id: int
    kind: Kind
    attributes: dict[str, AttributeValue]

    @property
    def name(self) -> str:
        return str(self.attributes[NAME_ATTRIBUTE])


@dataclass(frozen=True)
class EndpointType:
    """One end of a relation template: a kind plus the attributes that play a role."""

    kind: str
    attributes: tuple[str, ...]


@dataclass(frozen=True)
class RelationTemplate:
    """The reusable part of an entity-entity relation.

    Templates are stored once and referenced by instances; instances are
    created at prediction time, one per concrete entity pair.
    """

    name: str
    explanan_type: EndpointType
    explanandum_type: EndpointType
    reason: str
    priority: int


@dataclass(frozen=True)
class RelationInstance:
    """A causal explanation edge between two concrete entities.

    Self-relations (explanan is the explanandum) are legal: a fact predicate
    explains its own truth.
    """

    id: int
    template: RelationTemplate
    explanan: Entity
    explanandum: Entity


class Marker(enum.Enum):
    """Non-literal conditions an attribute pattern may impose.

    UNSET/MODIFIED mark the before/after of the change a model describes;
    FREE marks an attribute that is mentioned but unconstrained.
    """

    UNSET = "unset"
    MODIFIED = "modified"
    FREE = "free"


UNSET = Marker.UNSET
MODIFIED = Marker.MODIFIED
FREE = Marker.FREE

Condition = Union[AttributeValue, Marker]


@dataclass(frozen=True)
class AttributePattern:
    """A constraint on instances of one kind, used in model contexts/results."""

    kind: str
    attribute_conditions: dict[str, Condition]

    def mentions(self, attribute: str) -> bool:
        return attribute in self.attribute_conditions

    def literals_hold(self, entity: Entity) -> bool:
        """True when every literal condition matches the entity's current value.

        Marker conditions always pass: UNSET/MODIFIED describe the state
        before/after the modelled change, which a finished entity cannot be
        compared against, and FREE is unconstrained by definition.
        """
        for attr, cond in self.attribute_conditions.items():
            if isinstance(cond, Marker):
                continue
            value = entity.attributes.get(attr, entity.kind.constants.get(attr))
            if isinstance(value, bool) != isinstance(cond, bool) or value != cond:
                return False
        return True


@dataclass(frozen=True)
class Model:
    """A story of how kind attributes change under interaction.

    `context` and `result` are logically sets of attribute patterns; they are
    stored as tuples to keep serialization and matching deterministic.
    `model_of` names the (kind, attribute) the model modifies and feeds the
    fast-match index.
    """

    name: str
    context: tuple[AttributePattern, ...]
    result: tuple[AttributePattern, ...]
    model_of: tuple[str, str]
    story: str


@dataclass(frozen=True)
class MentalModel:
    """An immutable, fully validated mental model plus its query indices.

    The two indices are derivable from the relation/model collections;
    `rebuild_indices` recomputes them from scratch and is used to check
    consistency after deserialization.
    """

    kinds: tuple[Kind, ...]
    entities: tuple[Entity, ...]
    relation_templates: tuple[RelationTemplate, ...]
    relations: tuple[RelationInstance, ...]
    models: tuple[Model, ...]
    theory_labels: tuple[str, ...] = ()
    # (entity-id, attribute) -> relation ids in insertion order
    explanandum_index: dict[tuple[int, str], list[int]] = field(default_factory=dict)
    # (kind, attribute) -> model indices in insertion order
    mof_index: dict[tuple[str, str], list[int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_kinds_by_name", {k.name: k for k in self.kinds})
        object.__setattr__(self, "_entities_by_id", {e.id: e for e in self.entities})
        object.__setattr__(
            self, "_templates_by_name", {t.name: t for t in self.relation_templates}
        )
        object.__setattr__(self, "_relations_by_id", {r.id: r for r in self.relations})
        names: dict[str, list[int]] = {}
        for e in self.entities:
            names.setdefault(e.name, []).append(e.id)
        object.__setattr__(self, "_entity_ids_by_name", names)

    def kind(self, name: str) -> Kind:
        try:
            return self._kinds_by_name[name]
        except KeyError:
            raise UnknownKind(f"no kind named {name!r}") from None

    def has_kind(self, name: str) -> bool:
        return name in self._kinds_by_name

    def entity(self, entity_id: int) -> Optional[Entity]:
        return self._entities_by_id.get(entity_id)

    def template(self, name: str) -> Optional[RelationTemplate]:
        return self._templates_by_name.get(name)

    def relation(self, relation_id: int) -> Optional[RelationInstance]:
        return self._relations_by_id.get(relation_id)

    def entities_named(self, name: str) -> list[Entity]:
        return [self._entities_by_id[i] for i in self._entity_ids_by_name.get(name, [])]

    def rebuild_indices(self) -> tuple[dict, dict]:
        return build_indices(self.relations, self.models)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MentalModel):
            return NotImplemented
        return (
            self.kinds == other.kinds
            and self.entities == other.entities
            and self.relation_templates == other.relation_templates
            and self.relations == other.relations
            and self.models == other.models
            and self.theory_labels == other.theory_labels
        )


def build_indices(
    relations: Iterable[RelationInstance], models: Iterable[Model]
) -> tuple[dict[tuple[int, str], list[int]], dict[tuple[str, str], list[int]]]:
    """Compute both query indices from scratch, in insertion order."""
    explanandum_index: dict[tuple[int, str], list[int]] = {}
    for rel in relations:
        for attr in rel.template.explanandum_type.attributes:
            explanandum_index.setdefault((rel.explanandum.id, attr), []).append(rel.id)
    mof_index: dict[tuple[str, str], list[int]] = {}
    for pos, model in enumerate(models):
        mof_index.setdefault(model.model_of, []).append(pos)
    return explanandum_index, mof_index


class MentalModelBuilder:
    """Single-writer assembly of a mental model; `build()` freezes it.

    All validation happens here, at registration time, so a built model never
    violates the structural invariants (schema coverage, kind agreement,
    model-of consistency).
    """

    def __init__(self):
        self._kinds: dict[str, Kind] = {}
        self._entities: list[Entity] = []
        self._templates: dict[str, RelationTemplate] = {}
        self._relations: list[RelationInstance] = []
        self._relation_keys: set[tuple[str, int, int]] = set()
        self._models: list[Model] = []
        self._theories: list[str] = []

    # -- kinds ------------------------------------------------------------

    def define_kind(
        self,
        name: str,
        constants: Mapping[str, AttributeValue] | None = None,
        schema: Mapping[str, str] | None = None,
    ) -> Kind:
        if name in self._kinds:
            raise DuplicateKind(f"kind {name!r} already defined")
        constants = dict(constants or {})
        schema = dict(schema or {})
        if NAME_ATTRIBUTE in constants:
            raise OverlappingConstantAndAttribute(
                f"{NAME_ATTRIBUTE!r} is an implicit attribute and cannot be a constant"
            )
        overlap = constants.keys() & schema.keys()
        if overlap:
            raise OverlappingConstantAndAttribute(
                f"attributes {sorted(overlap)} appear in both constants and schema"
            )
        declared_name_tag = schema.setdefault(NAME_ATTRIBUTE, "text")
        if declared_name_tag != "text":
            raise TypeMismatch(f"the implicit {NAME_ATTRIBUTE!r} attribute must be text")
        for attr, tag in schema.items():
            if tag not in VALUE_TYPES:
                raise TypeMismatch(f"unknown value type tag {tag!r} for attribute {attr!r}")
        kind = Kind(name=name, constants=constants, attribute_schema=schema)
        self._kinds[name] = kind
        return kind

    # -- entities ---------------------------------------------------------

    def instantiate_entity(
        self, kind: Kind | str, name: str, values: Mapping[str, AttributeValue]
    ) -> Entity:
        """Create an entity of `kind`; `values` must cover the schema minus `name`."""
        kind = self._resolve_kind(kind)
        attributes: dict[str, AttributeValue] = {}
        for attr, tag in kind.attribute_schema.items():
            if attr == NAME_ATTRIBUTE:
                attributes[attr] = check_value(tag, name)
                continue
            if attr not in values:
                raise MissingAttribute(f"entity {name!r} of kind {kind.name!r} lacks {attr!r}")
            attributes[attr] = check_value(tag, values[attr])
        extra = set(values.keys() - kind.attribute_schema.keys())
        if NAME_ATTRIBUTE in values:
            extra.add(NAME_ATTRIBUTE)  # name comes from the name argument, never values
        if extra:
            raise UnknownAttribute(
                f"kind {kind.name!r} does not accept attributes {sorted(extra)}"
            )
        entity = Entity(id=len(self._entities), kind=kind, attributes=attributes)
        self._entities.append(entity)
        return entity

    # -- relations ----------------------------------------------------------

    def define_relation_template(
        self,
        name: str,
        explanan_type: tuple[str, Iterable[str]],
        explanandum_type: tuple[str, Iterable[str]],
        reason: str,
        priority: int = 0,
    ) -> RelationTemplate:
        if name in self._templates:
            raise DuplicateTemplate(f"relation template {name!r} already defined")
        template = RelationTemplate(
            name=name,
            explanan_type=self._check_endpoint(explanan_type),
            explanandum_type=self._check_endpoint(explanandum_type),
            reason=reason,
            priority=priority,
        )
        self._templates[name] = template
        return template

    def add_relation(
        self, template: RelationTemplate | str, explanan: Entity, explanandum: Entity
    ) -> RelationInstance:
        if isinstance(template, str):
            if template not in self._templates:
                raise UnknownKind(f"no relation template named {template!r}")
            template = self._templates[template]
        if explanan.kind.name != template.explanan_type.kind:
            raise KindMismatch(
                f"explanan {explanan.name!r} is a {explanan.kind.name}, "
                f"template {template.name!r} wants {template.explanan_type.kind}"
            )
        if explanandum.kind.name != template.explanandum_type.kind:
            raise KindMismatch(
                f"explanandum {explanandum.name!r} is a {explanandum.kind.name}, "
                f"template {template.name!r} wants {template.explanandum_type.kind}"
            )
        relation = RelationInstance(
            id=len(self._relations),
            template=template,
            explanan=explanan,
            explanandum=explanandum,
        )
        self._relations.append(relation)
        self._relation_keys.add((template.name, explanan.id, explanandum.id))
        return relation

    def has_relation(self, template_name: str, explanan_id: int, explanandum_id: int) -> bool:
        return (template_name, explanan_id, explanandum_id) in self._relation_keys

    # -- models -------------------------------------------------------------

    def add_model(self, model: Model) -> int:
        """Validate and store a model; returns its id (position)."""
        for pattern in model.context + model.result:
            kind = self._resolve_kind(pattern.kind)
            for attr in pattern.attribute_conditions:
                if not kind.has_attribute(attr):
                    raise UnknownAttribute(
                        f"kind {kind.name!r} has no attribute {attr!r} (model {model.name!r})"
                    )
        mof_kind, mof_attr = model.model_of
        kind = self._resolve_kind(mof_kind)
        if not kind.has_attribute(mof_attr):
            raise UnknownAttribute(
                f"model_of attribute {mof_attr!r} missing from kind {mof_kind!r}"
            )
        if not any(
            p.kind == mof_kind and p.attribute_conditions.get(mof_attr) is MODIFIED
            for p in model.result
        ):
            raise InconsistentModelOf(
                f"model {model.name!r}: model_of {model.model_of} is not MODIFIED in any result pattern"
            )
        context_kinds = {p.kind for p in model.context}
        stray = {p.kind for p in model.result} - context_kinds
        if stray:
            raise InconsistentModelOf(
                f"model {model.name!r}: result kinds {sorted(stray)} missing from context"
            )
        self._models.append(model)
        return len(self._models) - 1

    def add_theory_label(self, label: str) -> None:
        self._theories.append(label)

    # -- assembly -------------------------------------------------------------

    def build(self) -> MentalModel:
        relations = tuple(self._relations)
        models = tuple(self._models)
        explanandum_index, mof_index = build_indices(relations, models)
        return MentalModel(
            kinds=tuple(self._kinds.values()),
            entities=tuple(self._entities),
            relation_templates=tuple(self._templates.values()),
            relations=relations,
            models=models,
            theory_labels=tuple(self._theories),
            explanandum_index=explanandum_index,
            mof_index=mof_index,
        )

    # -- helpers ---------------------------------------------------------------

    def _resolve_kind(self, kind: Kind | str) -> Kind:
        name = kind.name if isinstance(kind, Kind) else kind
        if name not in self._kinds:
            raise UnknownKind(f"no kind named {name!r}")
        return self._kinds[name]

    def _check_endpoint(self, endpoint: tuple[str, Iterable[str]]) -> EndpointType:
        kind_name, attributes = endpoint
        kind = self._resolve_kind(kind_name)
        attributes = tuple(attributes)
        for attr in attributes:
            if not kind.has_attribute(attr):
                raise UnknownAttribute(f"kind {kind_name!r} has no attribute {attr!r}")
        return EndpointType(kind=kind_name, attributes=attributes)
