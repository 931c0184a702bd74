"""JSON document format for mental models.

Top-level object: ``{version, kinds, entities, relation_templates, relations,
models, theories}``. Entities reference kinds by name; relations reference
templates by name and entities by id. Attribute values are plain JSON
numbers/booleans/strings; the UNSET/MODIFIED/FREE pattern markers are encoded
as ``{"marker": "unset"|"modified"|"free"}`` objects so they can never collide
with a literal text value.

Serialization is deterministic (fixed field order, insertion-ordered
collections), so re-serializing a deserialized document is byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

from .core import (
    AttributePattern,
    Condition,
    Entity,
    EndpointType,
    Kind,
    Marker,
    MentalModel,
    Model,
    RelationInstance,
    RelationTemplate,
    build_indices,
    check_value,
)
from .errors import MalformedDocument, MentalModelError, SchemaVersionMismatch

DOCUMENT_VERSION = 1


def encode_condition(cond: Condition) -> Any:
    if isinstance(cond, Marker):
        return {"marker": cond.value}
    return cond


def _decode_condition(raw: Any) -> Condition:
    if isinstance(raw, dict):
        try:
            return Marker(raw["marker"])
        except (KeyError, ValueError):
            raise MalformedDocument(f"bad condition object {raw!r}") from None
    if isinstance(raw, (int, float, bool, str)):
        return raw
    raise MalformedDocument(f"bad condition value {raw!r}")


def encode_pattern(pattern: AttributePattern) -> dict:
    return {
        "kind": pattern.kind,
        "attribute_conditions": {
            attr: encode_condition(cond)
            for attr, cond in pattern.attribute_conditions.items()
        },
    }


def to_document(mm: MentalModel) -> dict:
    """Encode a mental model as a JSON-ready dict."""
    return {
        "version": DOCUMENT_VERSION,
        "kinds": [
            {
                "name": k.name,
                "constants": dict(k.constants),
                "attribute_schema": dict(k.attribute_schema),
            }
            for k in mm.kinds
        ],
        "entities": [
            {"id": e.id, "kind": e.kind.name, "attributes": dict(e.attributes)}
            for e in mm.entities
        ],
        "relation_templates": [
            {
                "name": t.name,
                "explanan_type": {
                    "kind": t.explanan_type.kind,
                    "attributes": list(t.explanan_type.attributes),
                },
                "explanandum_type": {
                    "kind": t.explanandum_type.kind,
                    "attributes": list(t.explanandum_type.attributes),
                },
                "reason": t.reason,
                "priority": t.priority,
            }
            for t in mm.relation_templates
        ],
        "relations": [
            {
                "id": r.id,
                "template": r.template.name,
                "explanan": r.explanan.id,
                "explanandum": r.explanandum.id,
            }
            for r in mm.relations
        ],
        "models": [
            {
                "name": m.name,
                "context": [encode_pattern(p) for p in m.context],
                "result": [encode_pattern(p) for p in m.result],
                "model_of": {"kind": m.model_of[0], "attribute": m.model_of[1]},
                "story": m.story,
            }
            for m in mm.models
        ],
        "theories": list(mm.theory_labels),
    }


def serialize(mm: MentalModel) -> str:
    return json.dumps(to_document(mm), ensure_ascii=False, separators=(",", ":"))


def _require(obj: dict, key: str, message: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedDocument(message)
    return obj[key]


def from_document(doc: Any) -> MentalModel:
    """Decode and validate a document dict, rebuilding the indices."""
    if not isinstance(doc, dict):
        raise MalformedDocument("document root must be an object")
    version = _require(doc, "version", "document lacks a version field")
    if version != DOCUMENT_VERSION:
        raise SchemaVersionMismatch(
            f"document version {version!r}, engine expects {DOCUMENT_VERSION}"
        )
    try:
        kinds: dict[str, Kind] = {}
        for rk in doc["kinds"]:
            kind = Kind(
                name=rk["name"],
                constants=dict(rk["constants"]),
                attribute_schema=dict(rk["attribute_schema"]),
            )
            if kind.name in kinds:
                raise MalformedDocument(f"duplicate kind {kind.name!r}")
            kinds[kind.name] = kind

        entities: dict[int, Entity] = {}
        order: list[Entity] = []
        for re_ in doc["entities"]:
            kind = kinds.get(re_["kind"])
            if kind is None:
                raise MalformedDocument(f"entity references unknown kind {re_['kind']!r}")
            attributes = dict(re_["attributes"])
            if attributes.keys() != kind.attribute_schema.keys():
                raise MalformedDocument(
                    f"entity {re_['id']} attributes do not cover kind "
                    f"{kind.name!r} schema exactly"
                )
            attributes = {
                attr: check_value(kind.attribute_schema[attr], value)
                for attr, value in attributes.items()
            }
            entity = Entity(id=int(re_["id"]), kind=kind, attributes=attributes)
            if entity.id in entities:
                raise MalformedDocument(f"duplicate entity id {entity.id}")
            entities[entity.id] = entity
            order.append(entity)

        templates: dict[str, RelationTemplate] = {}
        for rt in doc["relation_templates"]:
            template = RelationTemplate(
                name=rt["name"],
                explanan_type=_decode_endpoint(rt["explanan_type"], kinds),
                explanandum_type=_decode_endpoint(rt["explanandum_type"], kinds),
                reason=rt["reason"],
                priority=int(rt["priority"]),
            )
            if template.name in templates:
                raise MalformedDocument(f"duplicate relation template {template.name!r}")
            templates[template.name] = template

        relations: list[RelationInstance] = []
        for rr in doc["relations"]:
            template = templates.get(rr["template"])
            if template is None:
                raise MalformedDocument(
                    f"relation references unknown template {rr['template']!r}"
                )
            try:
                explanan = entities[int(rr["explanan"])]
                explanandum = entities[int(rr["explanandum"])]
            except KeyError as exc:
                raise MalformedDocument(f"relation references unknown entity {exc}") from None
            if (
                explanan.kind.name != template.explanan_type.kind
                or explanandum.kind.name != template.explanandum_type.kind
            ):
                raise MalformedDocument(
                    f"relation {rr['id']} entity kinds disagree with template "
                    f"{template.name!r}"
                )
            relations.append(
                RelationInstance(
                    id=int(rr["id"]),
                    template=template,
                    explanan=explanan,
                    explanandum=explanandum,
                )
            )

        models: list[Model] = []
        for rm in doc["models"]:
            mof = rm["model_of"]
            models.append(
                Model(
                    name=rm["name"],
                    context=tuple(_decode_pattern(p, kinds) for p in rm["context"]),
                    result=tuple(_decode_pattern(p, kinds) for p in rm["result"]),
                    model_of=(mof["kind"], mof["attribute"]),
                    story=rm["story"],
                )
            )

        theories = tuple(str(t) for t in doc["theories"])
    except MalformedDocument:
        raise
    except (KeyError, TypeError, ValueError, MentalModelError) as exc:
        # covers missing fields, wrong shapes, and engine-level validation
        # failures (bad type tags, mistyped attribute values)
        raise MalformedDocument(f"document structure invalid: {exc}") from exc

    relations_t = tuple(relations)
    models_t = tuple(models)
    explanandum_index, mof_index = build_indices(relations_t, models_t)
    return MentalModel(
        kinds=tuple(kinds.values()),
        entities=tuple(order),
        relation_templates=tuple(templates.values()),
        relations=relations_t,
        models=models_t,
        theory_labels=theories,
        explanandum_index=explanandum_index,
        mof_index=mof_index,
    )


def deserialize(text: str) -> MentalModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    return from_document(doc)


def save(mm: MentalModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(mm))


def load(path) -> MentalModel:
    with open(path, "r", encoding="utf-8") as fh:
        return deserialize(fh.read())


def _decode_endpoint(raw: dict, kinds: dict[str, Kind]) -> EndpointType:
    kind_name = raw["kind"]
    if kind_name not in kinds:
        raise MalformedDocument(f"endpoint references unknown kind {kind_name!r}")
    return EndpointType(kind=kind_name, attributes=tuple(raw["attributes"]))


def _decode_pattern(raw: dict, kinds: dict[str, Kind]) -> AttributePattern:
    kind_name = raw["kind"]
    if kind_name not in kinds:
        raise MalformedDocument(f"pattern references unknown kind {kind_name!r}")
    return AttributePattern(
        kind=kind_name,
        attribute_conditions={
            attr: _decode_condition(c) for attr, c in raw["attribute_conditions"].items()
        },
    )
