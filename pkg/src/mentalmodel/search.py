"""Search for explanations over a finalized mental model.

Two procedures, matching the two question types the dialogue allows:

* :func:`explain_entity` answers "why does this entity have this attribute
  value" with entity-entity relations. Presentation is biased: each ask
  returns only the not-yet-presented relations of maximal priority (one
  priority tier per ask); re-asking the exact same question walks down the
  tiers until :data:`EXHAUSTED`.

* :func:`explain_relation` answers "how did this relation come about" with the
  models that tell the story behind it. Models are matched structurally
  (kind-level, via the model-of index) and then narrowed to the ones whose
  context/result patterns are compatible with the two concrete entities, so a
  per-neuron activation model only matches relations into that neuron.

Everything here is a pure function over an immutable mental model plus an
explicit :class:`PresentedSet` owned by the caller, so concurrent sessions on
one model cannot interfere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Entity, MentalModel, Model, RelationInstance, MODIFIED
from .errors import NoMatchingModel, UnknownAttribute, UnknownEntity, UnknownKind, UnknownRelation


@dataclass(frozen=True)
class EntityQuestion:
    """Why does entity `entity` have its current `attribute` value?"""

    entity: int
    attribute: str


@dataclass(frozen=True)
class RelationQuestion:
    """How did relation `relation` come about?"""

    relation: int


class Exhausted:
    """Distinguished answer: every matching relation was already presented."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Exhausted"


EXHAUSTED = Exhausted()


@dataclass
class PresentedSet:
    """Per-session record of relations already shown, keyed by question."""

    shown: dict[EntityQuestion, set[int]] = field(default_factory=dict)

    def already_shown(self, question: EntityQuestion) -> set[int]:
        return self.shown.get(question, set())

    def mark(self, question: EntityQuestion, relation_ids) -> None:
        self.shown.setdefault(question, set()).update(relation_ids)

    def reset(self) -> None:
        self.shown.clear()


def _check_entity_question(mm: MentalModel, q: EntityQuestion) -> Entity:
    entity = mm.entity(q.entity)
    if entity is None:
        raise UnknownEntity(f"no entity with id {q.entity}")
    if not entity.kind.has_attribute(q.attribute):
        raise UnknownAttribute(
            f"kind {entity.kind.name!r} has no attribute {q.attribute!r}"
        )
    return entity


def explain_entity(
    mm: MentalModel, presented: PresentedSet, q: EntityQuestion
) -> list[RelationInstance] | Exhausted:
    """Return the unpresented relations for `q` at the highest remaining priority.

    The returned tier is recorded in `presented`; asking again serves the next
    tier down, until EXHAUSTED.
    """
    _check_entity_question(mm, q)
    matching = mm.explanandum_index.get((q.entity, q.attribute), [])
    shown = presented.already_shown(q)
    unpresented = [mm.relation(rid) for rid in matching if rid not in shown]
    if not unpresented:
        return EXHAUSTED
    top = max(rel.template.priority for rel in unpresented)
    tier = [rel for rel in unpresented if rel.template.priority == top]
    presented.mark(q, (rel.id for rel in tier))
    return tier


def _match_positions(
    mm: MentalModel, explanan_kind: str, explanandum_kind: str, attribute: str
) -> list[int]:
    for kind_name in (explanan_kind, explanandum_kind):
        if not mm.has_kind(kind_name):
            raise UnknownKind(f"no kind named {kind_name!r}")
    matched = []
    for pos in mm.mof_index.get((explanandum_kind, attribute), []):
        model = mm.models[pos]
        context_kinds = {p.kind for p in model.context}
        result_kinds = {p.kind for p in model.result}
        if (
            explanandum_kind in context_kinds
            and explanandum_kind in result_kinds
            and explanan_kind in context_kinds
        ):
            matched.append(pos)
    return matched


def match_models(
    mm: MentalModel, explanan_kind: str, explanandum_kind: str, attribute: str
) -> list[Model]:
    """Kind-level model matching: the pure predicate behind explain_relation.

    A model matches when its model-of equals (explanandum_kind, attribute),
    the explanandum kind appears in both context and result, and the explanan
    kind appears in the context. The model-of index narrows the candidates;
    the result equals a full scan over all models.
    """
    return [mm.models[pos] for pos in _match_positions(mm, explanan_kind, explanandum_kind, attribute)]


def _entities_fit_model(
    model: Model, explanan: Entity, explanandum: Entity, en_attributes, mof_attribute: str
) -> bool:
    """Narrow a kind-level match to the concrete entity pair.

    Markers aside, a context/result pattern constrains attributes to literal
    values (e.g. a specific layer and position); the model fits the relation
    only if some context pattern accepts the explanan while mentioning the
    attributes that play the explanan's role, some context pattern accepts the
    explanandum, and some result pattern accepts the explanandum while marking
    the model-of attribute MODIFIED.
    """
    en_ok = any(
        p.kind == explanan.kind.name
        and p.literals_hold(explanan)
        and all(p.mentions(a) for a in en_attributes)
        for p in model.context
    )
    ed_ok = any(
        p.kind == explanandum.kind.name and p.literals_hold(explanandum)
        for p in model.context
    )
    result_ok = any(
        p.kind == explanandum.kind.name
        and p.literals_hold(explanandum)
        and p.attribute_conditions.get(mof_attribute) is MODIFIED
        for p in model.result
    )
    return en_ok and ed_ok and result_ok


def explain_relation(mm: MentalModel, q: RelationQuestion) -> list[Model]:
    """Return the models that tell the story behind one relation instance.

    Candidates come from kind-level matching on every attribute of the
    template's explanandum type, then are filtered for compatibility with the
    concrete explanan/explanandum entities. Does not touch presented state:
    models may be re-shown freely. Raises NoMatchingModel when nothing fits
    (an incomplete mental model, reported to the user rather than fatal).
    """
    relation = mm.relation(q.relation)
    if relation is None:
        raise UnknownRelation(f"no relation with id {q.relation}")
    template = relation.template
    positions: set[int] = set()
    for attribute in template.explanandum_type.attributes:
        for pos in _match_positions(
            mm, template.explanan_type.kind, template.explanandum_type.kind, attribute
        ):
            if _entities_fit_model(
                mm.models[pos],
                relation.explanan,
                relation.explanandum,
                template.explanan_type.attributes,
                attribute,
            ):
                positions.add(pos)
    matched = [mm.models[pos] for pos in sorted(positions)]
    if not matched:
        raise NoMatchingModel(
            f"no model matches relation {template.name!r} "
            f"({relation.explanan.name} -> {relation.explanandum.name})"
        )
    return matched
