"""Dialogue sessions: the interaction pattern over one mental model.

A session starts by presenting the AI system's output entity, then alternates
user questions and engine answers. Two question types are understood, plus a
reset command:

    why <entity-name>.<attribute>     -> a tier of entity-entity relations
    how rel:<n>                       -> the models behind a presented relation
    reset                             -> clears the presented-relation record

Question targets are scoped: only the root output plus entities and relations
that already appeared in the transcript are addressable, so exploration grows
from the output inward. Building a session with ``scope_enabled=False`` lifts
the restriction (debugging aid).

Relation labels ``rel:1, rel:2, ...`` are transcript-local, assigned in order
of first presentation, and stay stable for the lifetime of the session.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .core import Entity, MentalModel, Model, RelationInstance
from .document import encode_pattern
from .errors import (
    NoMatchingModel,
    ParseError,
    TargetNotYetPresented,
    UnknownEntity,
)
from .search import (
    EXHAUSTED,
    EntityQuestion,
    Exhausted,
    PresentedSet,
    RelationQuestion,
    explain_entity,
    explain_relation,
)


@dataclass(frozen=True)
class ResetCommand:
    pass


Question = Union[EntityQuestion, RelationQuestion, ResetCommand]

_session_counter = itertools.count(1)


@dataclass
class TurnRecord:
    """One transcript entry: a question and its answer.

    `answer` holds the typed result (relation tier, model list, EXHAUSTED or
    an acknowledgement string); `labels` parallels a relation tier with the
    ``rel:<n>`` numbers under which the tier was presented.
    """

    n: int
    question: Optional[Question]
    answer_kind: str
    answer: object
    labels: tuple[int, ...] = ()
    timestamp: float = field(default_factory=time.time)


@dataclass
class Session:
    """Dialogue state: transcript, presented set, scope, relation labels."""

    id: str
    mental_model: MentalModel
    root_output: int
    scope_enabled: bool = True
    presented: PresentedSet = field(default_factory=PresentedSet)
    transcript: list[TurnRecord] = field(default_factory=list)
    # entity ids addressable by why-questions
    scope: set[int] = field(default_factory=set)
    # relation ids in order of first presentation; label n = position + 1
    labels: list[int] = field(default_factory=list)

    def label_of(self, relation_id: int) -> int:
        return self.labels.index(relation_id) + 1

    def relation_for_label(self, n: int) -> Optional[int]:
        if 1 <= n <= len(self.labels):
            return self.labels[n - 1]
        return None


def start_session(
    mm: MentalModel, root_output: int | Entity, scope_enabled: bool = True
) -> Session:
    """Open a session and seed the transcript with the output presentation."""
    root_id = root_output.id if isinstance(root_output, Entity) else root_output
    root = mm.entity(root_id)
    if root is None:
        raise UnknownEntity(f"no entity with id {root_id}")
    session = Session(
        id=f"s{next(_session_counter)}",
        mental_model=mm,
        root_output=root_id,
        scope_enabled=scope_enabled,
    )
    session.scope.add(root_id)
    session.transcript.append(
        TurnRecord(n=1, question=None, answer_kind="presentation", answer=root)
    )
    return session


_WHY_RE = re.compile(r"^why\s+(?P<target>.+?)\s*\.\s*(?P<attribute>[A-Za-z_]\w*)\s*$")
_HOW_RE = re.compile(r"^how\s+rel\s*:\s*(?P<label>\d+)\s*$")


def parse_question(session: Session, text: str) -> Question:
    """Parse a question string and resolve its target against the session.

    Grammar: ``why <entity-name>.<attribute>`` / ``how rel:<n>`` / ``reset``.
    Entity names are resolved through the mental model's name attribute;
    relation references through the session's transcript labels.
    """
    stripped = text.strip()
    verb = stripped.split(None, 1)[0] if stripped else ""
    if verb == "reset":
        if stripped != "reset":
            raise ParseError("'reset' takes no arguments", position=len("reset"))
        return ResetCommand()
    if verb == "why":
        match = _WHY_RE.match(stripped)
        if match is None:
            raise ParseError(
                "expected 'why <entity-name>.<attribute>'", position=len("why")
            )
        entity = _resolve_entity(session, match.group("target").strip())
        return EntityQuestion(entity=entity.id, attribute=match.group("attribute"))
    if verb == "how":
        match = _HOW_RE.match(stripped)
        if match is None:
            raise ParseError("expected 'how rel:<n>'", position=len("how"))
        return _resolve_label(session, int(match.group("label")))
    raise ParseError(f"unknown question verb {verb!r}", position=max(text.find(verb), 0))


def _resolve_entity(session: Session, name: str) -> Entity:
    candidates = session.mental_model.entities_named(name)
    if not candidates:
        raise UnknownEntity(f"no entity named {name!r}")
    if session.scope_enabled:
        in_scope = [e for e in candidates if e.id in session.scope]
        if not in_scope:
            raise TargetNotYetPresented(
                f"entity {name!r} has not been presented in this dialogue yet"
            )
        candidates = in_scope
    if len(candidates) > 1:
        raise ParseError(f"entity name {name!r} is ambiguous", position=0)
    return candidates[0]


def _resolve_label(session: Session, label: int) -> RelationQuestion:
    relation_id = session.relation_for_label(label)
    if relation_id is None:
        raise TargetNotYetPresented(f"rel:{label} has not been presented yet")
    return RelationQuestion(relation=relation_id)


def ask(session: Session, text: str) -> TurnRecord:
    """Parse a question, answer it, and append the turn to the transcript."""
    return _record(session, parse_question(session, text))


def ask_structured(
    session: Session,
    question_type: str,
    target: int | str | None = None,
    attribute: Optional[str] = None,
) -> TurnRecord:
    """Structured-question twin of :func:`ask`, used by the HTTP service.

    why: `target` is an entity name (or id), `attribute` required.
    how: `target` is a ``rel:<n>`` string or the bare label number.
    """
    if question_type == "reset":
        return _record(session, ResetCommand())
    if question_type == "why":
        if attribute is None:
            raise ParseError("why-questions need an attribute", position=0)
        if isinstance(target, int):
            entity = session.mental_model.entity(target)
            if entity is None:
                raise UnknownEntity(f"no entity with id {target}")
            if session.scope_enabled and entity.id not in session.scope:
                raise TargetNotYetPresented(
                    f"entity {entity.name!r} has not been presented in this dialogue yet"
                )
        elif isinstance(target, str):
            entity = _resolve_entity(session, target)
        else:
            raise ParseError("why-questions need an entity target", position=0)
        return _record(session, EntityQuestion(entity=entity.id, attribute=attribute))
    if question_type == "how":
        if isinstance(target, str):
            match = re.fullmatch(r"\s*rel\s*:\s*(\d+)\s*", target)
            if match is None:
                raise ParseError(f"bad relation reference {target!r}", position=0)
            label = int(match.group(1))
        elif isinstance(target, int):
            label = target
        else:
            raise ParseError("how-questions need a rel:<n> target", position=0)
        return _record(session, _resolve_label(session, label))
    raise ParseError(f"unknown question type {question_type!r}", position=0)


def _record(session: Session, question: Question) -> TurnRecord:
    mm = session.mental_model
    n = len(session.transcript) + 1
    if isinstance(question, ResetCommand):
        session.presented.reset()
        turn = TurnRecord(
            n=n, question=question, answer_kind="reset_ack", answer="presented-set cleared"
        )
    elif isinstance(question, EntityQuestion):
        answer = explain_entity(mm, session.presented, question)
        if isinstance(answer, Exhausted):
            turn = TurnRecord(n=n, question=question, answer_kind="exhausted", answer=answer)
        else:
            labels = []
            for rel in answer:
                if rel.id not in session.labels:
                    session.labels.append(rel.id)
                labels.append(session.label_of(rel.id))
                session.scope.add(rel.explanan.id)
                session.scope.add(rel.explanandum.id)
            turn = TurnRecord(
                n=n,
                question=question,
                answer_kind="relation_tier",
                answer=answer,
                labels=tuple(labels),
            )
    elif isinstance(question, RelationQuestion):
        try:
            models = explain_relation(mm, question)
            turn = TurnRecord(n=n, question=question, answer_kind="model_list", answer=models)
        except NoMatchingModel as exc:
            turn = TurnRecord(
                n=n, question=question, answer_kind="no_matching_model", answer=str(exc)
            )
    else:
        raise ParseError(f"unsupported question {question!r}", position=0)
    session.transcript.append(turn)
    return turn


def history(session: Session) -> tuple[TurnRecord, ...]:
    """Read-only view of the transcript, in turn order."""
    return tuple(session.transcript)


# -- transcript export ---------------------------------------------------------

def entity_payload(entity: Entity) -> dict:
    return {
        "id": entity.id,
        "kind": entity.kind.name,
        "name": entity.name,
        "attributes": dict(entity.attributes),
    }


def relation_payload(session: Session, relation: RelationInstance) -> dict:
    return {
        "label": f"rel:{session.label_of(relation.id)}",
        "relation": relation.id,
        "template": relation.template.name,
        "priority": relation.template.priority,
        "reason": relation.template.reason,
        "explanan": entity_payload(relation.explanan),
        "explanandum": entity_payload(relation.explanandum),
    }


def model_payload(model: Model) -> dict:
    return {
        "name": model.name,
        "story": model.story,
        "model_of": {"kind": model.model_of[0], "attribute": model.model_of[1]},
        "context": [encode_pattern(p) for p in model.context],
        "result": [encode_pattern(p) for p in model.result],
    }


def question_payload(session: Session, question: Optional[Question]) -> Optional[dict]:
    if question is None:
        return None
    if isinstance(question, EntityQuestion):
        entity = session.mental_model.entity(question.entity)
        return {
            "type": "why",
            "entity": question.entity,
            "entity_name": entity.name if entity else None,
            "attribute": question.attribute,
        }
    if isinstance(question, RelationQuestion):
        return {
            "type": "how",
            "relation": question.relation,
            "label": f"rel:{session.label_of(question.relation)}",
        }
    return {"type": "reset"}


def turn_payload(session: Session, turn: TurnRecord) -> dict:
    """Encode one turn as the wire/export object {n, question, answer_kind, payload}.

    Timestamps are deliberately left out so transcripts compare stably.
    """
    if turn.answer_kind == "presentation":
        payload: object = {"entity": entity_payload(turn.answer)}
    elif turn.answer_kind == "relation_tier":
        payload = [relation_payload(session, rel) for rel in turn.answer]
    elif turn.answer_kind == "model_list":
        payload = [model_payload(m) for m in turn.answer]
    elif turn.answer_kind == "exhausted":
        payload = {"message": "all matching relations have already been presented"}
    else:  # reset_ack, no_matching_model
        payload = {"message": str(turn.answer)}
    return {
        "n": turn.n,
        "question": question_payload(session, turn.question),
        "answer_kind": turn.answer_kind,
        "payload": payload,
    }


def export_transcript(session: Session) -> list[dict]:
    return [turn_payload(session, turn) for turn in session.transcript]
