"""Seeded random generators shared by the property tests and the acceptance suite.

Everything takes a `random.Random` so hypothesis-driven tests (seed in, model
out) and the fixed-count acceptance loops draw from the same distribution.
"""

from __future__ import annotations

import random

from mentalmodel.core import (
    AttributePattern,
    FREE,
    MODIFIED,
    MentalModel,
    MentalModelBuilder,
    Model,
    UNSET,
)
from mentalmodel.prolog import Program, Rule

VALUE_POOLS = {
    "real": lambda rng: round(rng.uniform(-5.0, 5.0), 3),
    "integer": lambda rng: rng.randint(0, 9),
    "boolean": lambda rng: rng.random() < 0.5,
    "text": lambda rng: rng.choice(["red", "green", "blue"]),
}


def random_mental_model(rng: random.Random) -> MentalModel:
    """A small arbitrary-but-valid mental model with relations and models."""
    b = MentalModelBuilder()
    kinds = []
    for ki in range(rng.randint(1, 3)):
        schema = {
            f"attr{ai}": rng.choice(list(VALUE_POOLS))
            for ai in range(rng.randint(1, 3))
        }
        kinds.append(b.define_kind(f"Kind{ki}", {}, schema))

    entities = []
    for kind in kinds:
        plain_attrs = [a for a in kind.attribute_schema if a != "name"]
        for ei in range(rng.randint(1, 4)):
            values = {
                attr: VALUE_POOLS[kind.attribute_schema[attr]](rng)
                for attr in plain_attrs
            }
            entities.append(b.instantiate_entity(kind, f"{kind.name}_e{ei}", values))

    templates = []
    for ti in range(rng.randint(1, 4)):
        en_kind = rng.choice(kinds)
        ed_kind = rng.choice(kinds)
        en_attrs = [a for a in en_kind.attribute_schema if a != "name"]
        ed_attrs = [a for a in ed_kind.attribute_schema if a != "name"]
        templates.append(
            b.define_relation_template(
                f"T{ti}",
                (en_kind.name, rng.sample(en_attrs, rng.randint(1, len(en_attrs)))),
                (ed_kind.name, rng.sample(ed_attrs, rng.randint(1, len(ed_attrs)))),
                reason=f"generated reason {ti}",
                priority=rng.randint(0, 3),
            )
        )

    for template in templates:
        en_pool = [e for e in entities if e.kind.name == template.explanan_type.kind]
        ed_pool = [e for e in entities if e.kind.name == template.explanandum_type.kind]
        for _ in range(rng.randint(0, 5)):
            b.add_relation(template, rng.choice(en_pool), rng.choice(ed_pool))

    for mi in range(rng.randint(0, 4)):
        target = rng.choice(kinds)
        target_attrs = [a for a in target.attribute_schema if a != "name"]
        mof_attr = rng.choice(target_attrs)
        context_kinds = {target.name} | {
            k.name for k in kinds if rng.random() < 0.5
        }
        context = []
        for kind_name in sorted(context_kinds):
            kind = next(k for k in kinds if k.name == kind_name)
            attrs = [a for a in kind.attribute_schema if a != "name"]
            conditions = {}
            for attr in rng.sample(attrs, rng.randint(1, len(attrs))):
                roll = rng.random()
                if roll < 0.4:
                    conditions[attr] = VALUE_POOLS[kind.attribute_schema[attr]](rng)
                elif roll < 0.7:
                    conditions[attr] = FREE
                else:
                    conditions[attr] = UNSET
            context.append(AttributePattern(kind_name, conditions))
        result = [AttributePattern(target.name, {mof_attr: MODIFIED})]
        b.add_model(
            Model(
                name=f"M{mi}",
                context=tuple(context),
                result=tuple(result),
                model_of=(target.name, mof_attr),
                story=f"generated story {mi}",
            )
        )
    return b.build()


ATOM_POOL = tuple("abcdefghijkl")  # 12 atoms max


def random_program(rng: random.Random) -> Program:
    """A random ground program within the restriction (<= 12 atoms, <= 10 rules)."""
    atoms = rng.sample(ATOM_POOL, rng.randint(2, len(ATOM_POOL)))
    facts = tuple(dict.fromkeys(rng.choice(atoms) for _ in range(rng.randint(0, 4))))
    rules = []
    for _ in range(rng.randint(1, 10)):
        head = rng.choice(atoms)
        body = tuple(rng.choice(atoms) for _ in range(rng.randint(1, 3)))
        rules.append(Rule(head=head, body=body, label=f"R{len(rules) + 1}"))
    return Program(facts=facts, rules=tuple(rules))


def fixpoint_oracle(program: Program) -> set[str]:
    """Independent least-model computation: keep applying rules until stable."""
    derived = set(program.facts)
    changed = True
    while changed:
        changed = False
        for rule in program.rules:
            if rule.head not in derived and all(b in derived for b in rule.body):
                derived.add(rule.head)
                changed = True
    return derived


# -- independent oracles and the shared search-property checker --------------------

def scan_relations(mm: MentalModel, entity_id: int, attribute: str):
    """Full-scan oracle for the explanandum index / explain_entity."""
    return [
        r
        for r in mm.relations
        if r.explanandum.id == entity_id
        and attribute in r.template.explanandum_type.attributes
    ]


def brute_force_match(mm: MentalModel, explanan_kind, explanandum_kind, attribute):
    """Full-scan oracle for kind-level model matching."""
    out = []
    for model in mm.models:
        context_kinds = {p.kind for p in model.context}
        result_kinds = {p.kind for p in model.result}
        if (
            model.model_of == (explanandum_kind, attribute)
            and explanandum_kind in context_kinds
            and explanandum_kind in result_kinds
            and explanan_kind in context_kinds
        ):
            out.append(model)
    return out


def drain_tiers(mm: MentalModel, question):
    """Ask one question until EXHAUSTED; returns the list of tiers."""
    from mentalmodel.search import EXHAUSTED, PresentedSet, explain_entity

    presented = PresentedSet()
    tiers = []
    while True:
        answer = explain_entity(mm, presented, question)
        if answer is EXHAUSTED:
            return tiers
        tiers.append(answer)


def check_search_properties(mm: MentalModel) -> int:
    """Assert the four search invariants on every question the model admits.

    Returns the number of (entity, attribute) questions exercised.
    """
    from mentalmodel.search import EntityQuestion, match_models

    checked = 0
    for entity in mm.entities:
        for attribute in entity.kind.attribute_schema:
            question = EntityQuestion(entity.id, attribute)
            tiers = drain_tiers(mm, question)
            flat = [r for tier in tiers for r in tier]
            expected = scan_relations(mm, entity.id, attribute)
            # completeness: union over repeated asks is the scan set, once each
            assert sorted(r.id for r in flat) == sorted(r.id for r in expected)
            assert len({r.id for r in flat}) == len(flat)
            # one priority per tier, non-increasing across asks
            for tier in tiers:
                assert len({r.template.priority for r in tier}) == 1
            priorities = [t[0].template.priority for t in tiers]
            assert priorities == sorted(priorities, reverse=True)
            # determinism under replay
            replay = [[r.id for r in tier] for tier in drain_tiers(mm, question)]
            assert replay == [[r.id for r in tier] for tier in tiers]
            checked += 1
    # model-of index equals brute force for every triple in the model
    all_attrs = {
        k.name: list(k.attribute_schema) + list(k.constants) for k in mm.kinds
    }
    for explanan_kind in mm.kinds:
        for explanandum_kind in mm.kinds:
            for attribute in all_attrs[explanandum_kind.name]:
                assert match_models(
                    mm, explanan_kind.name, explanandum_kind.name, attribute
                ) == brute_force_match(
                    mm, explanan_kind.name, explanandum_kind.name, attribute
                )
    return checked
