import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from mentalmodel.core import (
    AttributePattern,
    FREE,
    MODIFIED,
    MentalModelBuilder,
    Model,
    UNSET,
)
from mentalmodel.errors import (
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

from generators import random_mental_model, scan_relations


def neuron_builder():
    b = MentalModelBuilder()
    b.define_kind(
        "Neuron", {}, {"activation": "real", "layer": "integer", "position": "integer"}
    )
    return b


class TestDefineKind:
    def test_neuron_kind(self):
        b = neuron_builder()
        kind = b.build().kinds[0]
        assert kind.name == "Neuron"
        assert kind.attribute_schema == {
            "activation": "real",
            "layer": "integer",
            "position": "integer",
            "name": "text",
        }

    def test_rule_kind(self):
        b = MentalModelBuilder()
        kind = b.define_kind("Rule", {}, {"used": "boolean", "head": "text", "body": "text"})
        assert kind.attribute_schema["used"] == "boolean"
        assert kind.has_attribute("name")

    def test_duplicate_kind(self):
        b = MentalModelBuilder()
        b.define_kind("Neuron", {}, {})
        with pytest.raises(DuplicateKind):
            b.define_kind("Neuron", {}, {})

    def test_constants_and_schema_disjoint(self):
        b = MentalModelBuilder()
        with pytest.raises(OverlappingConstantAndAttribute):
            b.define_kind("K", {"size": 3}, {"size": "integer"})

    def test_name_cannot_be_a_constant(self):
        b = MentalModelBuilder()
        with pytest.raises(OverlappingConstantAndAttribute):
            b.define_kind("K", {"name": "fixed"}, {})

    def test_constants_kept_apart_from_schema(self):
        b = MentalModelBuilder()
        kind = b.define_kind("K", {"dimension": 2}, {"value": "real"})
        assert kind.constants == {"dimension": 2}
        assert "dimension" not in kind.attribute_schema

    def test_bad_type_tag(self):
        b = MentalModelBuilder()
        with pytest.raises(TypeMismatch):
            b.define_kind("K", {}, {"x": "complex"})


class TestInstantiateEntity:
    def test_zero_valued_neuron(self):
        b = neuron_builder()
        entity = b.instantiate_entity("Neuron", "n_1_4", {"activation": 0.0, "layer": 1, "position": 4})
        assert entity.name == "n_1_4"
        assert entity.attributes["activation"] == 0.0
        assert entity.kind.name == "Neuron"

    def test_predicate_entity(self):
        b = MentalModelBuilder()
        kind = b.define_kind(
            "Predicate", {}, {"fact": "boolean", "truth": "boolean", "text": "text"}
        )
        entity = b.instantiate_entity(kind, "b", {"fact": True, "truth": True, "text": "b"})
        assert entity.attributes == {"fact": True, "truth": True, "text": "b", "name": "b"}

    def test_missing_attribute(self):
        b = neuron_builder()
        with pytest.raises(MissingAttribute):
            b.instantiate_entity("Neuron", "bad", {"activation": 0.1})

    def test_type_mismatch(self):
        b = neuron_builder()
        with pytest.raises(TypeMismatch):
            b.instantiate_entity("Neuron", "bad", {"activation": "high", "layer": 1, "position": 0})

    def test_unknown_attribute(self):
        b = neuron_builder()
        with pytest.raises(UnknownAttribute):
            b.instantiate_entity(
                "Neuron", "bad", {"activation": 0.0, "layer": 1, "position": 0, "bias": 0.5}
            )

    def test_name_not_accepted_in_values(self):
        b = neuron_builder()
        with pytest.raises(UnknownAttribute):
            b.instantiate_entity(
                "Neuron", "n", {"activation": 0.0, "layer": 1, "position": 0, "name": "other"}
            )

    def test_real_accepts_int_and_normalizes(self):
        b = neuron_builder()
        entity = b.instantiate_entity("Neuron", "n", {"activation": 1, "layer": 0, "position": 0})
        assert entity.attributes["activation"] == 1.0
        assert isinstance(entity.attributes["activation"], float)

    def test_bool_is_not_an_integer(self):
        b = neuron_builder()
        with pytest.raises(TypeMismatch):
            b.instantiate_entity("Neuron", "n", {"activation": 0.0, "layer": True, "position": 0})

    def test_ids_are_sequential(self):
        b = neuron_builder()
        ids = [
            b.instantiate_entity("Neuron", f"n{i}", {"activation": 0.0, "layer": 0, "position": i}).id
            for i in range(3)
        ]
        assert ids == [0, 1, 2]


def relation_builder():
    b = MentalModelBuilder()
    b.define_kind("Neuron", {}, {"activation": "real", "layer": "integer", "position": "integer"})
    b.define_kind("Parameter", {}, {"value": "real"})
    b.define_relation_template(
        "NeuronToNeuronActivation",
        ("Neuron", ("activation",)),
        ("Neuron", ("activation",)),
        "This lower layer neuron's activation participated in the computation "
        "of the questioned activation",
    )
    return b


class TestAddRelation:
    def test_relation_stored_with_reason(self):
        b = relation_builder()
        low = b.instantiate_entity("Neuron", "n_0_3", {"activation": 0.2, "layer": 0, "position": 3})
        high = b.instantiate_entity("Neuron", "n_1_4", {"activation": 0.8, "layer": 1, "position": 4})
        rel = b.add_relation("NeuronToNeuronActivation", low, high)
        assert rel.template.reason == (
            "This lower layer neuron's activation participated in the computation "
            "of the questioned activation"
        )
        mm = b.build()
        assert mm.explanandum_index[(high.id, "activation")] == [rel.id]

    def test_self_relation_is_valid(self):
        b = MentalModelBuilder()
        b.define_kind("Predicate", {}, {"fact": "boolean", "truth": "boolean", "text": "text"})
        b.define_relation_template(
            "FactToFact", ("Predicate", ("fact",)), ("Predicate", ("truth",)),
            "This predicate is True because it is a fact",
        )
        e = b.instantiate_entity("Predicate", "b", {"fact": True, "truth": True, "text": "b"})
        rel = b.add_relation("FactToFact", e, e)
        assert rel.explanan is rel.explanandum

    def test_kind_mismatch(self):
        b = relation_builder()
        param = b.instantiate_entity("Parameter", "w", {"value": 0.1})
        high = b.instantiate_entity("Neuron", "n_1_4", {"activation": 0.8, "layer": 1, "position": 4})
        with pytest.raises(KindMismatch):
            b.add_relation("NeuronToNeuronActivation", param, high)

    def test_duplicate_template_name(self):
        b = relation_builder()
        with pytest.raises(DuplicateTemplate):
            b.define_relation_template(
                "NeuronToNeuronActivation", ("Neuron", ("activation",)),
                ("Neuron", ("activation",)), "again",
            )

    def test_template_attribute_must_exist(self):
        b = relation_builder()
        with pytest.raises(UnknownAttribute):
            b.define_relation_template(
                "Bad", ("Neuron", ("voltage",)), ("Neuron", ("activation",)), "r"
            )


def used_rule_model():
    return Model(
        name="UsedRule",
        context=(
            AttributePattern("Predicate", {"truth": UNSET}),
            AttributePattern("Rule", {"used": True, "head": FREE}),
        ),
        result=(AttributePattern("Predicate", {"truth": MODIFIED}),),
        model_of=("Predicate", "truth"),
        story="A used rule makes the predicate in its head True",
    )


def prolog_kinds_builder():
    b = MentalModelBuilder()
    b.define_kind("Predicate", {}, {"fact": "boolean", "truth": "boolean", "text": "text"})
    b.define_kind("Rule", {}, {"used": "boolean", "head": "text", "body": "text"})
    return b


class TestAddModel:
    def test_used_rule_model_stored(self):
        b = prolog_kinds_builder()
        model_id = b.add_model(used_rule_model())
        mm = b.build()
        assert mm.mof_index[("Predicate", "truth")] == [model_id]

    def test_model_of_must_be_modified_in_result(self):
        b = prolog_kinds_builder()
        bad = dataclasses.replace(used_rule_model(), model_of=("Rule", "used"))
        with pytest.raises(InconsistentModelOf):
            b.add_model(bad)

    def test_result_kinds_must_appear_in_context(self):
        b = prolog_kinds_builder()
        bad = Model(
            name="bad",
            context=(AttributePattern("Rule", {"used": True}),),
            result=(AttributePattern("Predicate", {"truth": MODIFIED}),),
            model_of=("Predicate", "truth"),
            story="s",
        )
        with pytest.raises(InconsistentModelOf):
            b.add_model(bad)

    def test_unknown_kind(self):
        b = MentalModelBuilder()
        with pytest.raises(UnknownKind):
            b.add_model(used_rule_model())

    def test_unknown_pattern_attribute(self):
        b = prolog_kinds_builder()
        bad = Model(
            name="bad",
            context=(AttributePattern("Predicate", {"arity": 2}),),
            result=(AttributePattern("Predicate", {"truth": MODIFIED}),),
            model_of=("Predicate", "truth"),
            story="s",
        )
        with pytest.raises(UnknownAttribute):
            b.add_model(bad)

    def test_mof_index_gains_entry_per_model(self):
        b = neuron_builder()
        before = len(b.build().mof_index.get(("Neuron", "activation"), []))
        b.add_model(
            Model(
                name="Neuron activation (1,4)",
                context=(AttributePattern("Neuron", {"layer": 1, "position": 4, "activation": UNSET}),),
                result=(AttributePattern("Neuron", {"layer": 1, "position": 4, "activation": MODIFIED}),),
                model_of=("Neuron", "activation"),
                story="x_4^1 = g(sum_i w_i,4^0 * x_i^0 + b_4^0)",
            )
        )
        after = b.build().mof_index[("Neuron", "activation")]
        assert len(after) == before + 1


class TestMentalModelInvariants:
    def test_frozen_after_build(self, p1_mm):
        with pytest.raises(dataclasses.FrozenInstanceError):
            p1_mm.kinds = ()

    def test_entity_attributes_cover_schema(self, p1_mm, toy_mm):
        for mm in (p1_mm, toy_mm):
            for entity in mm.entities:
                assert entity.attributes.keys() == entity.kind.attribute_schema.keys()

    def test_relation_kinds_agree_with_template(self, p1_mm, toy_mm):
        for mm in (p1_mm, toy_mm):
            for rel in mm.relations:
                assert rel.explanan.kind.name == rel.template.explanan_type.kind
                assert rel.explanandum.kind.name == rel.template.explanandum_type.kind

    def test_index_matches_full_scan(self, p1_mm, toy_mm):
        for mm in (p1_mm, toy_mm):
            for entity in mm.entities:
                for attribute in entity.kind.attribute_schema:
                    indexed = mm.explanandum_index.get((entity.id, attribute), [])
                    assert indexed == [r.id for r in scan_relations(mm, entity.id, attribute)]

    def test_rebuild_indices_identical(self, p1_mm, toy_mm):
        for mm in (p1_mm, toy_mm):
            assert mm.rebuild_indices() == (mm.explanandum_index, mm.mof_index)


@given(st.integers(0, 2**32 - 1))
def test_random_models_satisfy_structural_invariants(seed):
    mm = random_mental_model(random.Random(seed))
    for entity in mm.entities:
        assert entity.attributes.keys() == entity.kind.attribute_schema.keys()
        for attr, value in entity.attributes.items():
            tag = entity.kind.attribute_schema[attr]
            if tag == "boolean":
                assert isinstance(value, bool)
            elif tag == "integer":
                assert isinstance(value, int) and not isinstance(value, bool)
            elif tag == "real":
                assert isinstance(value, float)
            else:
                assert isinstance(value, str)
    assert mm.rebuild_indices() == (mm.explanandum_index, mm.mof_index)
    for rel in mm.relations:
        assert rel.explanan.kind.name == rel.template.explanan_type.kind
        assert rel.explanandum.kind.name == rel.template.explanandum_type.kind
