import random

import pytest
from hypothesis import given, settings, strategies as st

from mentalmodel import nn
from mentalmodel.core import AttributePattern, FREE, MODIFIED, MentalModelBuilder, Model, UNSET
from mentalmodel.document import deserialize, from_document, serialize, to_document
from mentalmodel.errors import MalformedDocument, SchemaVersionMismatch

from generators import random_mental_model


def test_empty_model_round_trips():
    mm = MentalModelBuilder().build()
    assert deserialize(serialize(mm)) == mm


def test_p1_round_trip_preserves_counts(p1_mm):
    # counts enumerated by hand from the derivation of `a`:
    # predicates a, b, c + rule R1; one head edge, two body edges, two fact loops
    restored = deserialize(serialize(p1_mm))
    assert len(restored.entities) == 4
    assert len(restored.relations) == 5
    assert len(restored.models) == 3
    assert restored == p1_mm


def test_toy_nn_round_trip(toy_mm):
    assert deserialize(serialize(toy_mm)) == toy_mm


def test_round_trip_rebuilds_identical_indices(p1_mm, toy_mm):
    for mm in (p1_mm, toy_mm):
        restored = deserialize(serialize(mm))
        assert restored.explanandum_index == mm.explanandum_index
        assert restored.mof_index == mm.mof_index


def test_reserialization_is_byte_stable(p1_mm, toy_mm):
    for mm in (p1_mm, toy_mm):
        text = serialize(mm)
        assert serialize(deserialize(text)) == text


def test_truncated_document_is_malformed(p1_mm):
    text = serialize(p1_mm)
    with pytest.raises(MalformedDocument):
        deserialize(text[: len(text) // 2])


def test_non_object_root_is_malformed():
    with pytest.raises(MalformedDocument):
        deserialize("[1, 2, 3]")


def test_version_mismatch():
    doc = to_document(MentalModelBuilder().build())
    doc["version"] = 2
    with pytest.raises(SchemaVersionMismatch):
        from_document(doc)


def test_missing_version():
    with pytest.raises(MalformedDocument):
        from_document({"kinds": []})


def test_dangling_entity_kind_reference(p1_mm):
    doc = to_document(p1_mm)
    doc["entities"][0]["kind"] = "Ghost"
    with pytest.raises(MalformedDocument):
        from_document(doc)


def test_dangling_relation_entity_reference(p1_mm):
    doc = to_document(p1_mm)
    doc["relations"][0]["explanan"] = 999
    with pytest.raises(MalformedDocument):
        from_document(doc)


def test_entity_attributes_must_match_schema(p1_mm):
    doc = to_document(p1_mm)
    del doc["entities"][0]["attributes"]["truth"]
    with pytest.raises(MalformedDocument):
        from_document(doc)


def test_bad_type_tag_is_malformed(p1_mm):
    doc = to_document(p1_mm)
    doc["kinds"][0]["attribute_schema"]["truth"] = "complex"
    with pytest.raises(MalformedDocument):
        from_document(doc)


def test_mistyped_attribute_value_is_malformed(p1_mm):
    doc = to_document(p1_mm)
    doc["entities"][0]["attributes"]["truth"] = "yes"
    with pytest.raises(MalformedDocument):
        from_document(doc)


def marker_heavy_model():
    b = MentalModelBuilder()
    b.define_kind("Widget", {"flavor": "plain"}, {"state": "text", "count": "integer"})
    b.instantiate_entity("Widget", "w0", {"state": "unset", "count": 3})
    b.add_model(
        Model(
            name="toggler",
            context=(AttributePattern("Widget", {"state": UNSET, "count": FREE}),),
            result=(AttributePattern("Widget", {"state": MODIFIED}),),
            model_of=("Widget", "state"),
            story="state flips",
        )
    )
    b.add_theory_label("switching")
    return b.build()


def test_markers_do_not_collide_with_literal_text():
    # the entity holds the literal string "unset" while the pattern holds the
    # UNSET marker; both must survive the round trip unconfused
    mm = marker_heavy_model()
    restored = deserialize(serialize(mm))
    assert restored.entities[0].attributes["state"] == "unset"
    conditions = restored.models[0].context[0].attribute_conditions
    assert conditions["state"] is UNSET
    assert conditions["count"] is FREE
    assert restored.models[0].result[0].attribute_conditions["state"] is MODIFIED
    assert restored == mm


def test_theories_and_constants_round_trip():
    mm = marker_heavy_model()
    restored = deserialize(serialize(mm))
    assert restored.theory_labels == ("switching",)
    assert restored.kinds[0].constants == {"flavor": "plain"}


def test_document_field_names():
    doc = to_document(marker_heavy_model())
    assert list(doc) == [
        "version", "kinds", "entities", "relation_templates", "relations", "models", "theories",
    ]
    assert doc["version"] == 1
    assert {"name", "constants", "attribute_schema"} == set(doc["kinds"][0])
    assert {"id", "kind", "attributes"} == set(doc["entities"][0])


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_models_round_trip(seed):
    mm = random_mental_model(random.Random(seed))
    text = serialize(mm)
    restored = deserialize(text)
    assert restored == mm
    assert serialize(restored) == text
    assert restored.rebuild_indices() == (restored.explanandum_index, restored.mof_index)


def test_seeded_network_document_round_trip():
    net = nn.generate_network([5, 4, 3], seed=11)
    mm = nn.build_mental_model(net, nn.forward(net, [0.1, 0.2, 0.3, 0.4, 0.5]))
    text = serialize(mm)
    restored = deserialize(text)
    assert restored == mm
    assert serialize(restored) == text
    # attribute values survive JSON exactly (floats included)
    for original, copy in zip(mm.entities, restored.entities):
        assert original.attributes == copy.attributes
