import random

import pytest

from uimlc import MalformedXmlError, UimlError, parse_document
from uimlc.model import (CallFunction, EventDataEquals, EventOccurs, FireEvent,
                         Restructure, SetProperty)

from .conftest import parse_fixture, read_fixture
from .generators import random_generic_doc, to_xml
from .oracles import walk_parts

EXPECTED_FORM_PARTS = [
    ("RequestWindow", "G:TopContainer"),
    ("EBlock1", "G:Area"),
    ("TitleLabel", "G:Label"),
    ("FirstName", "G:Label"),
    ("FirstNameField", "G:Text"),
    ("LastName", "G:Label"),
    ("LastNameField", "G:Text"),
    ("StreetAddress", "G:Label"),
    ("StreetAddressField", "G:Text"),
    ("City", "G:Label"),
    ("CityField", "G:Text"),
    ("State", "G:Label"),
    ("StateChoice", "G:List"),
    ("Zip", "G:Label"),
    ("ZipField", "G:Text"),
    ("OKBtn", "G:Button"),
    ("CancelBtn", "G:Button"),
    ("ResetBtn", "G:Button"),
]


def test_form_fixture_parts(data_collection):
    iface = data_collection.interfaces[0]
    assert iface.name == "DataCollectionForm"
    structure = iface.structures[0]
    assert structure.id == "structure-1"  # defaulted: fixture declares no id
    parts = [(p.name, p.part_class) for p in structure.walk()]
    assert parts == EXPECTED_FORM_PARTS


def test_form_fixture_head(data_collection):
    metas = {m.name: m.content for m in data_collection.head}
    assert metas["Purpose"] == "Data Collection Form"
    assert "Author" in metas


def test_doctype_line_is_accepted():
    text = read_fixture("data-collection.uiml")
    assert "<!DOCTYPE uiml" in text  # the fixture really carries one
    doc = parse_document(text)
    assert doc.part_count() == 18


def test_locations_point_into_source(data_collection):
    text = read_fixture("data-collection.uiml")
    for part in data_collection.interfaces[0].structures[0].walk():
        loc = part.location
        assert 0 <= loc.offset < len(text)
        assert text[loc.offset:].startswith("<part")
        line_start = text.rfind("\n", 0, loc.offset) + 1
        assert loc.column == loc.offset - line_start + 1
        assert text.count("\n", 0, loc.offset) + 1 == loc.line


def test_duplicate_part_name_in_structure_rejected():
    with pytest.raises(UimlError) as err:
        parse_document("""<?xml version="1.0"?>
<uiml><interface name="I"><structure id="s">
  <part name="Top" class="G:TopContainer">
    <part name="A" class="G:Label"/>
    <part name="A" class="G:Button"/>
  </part>
</structure></interface></uiml>""")
    assert err.value.code == "DuplicatePartName"
    assert "'s'" in err.value.message or '"s"' in err.value.message or " s" in err.value.message


def test_same_part_name_across_structures_allowed():
    doc = parse_fixture("restructure.uiml")
    names = [set(s.part_names()) for s in doc.interfaces[0].structures]
    assert names[0] & names[1], "fixture shares part names across structures"


def test_dangling_style_source():
    with pytest.raises(UimlError) as err:
        parse_document("""<uiml><interface name="I">
<structure><part name="Top" class="G:TopContainer"/></structure>
<style id="a" source="missing"/>
</interface></uiml>""")
    assert err.value.code == "DanglingStyleSource"


def test_style_source_cycle():
    with pytest.raises(UimlError) as err:
        parse_document("""<uiml><interface name="I">
<structure><part name="Top" class="G:TopContainer"/></structure>
<style id="a" source="b"/>
<style id="b" source="a"/>
</interface></uiml>""")
    assert err.value.code == "StyleSourceCycle"


def test_malformed_xml_raises_dedicated_error():
    with pytest.raises(MalformedXmlError):
        parse_document("<uiml><interface name='I'>")
    with pytest.raises(MalformedXmlError):
        parse_document("not xml at all")


def test_unknown_element_rejected():
    with pytest.raises(UimlError) as err:
        parse_document("<uiml><interface name='I'><bogus/></interface></uiml>")
    assert err.value.code == "UnknownElement"


def test_missing_required_attributes():
    with pytest.raises(UimlError) as err:
        parse_document("<uiml><interface name='I'><structure>"
                       "<part class='G:Label'/></structure></interface></uiml>")
    assert err.value.code == "MissingAttribute"


def test_rule_requires_condition_and_action():
    base = ("<uiml><interface name='I'><structure>"
            "<part name='Top' class='G:TopContainer'/></structure>"
            "<behavior>{rule}</behavior></interface></uiml>")
    with pytest.raises(UimlError) as err:
        parse_document(base.format(
            rule="<rule><set-property part-name='Top' name='g:title'>x"
                 "</set-property></rule>"))
    assert err.value.code == "MissingCondition"
    with pytest.raises(UimlError) as err:
        parse_document(base.format(
            rule="<rule><condition><event part-name='Top' class='g:focus'/>"
                 "</condition></rule>"))
    assert err.value.code == "EmptyRule"


def test_peers_block_preserved_as_opaque_with_warning(kitchen_sink):
    assert any(w.code == "OpaqueBlock" for w in kitchen_sink.warnings)
    assert any(node.tag == "peers" for node in kitchen_sink.opaques)


def test_extra_part_attributes_kept_as_intrinsics():
    doc = parse_document("<uiml><interface name='I'><structure>"
                         "<part name='F' class='h:input' type='file'/>"
                         "</structure></interface></uiml>")
    part = doc.interfaces[0].structures[0].roots[0]
    assert part.intrinsics == {"type": "file"}


def test_behavior_shapes():
    doc = parse_fixture("kitchen-sink.uiml")
    rules = doc.interfaces[0].rules()
    assert len(rules) == 3
    first, second, third = rules
    assert isinstance(first.condition, EventOccurs)
    assert isinstance(first.actions[0], SetProperty)
    assert isinstance(first.actions[1], CallFunction)
    assert first.actions[1].args == ["full", "strict"]
    assert isinstance(second.condition, EventDataEquals)
    assert (second.condition.data_name, second.condition.expected) == ("value", "beta")
    assert isinstance(second.actions[0], FireEvent)
    assert isinstance(third.actions[0], Restructure)


def test_duplicate_interface_and_id_checks():
    with pytest.raises(UimlError) as err:
        parse_document("<uiml>"
                       "<interface name='I'><structure>"
                       "<part name='A' class='G:Label'/></structure></interface>"
                       "<interface name='I'><structure>"
                       "<part name='B' class='G:Label'/></structure></interface>"
                       "</uiml>")
    assert err.value.code == "DuplicateInterfaceName"
    with pytest.raises(UimlError) as err:
        parse_document("<uiml><interface name='I'>"
                       "<structure id='s'><part name='A' class='G:Label'/></structure>"
                       "<structure id='s'><part name='B' class='G:Label'/></structure>"
                       "</interface></uiml>")
    assert err.value.code == "DuplicateStructureId"


def test_generated_documents_parse_to_declared_shape():
    rng = random.Random(20240101)
    for _ in range(60):
        data = random_generic_doc(rng, gnarly=True)
        doc = parse_document(to_xml(data))
        iface = doc.interfaces[0]
        assert iface.name == data["interface"]
        assert [s.id for s in iface.structures] == [s["id"] for s in data["structures"]]
        for declared, parsed in zip(data["structures"], iface.structures):
            want = [(p["name"], p["class"]) for p in walk_parts(declared["root"])]
            got = [(p.name, p.part_class) for p in parsed.walk()]
            assert want == got
        assert [s.id for s in iface.styles] == [s["id"] for s in data["styles"]]
        for declared_style, parsed_style in zip(data["styles"], iface.styles):
            want = [(b["target"], b["targets_class"], b["name"], b["value"])
                    for b in declared_style["props"]]
            got = [(b.target, b.targets_class, b.prop_name, b.value)
                   for b in parsed_style.properties]
            assert want == got
        assert len(iface.rules()) == len(data["rules"])
