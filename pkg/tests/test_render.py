import json

import pytest

from uimlc import UimlError, parse_document, render_html, render_mockdesk, transform
from uimlc.cli import render_document
from uimlc.vocab import builtin_mapping, builtin_vocabulary

from .conftest import fixture_paths, parse_fixture

HTML_MAP = builtin_mapping("generic-to-html")
HTML = builtin_vocabulary("html")
DESK_MAP = builtin_mapping("generic-to-mockdesk")
DESK = builtin_vocabulary("mockdesk")

SHARED_HTML_GOLDEN = """<html data-uiml-part="Top.html" data-uiml-src="Top">
  <head data-uiml-part="Top.head" data-uiml-src="Top">
    <title data-uiml-part="Top.title" data-uiml-src="Top">My User Interface</title>
    <base data-uiml-part="Top.base" data-uiml-src="Top">
    <style data-uiml-part="Top.style" data-uiml-src="Top">a { color: red; }</style>
    <link data-uiml-part="Top.link" data-uiml-src="Top">
    <meta data-uiml-part="Top.meta" data-uiml-src="Top">
  </head>
  <body data-uiml-part="Top.body" data-uiml-src="Top"></body>
</html>
"""


def test_html_rendering_applies_platform_specific_style(three_styles):
    out, _ = render_document(three_styles, "html", "onlyHTML", None, None)
    assert out.text == SHARED_HTML_GOLDEN
    assert out.target == "html"
    assert "j:resizable" not in out.text and "resizable" not in out.text


def test_mockdesk_rendering_applies_other_platform_style(three_styles):
    out, _ = render_document(three_styles, "mockdesk", "onlyJava", None, None)
    payload = json.loads(out.text)
    frame = payload["roots"][0]
    assert frame["class"] == "Frame"
    assert frame["props"]["resizable"] == "red"
    assert frame["props"]["title"] == "My User Interface"
    assert "link-color" not in out.text


def test_html_style_from_other_platform_is_silently_absent(three_styles):
    out, _ = render_document(three_styles, "html", "onlyJava", None, None)
    assert "resizable" not in out.text
    assert "a { color" not in out.text
    assert "My User Interface" in out.text


@pytest.mark.parametrize("target", ["html", "mockdesk"])
@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.name)
def test_rendering_is_deterministic(path, target):
    doc = parse_document(path.read_text(encoding="utf-8"))
    styles = [s.id for s in doc.interfaces[0].styles]
    style_id = styles[0] if len(styles) > 1 else None
    first, _ = render_document(doc, target, style_id, None, None)
    second, _ = render_document(doc, target, style_id, None, None)
    assert first.text == second.text
    assert first.annotations == second.annotations


def test_annotations_match_embedded_attributes(data_collection):
    out, _ = render_document(data_collection, "html", None, None, None)
    for line in out.text.splitlines():
        if "data-uiml-part=" not in line:
            continue
        part = line.split('data-uiml-part="', 1)[1].split('"', 1)[0]
        src = line.split('data-uiml-src="', 1)[1].split('"', 1)[0]
        assert out.annotations[part] == src
    assert set(out.annotations.values()) == \
        set(data_collection.interfaces[0].structures[0].part_names())


def test_void_elements_and_value_attributes(data_collection):
    out, _ = render_document(data_collection, "html", None, None, None)
    assert "</base>" not in out.text
    assert "</meta>" not in out.text
    assert "</input>" not in out.text
    assert '<input data-uiml-part="FirstNameField.input"' in out.text
    assert "</body>" in out.text and "</html>" in out.text


def test_escaping_in_text_and_attributes():
    doc = parse_document("""<uiml><interface name="I">
<structure id="s"><part name="Top" class="G:TopContainer">
  <part name="L" class="G:Label"/>
  <part name="F" class="G:Text"/>
</part></structure>
<style id="st">
  <property part-name="L" name="g:text">x &lt;y&gt; &amp; z</property>
  <property part-name="F" name="g:text">quote " &amp; &lt;</property>
</style>
</interface></uiml>""")
    html_out, _ = render_document(doc, "html", None, None, None)
    assert "x &lt;y&gt; &amp; z" in html_out.text
    assert 'value="quote &quot; &amp; &lt;"' in html_out.text
    desk_out, _ = render_document(doc, "mockdesk", None, None, None)
    props = json.loads(desk_out.text)["roots"][0]["children"]
    assert props[0]["props"]["text"] == "x <y> & z"
    assert props[1]["props"]["text"] == 'quote " & <'


def test_mockdesk_payload_shape(kitchen_sink):
    out, _ = render_document(kitchen_sink, "mockdesk", "fancy", None, None)
    payload = json.loads(out.text)
    assert payload["target"] == "mockdesk"
    assert payload["structure"] == "full"

    def check(node):
        assert set(node) == {"class", "name", "src", "props", "children"}
        assert node["class"] in DESK.classes
        assert list(node["props"]) == sorted(node["props"])
        for key in node["props"]:
            assert ":" not in key  # prefixes are stripped for the platform tree
        for child in node["children"]:
            check(child)

    for root in payload["roots"]:
        check(root)
    assert out.text.endswith("\n")


def test_structure_selection(kitchen_sink):
    full, _ = render_document(kitchen_sink, "html", "fancy", None, "full")
    lite, _ = render_document(kitchen_sink, "html", "fancy", None, "lite")
    default, _ = render_document(kitchen_sink, "html", "fancy", None, None)
    assert default.text == full.text  # first structure is the default
    assert "Choice.select" in full.text and "Choice.select" not in lite.text


def test_render_html_rejects_non_platform_document(three_styles):
    with pytest.raises(UimlError) as err:
        render_html(three_styles, style_id="onlyHTML")
    assert err.value.code == "UnknownHtmlClass"


def test_render_mockdesk_rejects_html_document(three_styles):
    html_doc, srcmap, _ = transform(three_styles, HTML_MAP, HTML, style_id="onlyHTML")
    with pytest.raises(UimlError) as err:
        render_mockdesk(html_doc, srcmap)
    assert err.value.code == "UnknownMockdeskClass"


def test_direct_platform_document_renders_with_identity_annotations():
    doc = parse_document("""<uiml><interface name="I">
<structure id="s"><part name="root" class="div">
  <part name="label" class="span"/>
</part></structure>
<style id="st"><property part-name="label" name="h:text">direct</property></style>
</interface></uiml>""")
    out, srcmap = render_document(doc, "html", None, None, None)
    assert 'data-uiml-part="label" data-uiml-src="label"' in out.text
    assert out.annotations == {"root": "root", "label": "label"}
    assert srcmap.interfaces["I"]["s"]["label"] == "label"


def test_properties_without_attribute_mapping_are_not_lost():
    doc = parse_document("""<uiml><interface name="I">
<structure id="s"><part name="D" class="div"/></structure>
<style id="st">
  <property part-name="D" name="h:link-color">red</property>
</style>
</interface></uiml>""")
    # h:link-color only has a special meaning on <style>; elsewhere the value
    # still shows up, bundled in a data attribute
    out, _ = render_document(doc, "html", None, None, None)
    assert "data-uiml-props=" in out.text and "h:link-color" in out.text


def test_link_color_rule_only_on_style_part(three_styles):
    out, _ = render_document(three_styles, "html", "onlyHTML", None, None)
    style_lines = [l for l in out.text.splitlines() if "<style" in l]
    assert style_lines == ['    <style data-uiml-part="Top.style" '
                           'data-uiml-src="Top">a { color: red; }</style>']
