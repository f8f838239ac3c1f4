"""Deterministic rendering of platform documents.

Two renderers ship with the toolkit. Both are pure functions of the document,
the selected style/content, and the source map, so rendering the same inputs
twice yields byte-identical output.

``render_html`` turns a document written in the html vocabulary into an HTML
page. Every element carries ``data-uiml-part`` (its part name) and, when a
source map is supplied, ``data-uiml-src`` (the generic part it derives from)
— these annotations are what lets a front end highlight source parts from
rendered output. Attributes are emitted in sorted order, children indented
two spaces. No doctype is emitted; the output is a fragment of the document
tree, not a polished page.

``render_mockdesk`` turns a document written in the mock desktop vocabulary
into a JSON widget tree: ``{"class", "name", "src", "props", "children"}``
per widget, property keys stripped of their platform prefix, keys sorted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import UimlError
from .model import Interface, Part, Structure, UimlDocument
from .style import EffectiveStyle, check_selection, resolve_style
from .vocab import builtin_vocabulary
from .xform import SourceMap, identity_source_map

# Elements that never take content or an end tag.
_VOID_ELEMENTS = {"base", "link", "meta", "img", "input"}

# Platform properties with a natural attribute representation.
_ATTRIBUTE_PROPS = {
    "h:href": "href",
    "h:src": "src",
    "h:content": "content",
    "h:checked": "checked",
    "h:enabled": "data-enabled",
    "h:editable": "data-editable",
    "h:items": "data-items",
}


@dataclass
class RenderOutput:
    text: str
    target: str
    # generated part name -> source part name, for every rendered part
    annotations: dict[str, str] = field(default_factory=dict)


def _escape_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(value: str) -> str:
    return (_escape_text(value).replace('"', "&quot;")
            .replace("\n", "&#10;").replace("\t", "&#9;"))


def _pick_structure(document: UimlDocument,
                    structure_id: Optional[str]) -> tuple[Interface, Structure]:
    if not document.interfaces:
        raise UimlError("EmptyInterface", "document has no interface to render")
    interface = document.interfaces[0]
    if structure_id is None:
        structure = interface.structures[0]
    else:
        structure = interface.structure_by_id(structure_id)
        if structure is None:
            raise UimlError("DanglingStructureRef",
                            f"no structure with id {structure_id!r}")
    return interface, structure


def render_html(document: UimlDocument, source_map: Optional[SourceMap] = None,
                style_id: Optional[str] = None, content_id: Optional[str] = None,
                structure_id: Optional[str] = None) -> RenderOutput:
    vocabulary = builtin_vocabulary("html")
    check_selection(document, style_id, content_id)
    interface, structure = _pick_structure(document, structure_id)
    if source_map is None:
        source_map = identity_source_map(document, "html")
    effective = resolve_style(interface, style_id, content_id,
                              target_prefix="h:", doc_prefix="h:")
    output = RenderOutput("", "html")
    lines: list[str] = []
    for root in structure.roots:
        _render_element(root, 0, lines, effective, source_map, interface.name,
                        structure.id, vocabulary, output.annotations)
    output.text = "\n".join(lines) + "\n" if lines else ""
    return output


def _render_element(part: Part, depth: int, lines: list[str],
                    effective: EffectiveStyle, source_map: SourceMap,
                    interface_name: str, structure_id: str, vocabulary,
                    annotations: dict[str, str]) -> None:
    if part.part_class not in vocabulary.classes:
        raise UimlError("UnknownHtmlClass",
                        f"part {part.name!r} has class {part.part_class!r}, which is "
                        "not an html vocabulary class", part.location)
    tag = part.part_class
    props = effective.props_for_part(part)
    source = source_map.source_of(interface_name, structure_id, part.name)
    annotations[part.name] = source if source is not None else part.name

    attrs = dict(part.intrinsics)
    attrs["data-uiml-part"] = part.name
    attrs["data-uiml-src"] = annotations[part.name]
    text_content = ""
    leftovers: dict[str, str] = {}
    for name, value in props.items():
        if name == "h:text":
            if tag == "input":
                attrs["value"] = value
            elif tag == "img":
                attrs["alt"] = value
            else:
                text_content = value
        elif name == "h:background":
            attrs["style"] = f"background-color:{value}"
        elif name == "h:link-color" and tag == "style":
            text_content = f"a {{ color: {value}; }}"
        elif name in _ATTRIBUTE_PROPS:
            attrs[_ATTRIBUTE_PROPS[name]] = value
        else:
            leftovers[name] = value
    if leftovers:
        attrs["data-uiml-props"] = json.dumps(leftovers, sort_keys=True)

    indent = "  " * depth
    rendered_attrs = "".join(f' {name}="{_escape_attr(value)}"'
                             for name, value in sorted(attrs.items()))
    if tag in _VOID_ELEMENTS:
        lines.append(f"{indent}<{tag}{rendered_attrs}>")
        return
    if not part.children:
        lines.append(f"{indent}<{tag}{rendered_attrs}>{_escape_text(text_content)}</{tag}>")
        return
    lines.append(f"{indent}<{tag}{rendered_attrs}>")
    if text_content:
        lines.append(f"{indent}  {_escape_text(text_content)}")
    for child in part.children:
        _render_element(child, depth + 1, lines, effective, source_map,
                        interface_name, structure_id, vocabulary, annotations)
    lines.append(f"{indent}</{tag}>")


def render_mockdesk(document: UimlDocument, source_map: Optional[SourceMap] = None,
                    style_id: Optional[str] = None, content_id: Optional[str] = None,
                    structure_id: Optional[str] = None) -> RenderOutput:
    vocabulary = builtin_vocabulary("mockdesk")
    check_selection(document, style_id, content_id)
    interface, structure = _pick_structure(document, structure_id)
    if source_map is None:
        source_map = identity_source_map(document, "mockdesk")
    effective = resolve_style(interface, style_id, content_id,
                              target_prefix="j:", doc_prefix="j:")
    output = RenderOutput("", "mockdesk")
    roots = [_render_widget(root, effective, source_map, interface.name,
                            structure.id, vocabulary, output.annotations)
             for root in structure.roots]
    payload = {"target": "mockdesk", "structure": structure.id, "roots": roots}
    output.text = json.dumps(payload, indent=2) + "\n"
    return output


def _render_widget(part: Part, effective: EffectiveStyle, source_map: SourceMap,
                   interface_name: str, structure_id: str, vocabulary,
                   annotations: dict[str, str]) -> dict:
    if part.part_class not in vocabulary.classes:
        raise UimlError("UnknownMockdeskClass",
                        f"part {part.name!r} has class {part.part_class!r}, which is "
                        "not a mock desktop vocabulary class", part.location)
    source = source_map.source_of(interface_name, structure_id, part.name)
    annotations[part.name] = source if source is not None else part.name
    props = dict(part.intrinsics)
    for name, value in effective.props_for_part(part).items():
        props[name.split(":", 1)[1] if ":" in name else name] = value
    return {
        "class": part.part_class,
        "name": part.name,
        "src": annotations[part.name],
        "props": dict(sorted(props.items())),
        "children": [_render_widget(child, effective, source_map, interface_name,
                                    structure_id, vocabulary, annotations)
                     for child in part.children],
    }
