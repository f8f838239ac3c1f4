"""Canonical UIML serialization.

Deterministic by construction: fixed attribute order per element, fixed
section order inside <interface>, 2-space indentation, newline-terminated.
parse(serialize(parse(x))) is structurally equal to parse(x), and
serialize∘parse is a fixpoint after one normalization.
"""

from __future__ import annotations

from .model import (
    CallFunction, FireEvent, Interface, OpaqueElement, Part, Restructure,
    Rule, SetProperty, Structure, Style, UimlDocument,
)

_ATTR_ESCAPES = {
    "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;",
    "\n": "&#10;", "\r": "&#13;", "\t": "&#9;",
}


def _attr(value: str) -> str:
    return "".join(_ATTR_ESCAPES.get(ch, ch) for ch in value)


def _text(value: str) -> str:
    return (value.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace("\r", "&#13;"))


class _Writer:
    def __init__(self):
        self.lines: list[str] = []

    def line(self, depth: int, text: str):
        self.lines.append("  " * depth + text)

    def tag(self, depth: int, name: str, attrs: list[tuple[str, str]],
            text: str = "", self_close_empty: bool = True):
        rendered = "".join(f' {k}="{_attr(v)}"' for k, v in attrs)
        if text:
            self.line(depth, f"<{name}{rendered}>{_text(text)}</{name}>")
        elif self_close_empty:
            self.line(depth, f"<{name}{rendered}/>")
        else:
            self.line(depth, f"<{name}{rendered}>")

    def result(self) -> str:
        return "\n".join(self.lines) + "\n"


def serialize_document(doc: UimlDocument) -> str:
    w = _Writer()
    w.line(0, '<?xml version="1.0" encoding="UTF-8"?>')
    root_attrs = [("name", doc.doc_name)] if doc.doc_name else []
    w.tag(0, "uiml", root_attrs, self_close_empty=False)
    if doc.head:
        w.tag(1, "head", [], self_close_empty=False)
        for meta in doc.head:
            w.tag(2, "meta", [("name", meta.name), ("content", meta.content)])
        w.line(1, "</head>")
    for iface in doc.interfaces:
        _write_interface(w, iface)
    for opaque in doc.opaques:
        _write_opaque(w, opaque, 1)
    w.line(0, "</uiml>")
    return w.result()


def _write_interface(w: _Writer, iface: Interface):
    w.tag(1, "interface", [("name", iface.name)], self_close_empty=False)
    for structure in iface.structures:
        _write_structure(w, structure)
    for style in iface.styles:
        _write_style(w, style)
    for group in iface.contents:
        if not group.constants:
            w.tag(2, "content", [("id", group.id)])
            continue
        w.tag(2, "content", [("id", group.id)], self_close_empty=False)
        for constant_id, value in group.constants.items():
            w.tag(3, "constant", [("id", constant_id)], text=value)
        w.line(2, "</content>")
    for behavior in iface.behaviors:
        w.tag(2, "behavior", [], self_close_empty=False)
        for rule in behavior.rules:
            _write_rule(w, rule)
        w.line(2, "</behavior>")
    w.line(1, "</interface>")


def _write_structure(w: _Writer, structure: Structure):
    w.tag(2, "structure", [("id", structure.id)], self_close_empty=False)
    for root in structure.roots:
        _write_part(w, root, 3)
    w.line(2, "</structure>")


def _write_part(w: _Writer, part: Part, depth: int):
    attrs = [("name", part.name), ("class", part.part_class)]
    attrs += sorted(part.intrinsics.items())
    if not part.children:
        w.tag(depth, "part", attrs)
        return
    w.tag(depth, "part", attrs, self_close_empty=False)
    for child in part.children:
        _write_part(w, child, depth + 1)
    w.line(depth, "</part>")


def _write_style(w: _Writer, style: Style):
    attrs = [("id", style.id)]
    if style.source is not None:
        attrs.append(("source", style.source))
    if not style.properties:
        w.tag(2, "style", attrs)
        return
    w.tag(2, "style", attrs, self_close_empty=False)
    for binding in style.properties:
        target_attr = "class-name" if binding.targets_class else "part-name"
        w.tag(3, "property", [(target_attr, binding.target), ("name", binding.prop_name)],
              text=binding.value)
    w.line(2, "</style>")


def _write_rule(w: _Writer, rule: Rule):
    w.tag(3, "rule", [], self_close_empty=False)
    cond = rule.condition
    w.tag(4, "condition", [], self_close_empty=False)
    event_attrs = [("part-name", cond.part), ("class", cond.event_class)]
    if hasattr(cond, "data_name"):
        event_attrs += [("data-name", cond.data_name), ("equals", cond.expected)]
    w.tag(5, "event", event_attrs)
    w.line(4, "</condition>")
    for action in rule.actions:
        if isinstance(action, SetProperty):
            w.tag(4, "set-property",
                  [("part-name", action.part), ("name", action.prop_name)],
                  text=action.value)
        elif isinstance(action, CallFunction):
            if not action.args:
                w.tag(4, "call", [("function", action.function)])
            else:
                w.tag(4, "call", [("function", action.function)], self_close_empty=False)
                for arg in action.args:
                    w.tag(5, "arg", [], text=arg, self_close_empty=True)
                w.line(4, "</call>")
        elif isinstance(action, FireEvent):
            attrs = [("part-name", action.part), ("class", action.event_class)]
            if not action.data:
                w.tag(4, "fire-event", attrs)
            else:
                w.tag(4, "fire-event", attrs, self_close_empty=False)
                for name, value in action.data.items():
                    w.tag(5, "data", [("name", name)], text=value)
                w.line(4, "</fire-event>")
        elif isinstance(action, Restructure):
            w.tag(4, "restructure", [("structure", action.structure_id)])
    w.line(3, "</rule>")


def _write_opaque(w: _Writer, node: OpaqueElement, depth: int):
    rendered = "".join(f' {k}="{_attr(v)}"' for k, v in node.attributes)
    if not node.text and not node.children:
        w.line(depth, f"<{node.tag}{rendered}/>")
    elif node.text and node.children:
        # mixed content stays on one line so no indentation whitespace is
        # introduced into the preserved text
        w.line(depth, f"<{node.tag}{rendered}>{_text(node.text)}"
               + "".join(_opaque_inline(c) for c in node.children)
               + f"</{node.tag}>")
    elif node.text:
        w.line(depth, f"<{node.tag}{rendered}>{_text(node.text)}</{node.tag}>")
    else:
        w.line(depth, f"<{node.tag}{rendered}>")
        for child in node.children:
            _write_opaque(w, child, depth + 1)
        w.line(depth, f"</{node.tag}>")


def _opaque_inline(node: OpaqueElement) -> str:
    rendered = "".join(f' {k}="{_attr(v)}"' for k, v in node.attributes)
    if not node.text and not node.children:
        return f"<{node.tag}{rendered}/>"
    inner = _text(node.text) + "".join(_opaque_inline(c) for c in node.children)
    return f"<{node.tag}{rendered}>{inner}</{node.tag}>"
