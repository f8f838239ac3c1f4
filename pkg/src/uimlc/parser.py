"""UIML parser.

Event-driven over expat so every node gets a precise source location
(byte offset, line, column). The doctype line is accepted and ignored;
external entities are never resolved, so nothing is ever fetched.

Accepted grammar (canonical forms; see README for the file format):

    <uiml [name]>
      <head> <meta name content/> ... </head>
      <interface name>
        <structure [id]> <part name class [intrinsic attrs]> ... </structure>
        <style id [source]>
          <property part-name|class-name name>value</property>
        </style>
        <content id> <constant id>text</constant> </content>
        <behavior>
          <rule>
            <condition> <event part-name class [data-name equals]/> </condition>
            <set-property part-name name>value</set-property>
            <call function> <arg>text</arg> </call>
            <fire-event part-name class> <data name>text</data> </fire-event>
            <restructure structure/>
          </rule>
        </behavior>
      </interface>
      <peers>...</peers> <template>...</template>   (opaque, preserved)
    </uiml>
"""

from __future__ import annotations

import xml.parsers.expat
from typing import Optional

from .errors import MalformedXmlError, UimlError
from .model import (
    Behavior, CallFunction, ContentGroup, Diagnostic, EventDataEquals,
    EventOccurs, FireEvent, Interface, MetaEntry, OpaqueElement, Part,
    PropertyBinding, Restructure, Rule, SetProperty, SourceLocation,
    Structure, Style, UimlDocument,
)

# parent element -> child elements it may contain
_ALLOWED_CHILDREN = {
    "uiml": {"head", "interface", "peers", "template"},
    "head": {"meta"},
    "meta": set(),
    "interface": {"structure", "style", "content", "behavior"},
    "structure": {"part"},
    "part": {"part"},
    "style": {"property"},
    "property": set(),
    "content": {"constant"},
    "constant": set(),
    "behavior": {"rule"},
    "rule": {"condition", "set-property", "call", "fire-event", "restructure"},
    "condition": {"event"},
    "event": set(),
    "set-property": set(),
    "call": {"arg"},
    "arg": set(),
    "fire-event": {"data"},
    "data": set(),
    "restructure": set(),
}

# elements whose character data is significant
_TEXT_ELEMENTS = {"property", "constant", "set-property", "arg", "data"}

_OPAQUE_ROOTS = {"peers", "template"}


class _Frame:
    __slots__ = ("tag", "attrs", "location", "text", "node")

    def __init__(self, tag: str, attrs: dict[str, str], location: SourceLocation):
        self.tag = tag
        self.attrs = attrs
        self.location = location
        self.text: list[str] = []
        self.node = None  # partially built model node, where needed


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.stack: list[_Frame] = []
        self.document: Optional[UimlDocument] = None
        self.warnings: list[Diagnostic] = []
        # opaque capture state
        self.opaque_stack: list[OpaqueElement] = []
        self.opaque_root: Optional[OpaqueElement] = None

        self.expat = xml.parsers.expat.ParserCreate()
        self.expat.ordered_attributes = True
        self.expat.StartElementHandler = self._start
        self.expat.EndElementHandler = self._end
        self.expat.CharacterDataHandler = self._chars
        self.expat.StartDoctypeDeclHandler = self._doctype

    # -- expat plumbing ----------------------------------------------------

    def _loc(self) -> SourceLocation:
        return SourceLocation(self.expat.CurrentByteIndex,
                              self.expat.CurrentLineNumber,
                              self.expat.CurrentColumnNumber + 1)

    def _fail(self, code: str, message: str, location: Optional[SourceLocation] = None):
        raise UimlError(code, message, location or self._loc())

    def _doctype(self, doctype_name, system_id, public_id, has_internal_subset):
        pass  # accepted verbatim, never fetched

    def _chars(self, data: str):
        if self.opaque_root is not None:
            self.opaque_stack[-1].text += data
            return
        frame = self.stack[-1] if self.stack else None
        if frame is not None and frame.tag in _TEXT_ELEMENTS:
            frame.text.append(data)
        elif data.strip():
            self._fail("UnexpectedText",
                       f"text content not allowed inside <{frame.tag if frame else 'document'}>")

    def _start(self, tag: str, attrlist: list[str]):
        attrs = {attrlist[i]: attrlist[i + 1] for i in range(0, len(attrlist), 2)}
        loc = self._loc()

        if self.opaque_root is not None:
            node = OpaqueElement(tag, [(attrlist[i], attrlist[i + 1])
                                       for i in range(0, len(attrlist), 2)])
            self.opaque_stack[-1].children.append(node)
            self.opaque_stack.append(node)
            return

        parent = self.stack[-1].tag if self.stack else None
        if parent is None:
            if tag != "uiml":
                self._fail("UnknownElement", f"root element must be <uiml>, got <{tag}>", loc)
        elif tag in _OPAQUE_ROOTS and parent == "uiml":
            pass
        elif tag not in _ALLOWED_CHILDREN:
            self._fail("UnknownElement", f"<{tag}> is not a UIML element", loc)
        elif tag not in _ALLOWED_CHILDREN[parent]:
            self._fail("UnknownElement", f"<{tag}> not allowed inside <{parent}>", loc)

        if tag in _OPAQUE_ROOTS:
            root = OpaqueElement(tag, [(attrlist[i], attrlist[i + 1])
                                       for i in range(0, len(attrlist), 2)])
            self.opaque_root = root
            self.opaque_stack = [root]
            self.warnings.append(Diagnostic(
                "warning", "OpaqueBlock",
                f"<{tag}> is preserved but not interpreted", loc))
            return

        frame = _Frame(tag, attrs, loc)
        builder = getattr(self, "_start_" + tag.replace("-", "_"), None)
        if builder is not None:
            builder(frame)
        self.stack.append(frame)

    def _end(self, tag: str):
        if self.opaque_root is not None:
            node = self.opaque_stack.pop()
            if node.text.strip() == "" and node.children:
                node.text = ""
            if not self.opaque_stack:
                self.document_frame().node.opaques.append(self.opaque_root)
                self.opaque_root = None
            return
        frame = self.stack.pop()
        finisher = getattr(self, "_end_" + tag.replace("-", "_"), None)
        if finisher is not None:
            finisher(frame)

    def document_frame(self) -> _Frame:
        return self.stack[0]

    # -- attribute helpers ---------------------------------------------------

    def _require(self, frame: _Frame, attr: str) -> str:
        value = frame.attrs.get(attr)
        if value is None:
            self._fail("MissingAttribute",
                       f"<{frame.tag}> requires attribute {attr!r}", frame.location)
        return value

    # -- element builders ----------------------------------------------------

    def _start_uiml(self, frame: _Frame):
        frame.node = UimlDocument(doc_name=frame.attrs.get("name") or None)

    def _end_uiml(self, frame: _Frame):
        self.document = frame.node

    def _start_meta(self, frame: _Frame):
        entry = MetaEntry(self._require(frame, "name"), self._require(frame, "content"))
        self.document_frame().node.head.append(entry)

    def _start_interface(self, frame: _Frame):
        frame.node = Interface(name=self._require(frame, "name"), location=frame.location)

    def _end_interface(self, frame: _Frame):
        iface: Interface = frame.node
        for ordinal, structure in enumerate(iface.structures, start=1):
            if structure.id == "":
                structure.id = f"structure-{ordinal}"
        self.document_frame().node.interfaces.append(iface)

    def _start_structure(self, frame: _Frame):
        frame.node = Structure(id=frame.attrs.get("id", ""), location=frame.location)

    def _end_structure(self, frame: _Frame):
        self._iface_frame().node.structures.append(frame.node)

    def _iface_frame(self) -> _Frame:
        for frame in reversed(self.stack):
            if frame.tag == "interface":
                return frame
        raise AssertionError("no enclosing <interface>")

    def _start_part(self, frame: _Frame):
        name = self._require(frame, "name")
        part_class = self._require(frame, "class")
        if not part_class:
            self._fail("MissingAttribute", "part class must be non-empty", frame.location)
        intrinsics = {k: v for k, v in frame.attrs.items() if k not in ("name", "class")}
        frame.node = Part(name, part_class, intrinsics=intrinsics, location=frame.location)

    def _end_part(self, frame: _Frame):
        parent = self.stack[-1]
        if parent.tag == "part":
            parent.node.children.append(frame.node)
        else:  # structure
            parent.node.roots.append(frame.node)

    def _start_style(self, frame: _Frame):
        frame.node = Style(id=self._require(frame, "id"),
                           source=frame.attrs.get("source"),
                           location=frame.location)

    def _end_style(self, frame: _Frame):
        self._iface_frame().node.styles.append(frame.node)

    def _start_property(self, frame: _Frame):
        part = frame.attrs.get("part-name")
        cls = frame.attrs.get("class-name")
        if (part is None) == (cls is None):
            self._fail("MissingAttribute",
                       "<property> requires exactly one of part-name or class-name",
                       frame.location)
        self._require(frame, "name")

    def _end_property(self, frame: _Frame):
        part = frame.attrs.get("part-name")
        cls = frame.attrs.get("class-name")
        binding = PropertyBinding(
            target=cls if part is None else part,
            targets_class=part is None,
            prop_name=frame.attrs["name"],
            value="".join(frame.text),
            location=frame.location,
        )
        style_frame = self.stack[-1]
        style_frame.node.properties.append(binding)

    def _start_content(self, frame: _Frame):
        frame.node = ContentGroup(id=self._require(frame, "id"), location=frame.location)

    def _end_content(self, frame: _Frame):
        self._iface_frame().node.contents.append(frame.node)

    def _start_constant(self, frame: _Frame):
        self._require(frame, "id")

    def _end_constant(self, frame: _Frame):
        group: ContentGroup = self.stack[-1].node
        constant_id = frame.attrs["id"]
        if constant_id in group.constants:
            self._fail("DuplicateConstantId",
                       f"constant {constant_id!r} defined twice in content group {group.id!r}",
                       frame.location)
        group.constants[constant_id] = "".join(frame.text)

    def _start_behavior(self, frame: _Frame):
        frame.node = Behavior()

    def _end_behavior(self, frame: _Frame):
        self._iface_frame().node.behaviors.append(frame.node)

    def _start_rule(self, frame: _Frame):
        frame.node = Rule(condition=None, location=frame.location)  # type: ignore[arg-type]

    def _end_rule(self, frame: _Frame):
        rule: Rule = frame.node
        if rule.condition is None:
            self._fail("MissingCondition", "<rule> requires a <condition>", frame.location)
        if not rule.actions:
            self._fail("EmptyRule", "<rule> requires at least one action", frame.location)
        self.stack[-1].node.rules.append(rule)

    def _start_condition(self, frame: _Frame):
        pass

    def _end_condition(self, frame: _Frame):
        rule_frame = self.stack[-1]
        if frame.node is None:
            self._fail("MissingCondition", "<condition> requires an <event>", frame.location)
        if rule_frame.node.condition is not None:
            self._fail("MissingCondition", "<rule> allows only one <condition>", frame.location)
        rule_frame.node.condition = frame.node

    def _start_event(self, frame: _Frame):
        part = self._require(frame, "part-name")
        event_class = self._require(frame, "class")
        data_name = frame.attrs.get("data-name")
        expected = frame.attrs.get("equals")
        if (data_name is None) != (expected is None):
            self._fail("MissingAttribute",
                       "<event> requires data-name and equals together", frame.location)
        condition_frame = self.stack[-1]
        if data_name is None:
            condition_frame.node = EventOccurs(part, event_class)
        else:
            condition_frame.node = EventDataEquals(part, event_class, data_name, expected)

    def _rule_frame(self) -> _Frame:
        return self.stack[-1]

    def _start_set_property(self, frame: _Frame):
        self._require(frame, "part-name")
        self._require(frame, "name")

    def _end_set_property(self, frame: _Frame):
        self._rule_frame().node.actions.append(SetProperty(
            frame.attrs["part-name"], frame.attrs["name"], "".join(frame.text)))

    def _start_call(self, frame: _Frame):
        frame.node = CallFunction(self._require(frame, "function"))

    def _end_call(self, frame: _Frame):
        self._rule_frame().node.actions.append(frame.node)

    def _end_arg(self, frame: _Frame):
        call_frame = self.stack[-1]
        call_frame.node.args.append("".join(frame.text))

    def _start_fire_event(self, frame: _Frame):
        frame.node = FireEvent(self._require(frame, "part-name"),
                               self._require(frame, "class"))

    def _end_fire_event(self, frame: _Frame):
        self._rule_frame().node.actions.append(frame.node)

    def _end_data(self, frame: _Frame):
        fire_frame = self.stack[-1]
        name = self._require(frame, "name")
        fire_frame.node.data[name] = "".join(frame.text)

    def _start_restructure(self, frame: _Frame):
        self._rule_frame_below().node.actions.append(
            Restructure(self._require(frame, "structure")))

    def _rule_frame_below(self) -> _Frame:
        return self.stack[-1]

    # -- driver ---------------------------------------------------------------

    def parse(self) -> UimlDocument:
        try:
            self.expat.Parse(self.source.encode("utf-8"), True)
        except xml.parsers.expat.ExpatError as exc:
            location = SourceLocation(self.expat.ErrorByteIndex,
                                      self.expat.ErrorLineNumber,
                                      self.expat.ErrorColumnNumber + 1)
            raise MalformedXmlError(
                xml.parsers.expat.errors.messages[exc.code], location) from exc
        doc = self.document
        if doc is None:
            raise MalformedXmlError("no root element", SourceLocation(0, 1, 1))
        doc.warnings = self.warnings
        _check_invariants(doc)
        return doc


def _check_invariants(doc: UimlDocument):
    if not doc.interfaces:
        raise UimlError("EmptyInterface", "document has no <interface>",
                        SourceLocation(0, 1, 1))
    seen_ifaces: set[str] = set()
    for iface in doc.interfaces:
        if iface.name in seen_ifaces:
            raise UimlError("DuplicateInterfaceName",
                            f"interface {iface.name!r} defined twice", iface.location)
        seen_ifaces.add(iface.name)
        if not iface.structures:
            raise UimlError("EmptyInterface",
                            f"interface {iface.name!r} has no <structure>", iface.location)
        _check_unique((s.id for s in iface.structures), "DuplicateStructureId",
                      "structure id", iface.location)
        _check_unique((s.id for s in iface.styles), "DuplicateStyleId",
                      "style id", iface.location)
        _check_unique((c.id for c in iface.contents), "DuplicateContentId",
                      "content group id", iface.location)
        for structure in iface.structures:
            seen_parts: set[str] = set()
            for part in structure.walk():
                if part.name in seen_parts:
                    raise UimlError("DuplicatePartName",
                                    f"part {part.name!r} defined twice in structure "
                                    f"{structure.id!r}", part.location)
                seen_parts.add(part.name)
        _check_style_sources(iface)


def _check_unique(ids, code: str, what: str, location: SourceLocation):
    seen: set[str] = set()
    for value in ids:
        if value in seen:
            raise UimlError(code, f"{what} {value!r} defined twice", location)
        seen.add(value)


def _check_style_sources(iface: Interface):
    by_id = {style.id: style for style in iface.styles}
    for style in iface.styles:
        seen = {style.id}
        current = style
        while current.source is not None:
            parent = by_id.get(current.source)
            if parent is None:
                raise UimlError("DanglingStyleSource",
                                f"style {current.id!r} sources unknown style "
                                f"{current.source!r}", current.location)
            if parent.id in seen:
                raise UimlError("StyleSourceCycle",
                                f"style source chain from {style.id!r} is cyclic",
                                style.location)
            seen.add(parent.id)
            current = parent


def parse_document(source: str) -> UimlDocument:
    """Parse UIML text into a document, enforcing all structural invariants.

    Raises MalformedXmlError for non-XML input and UimlError (with a code
    such as DuplicatePartName or StyleSourceCycle) for grammar violations.
    Warnings (e.g. preserved <peers> blocks) land on document.warnings.
    """
    return _Parser(source).parse()
