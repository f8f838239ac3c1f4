"""Generic-to-platform document transformation.

Transformation rewrites a document written against the generic vocabulary
into one written against a platform vocabulary, driven entirely by a mapping
set: every part expands to its class's expansion tree, the part's children
attach under the expansion's child anchor, and properties/events move to the
expansion part named by the route tables.

Alongside the platform document the transform produces:

* a source map — for every generated part, the generic part it came from
  (total over the output; keyed per interface and structure because part
  names are only unique within a structure), and
* a report — properties dropped by platform filtering or missing routes
  (these are warnings), plus a count of translated event references.

Style bindings without a route are dropped with a warning; behavior actions
without a route are errors (``UnroutableProperty`` / ``UnroutableEvent``),
because dropping them would silently change runtime behavior.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import UimlError
from .model import (Behavior, CallFunction, Diagnostic, EventDataEquals,
                    EventOccurs, FireEvent, Interface, Part, PropertyBinding,
                    Restructure, Rule, SetProperty, SourceLocation, Structure, Style,
                    UimlDocument)
from .style import check_selection, resolve_constant, resolve_style, select_content
from .vocab import MappingEntry, MappingSet, Vocabulary, lookup_expansion

_NOWHERE = SourceLocation(0, 0, 0)


@dataclass
class SourceMap:
    """Maps generated part names back to the generic parts they came from."""
    from_vocab: str
    to_vocab: str
    # interface name -> structure id -> generated part name -> source part name
    interfaces: dict[str, dict[str, dict[str, str]]] = field(default_factory=dict)

    def source_of(self, interface: str, structure_id: str,
                  generated: str) -> Optional[str]:
        return self.interfaces.get(interface, {}).get(structure_id, {}).get(generated)

    def generated_for(self, interface: str, structure_id: str,
                      source: str) -> list[str]:
        table = self.interfaces.get(interface, {}).get(structure_id, {})
        return [gen for gen, src in table.items() if src == source]

    def to_json_text(self) -> str:
        payload = {"from": self.from_vocab, "to": self.to_vocab,
                   "interfaces": self.interfaces}
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json_text(cls, text: str) -> "SourceMap":
        payload = json.loads(text)
        return cls(payload["from"], payload["to"], payload["interfaces"])


@dataclass
class TransformReport:
    # (binding target, property name) pairs that did not survive
    dropped_properties: list[tuple[str, str]] = field(default_factory=list)
    translated_events: int = 0
    warnings: list[Diagnostic] = field(default_factory=list)

    def drop(self, target: str, prop_name: str, reason: str) -> None:
        self.dropped_properties.append((target, prop_name))
        self.warnings.append(Diagnostic(
            "warning", "DroppedProperty",
            f"property {prop_name!r} on {target!r} dropped: {reason}", _NOWHERE))


def expansion_names(part_name: str, entry: MappingEntry) -> list[str]:
    """Deterministic names for an expansion: ``<part>.<class>`` with ``-2``,
    ``-3`` … suffixes when a class occurs more than once in one expansion.

    The names depend only on the source part name and the mapping entry, so a
    part keeps the same generated names in every structure it appears in.
    """
    counts: dict[str, int] = {}
    names = []
    for template in entry.expansion:
        counts[template.part_class] = counts.get(template.part_class, 0) + 1
        ordinal = counts[template.part_class]
        suffix = "" if ordinal == 1 else f"-{ordinal}"
        names.append(f"{part_name}.{template.part_class}{suffix}")
    return names


def identity_source_map(document: UimlDocument, vocab_id: str) -> SourceMap:
    """Source map for a document already in its target vocabulary."""
    source_map = SourceMap(vocab_id, vocab_id)
    for interface in document.interfaces:
        tables = source_map.interfaces.setdefault(interface.name, {})
        for structure in interface.structures:
            tables[structure.id] = {p.name: p.name for p in structure.walk()}
    return source_map


def transform(document: UimlDocument, mapping: MappingSet, target_vocab: Vocabulary,
              style_id: Optional[str] = None, content_id: Optional[str] = None,
              doc_prefix: str = "g:") -> tuple[UimlDocument, SourceMap, TransformReport]:
    """Rewrite ``document`` into ``target_vocab`` under one style and content
    group. Returns the platform document, its source map, and the report.
    """
    check_selection(document, style_id, content_id)
    report = TransformReport()
    source_map = SourceMap(mapping.from_vocab, mapping.to_vocab)
    out = UimlDocument(head=list(document.head), doc_name=document.doc_name,
                       opaques=list(document.opaques))
    for interface in document.interfaces:
        worker = _InterfaceTransform(interface, mapping, target_vocab, doc_prefix,
                                     style_id, content_id, report)
        out.interfaces.append(worker.run())
        source_map.interfaces[interface.name] = worker.tables
    return out, source_map, report


class _InterfaceTransform:
    def __init__(self, interface: Interface, mapping: MappingSet,
                 target_vocab: Vocabulary, doc_prefix: str, style_id: Optional[str],
                 content_id: Optional[str], report: TransformReport):
        self.interface = interface
        self.mapping = mapping
        self.target_vocab = target_vocab
        self.doc_prefix = doc_prefix
        self.target_prefix = target_vocab.platform_prefix
        self.report = report
        self.effective = resolve_style(interface, style_id, content_id,
                                       target_prefix=self.target_prefix,
                                       doc_prefix=doc_prefix)
        self.content = select_content(interface, content_id)
        # structure id -> generated name -> source name
        self.tables: dict[str, dict[str, str]] = {}
        # part name -> class, first structure wins (used to route behaviors)
        self.part_classes: dict[str, str] = {}
        for structure in interface.structures:
            for part in structure.walk():
                self.part_classes.setdefault(part.name, part.part_class)

    def run(self) -> Interface:
        out = Interface(self.interface.name, location=self.interface.location)
        for structure in self.interface.structures:
            out.structures.append(self.transform_structure(structure))
        style = self.transform_style()
        if style is not None:
            out.styles.append(style)
        for behavior in self.interface.behaviors:
            out.behaviors.append(Behavior(
                [self.transform_rule(rule) for rule in behavior.rules]))
        return out

    # -- structures -------------------------------------------------------------

    def transform_structure(self, structure: Structure) -> Structure:
        if len(structure.roots) > 1:
            raise UimlError("MultipleTopContainers",
                            f"structure {structure.id!r} has {len(structure.roots)} "
                            "root parts; expected one", structure.location)
        table: dict[str, str] = {}
        out = Structure(structure.id, location=structure.location)
        for root in structure.roots:
            out.roots.append(self.expand_part(root, table))
        self.tables[structure.id] = table
        return out

    def expand_part(self, part: Part, table: dict[str, str]) -> Part:
        entry = lookup_expansion(self.mapping, part.part_class)
        names = expansion_names(part.name, entry)
        nodes: list[Part] = []
        for template, name in zip(entry.expansion, names):
            if name in table:
                raise UimlError("DuplicatePartName",
                                f"generated part name {name!r} collides; rename the "
                                "source parts", part.location)
            node = Part(name, template.part_class, intrinsics=dict(template.intrinsics),
                        location=part.location)
            table[name] = part.name
            nodes.append(node)
            if template.parent is not None:
                nodes[template.parent].children.append(node)
        if part.children:
            if entry.child_anchor is None:
                raise UimlError("BadAnchor",
                                f"class {part.part_class!r} maps to an expansion with "
                                f"no child anchor but part {part.name!r} has children",
                                part.location)
            anchor = nodes[entry.child_anchor]
            for child in part.children:
                anchor.children.append(self.expand_part(child, table))
        return nodes[0]

    # -- styles -------------------------------------------------------------------

    def transform_style(self) -> Optional[Style]:
        effective = self.effective
        for target, prop_name in effective.dropped:
            self.report.drop(target, prop_name,
                             f"platform prefix is not {self.target_prefix!r}")
        if effective.style_id is None:
            return None
        bindings: list[PropertyBinding] = []
        for class_name, props in effective.class_props.items():
            entry = lookup_expansion(self.mapping, class_name)
            for prop_name, value in props.items():
                route = self.route_property(class_name, entry, prop_name)
                if route is None:
                    continue
                index, target_prop = route
                bindings.append(PropertyBinding(entry.expansion[index].part_class,
                                                True, target_prop, value))
        for part_name, props in effective.part_props.items():
            class_name = self.part_classes.get(part_name)
            if class_name is None:
                # Inert binding (validation reports it); nothing to attach it to.
                for prop_name in props:
                    self.report.drop(part_name, prop_name,
                                     "part does not exist in any structure")
                continue
            entry = lookup_expansion(self.mapping, class_name)
            names = expansion_names(part_name, entry)
            for prop_name, value in props.items():
                route = self.route_property(part_name, entry, prop_name)
                if route is None:
                    continue
                index, target_prop = route
                bindings.append(PropertyBinding(names[index], False,
                                                target_prop, value))
        return Style(effective.style_id, None, bindings)

    def route_property(self, target: str, entry: MappingEntry,
                       prop_name: str) -> Optional[tuple[int, str]]:
        if prop_name.startswith(self.doc_prefix):
            route = entry.property_routes.get(prop_name)
        else:
            route = entry.platform_routes.get(prop_name)
        if route is None:
            self.report.drop(target, prop_name, "no route in the mapping entry")
        return route

    # -- behaviors ------------------------------------------------------------------

    def transform_rule(self, rule: Rule) -> Rule:
        condition = rule.condition
        if isinstance(condition, EventOccurs):
            part, event = self.route_event(condition.part, condition.event_class,
                                           rule.location)
            new_condition = EventOccurs(part, event)
        else:
            part, event = self.route_event(condition.part, condition.event_class,
                                           rule.location)
            new_condition = EventDataEquals(part, event, condition.data_name,
                                            condition.expected)
        actions = []
        for action in rule.actions:
            if isinstance(action, SetProperty):
                actions.append(self.transform_set_property(action, rule.location))
            elif isinstance(action, FireEvent):
                part, event = self.route_event(action.part, action.event_class,
                                               rule.location)
                actions.append(FireEvent(part, event, dict(action.data)))
            elif isinstance(action, CallFunction):
                actions.append(CallFunction(action.function, list(action.args)))
            else:
                actions.append(Restructure(action.structure_id))
        return Rule(new_condition, actions, location=rule.location)

    def expansion_for_part(self, part_name: str,
                           location: SourceLocation) -> tuple[MappingEntry, list[str]]:
        class_name = self.part_classes.get(part_name)
        if class_name is None:
            raise UimlError("DanglingPartRef",
                            f"behavior references unknown part {part_name!r}", location)
        entry = lookup_expansion(self.mapping, class_name)
        return entry, expansion_names(part_name, entry)

    def route_event(self, part_name: str, event_class: str,
                    location: SourceLocation) -> tuple[str, str]:
        entry, names = self.expansion_for_part(part_name, location)
        full = event_class if ":" in event_class else self.doc_prefix + event_class
        route = entry.event_routes.get(full)
        if route is None:
            raise UimlError("UnroutableEvent",
                            f"event {full!r} on part {part_name!r} has no route to "
                            f"{self.mapping.to_vocab!r}", location)
        index, target_event = route
        self.report.translated_events += 1
        return names[index], target_event

    def transform_set_property(self, action: SetProperty,
                               location: SourceLocation) -> SetProperty:
        entry, names = self.expansion_for_part(action.part, location)
        full = action.prop_name
        if ":" not in full:
            full = self.doc_prefix + full
        if full.startswith(self.doc_prefix):
            route = entry.property_routes.get(full)
        elif full.startswith(self.target_prefix):
            route = entry.platform_routes.get(full)
        else:
            route = None
        if route is None:
            raise UimlError("UnroutableProperty",
                            f"property {full!r} on part {action.part!r} has no route "
                            f"to {self.mapping.to_vocab!r}; behavior actions cannot "
                            "be dropped", location)
        index, target_prop = route
        value = resolve_constant(action.value, self.content)
        return SetProperty(names[index], target_prop, value)
