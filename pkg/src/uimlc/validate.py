"""Document validation against a vocabulary.

Validation never mutates the document and never raises for content problems;
it returns a list of diagnostics (the parser has already rejected documents
that are structurally unusable). Severity ``error`` means later pipeline
stages (transform, render, simulate) are not guaranteed to succeed.

Checks performed per interface:

* every part class exists in the vocabulary (``UnknownClass``)
* property names use a known platform prefix (``UnknownPrefix``) and are
  declared on the class they bind to (``UnknownProperty``); unprefixed names
  are shorthand for the vocabulary's own prefix
* event classes in conditions and fire-event actions are declared on the
  target part's class (``UnknownEvent``)
* part references resolve: dangling references from styles are warnings
  (the binding is simply inert), dangling references from behaviors are
  errors (``DanglingPartRef``)
* restructure actions name an existing structure (``DanglingStructureRef``)
* whole-value ``%name%`` property values resolve in at least one content
  group (``UnresolvedConstant``)
"""

from __future__ import annotations

from typing import Optional

from .model import (Diagnostic, EventDataEquals, EventOccurs, FireEvent, Interface,
                    PropertyBinding, Restructure, Rule, SetProperty, SourceLocation,
                    UimlDocument)
from .vocab import Vocabulary, known_platform_prefixes

_NOWHERE = SourceLocation(0, 0, 0)


def normalize_name(name: str, vocabulary: Vocabulary) -> str:
    """Expand an unprefixed property/event name to the vocabulary's prefix."""
    if ":" in name:
        return name
    return vocabulary.platform_prefix + name


def constant_reference(value: str) -> Optional[str]:
    """Return the constant id if the whole value is a ``%name%`` reference."""
    if len(value) >= 3 and value.startswith("%") and value.endswith("%"):
        inner = value[1:-1]
        if inner and "%" not in inner:
            return inner
    return None


def validate(document: UimlDocument, vocabulary: Vocabulary,
             prefixes: Optional[set[str]] = None) -> list[Diagnostic]:
    checker = _Checker(vocabulary, prefixes or known_platform_prefixes())
    for interface in document.interfaces:
        checker.check_interface(interface)
    checker.diagnostics.sort(key=lambda d: (d.location.offset, d.code))
    return checker.diagnostics


class _Checker:
    def __init__(self, vocabulary: Vocabulary, prefixes: set[str]):
        self.vocabulary = vocabulary
        self.prefixes = prefixes
        self.diagnostics: list[Diagnostic] = []

    def report(self, severity: str, code: str, message: str,
               location: Optional[SourceLocation] = None) -> None:
        self.diagnostics.append(Diagnostic(severity, code, message,
                                           location or _NOWHERE))

    # -- interface ------------------------------------------------------------

    def check_interface(self, interface: Interface) -> None:
        part_classes: dict[str, str] = {}
        for structure in interface.structures:
            for part in structure.walk():
                part_classes[part.name] = part.part_class
                if part.part_class not in self.vocabulary.classes:
                    self.report("error", "UnknownClass",
                                f"part {part.name!r} has unknown class "
                                f"{part.part_class!r}", part.location)
        constants = {cid for group in interface.contents for cid in group.constants}
        structure_ids = {s.id for s in interface.structures}

        for style in interface.styles:
            for binding in style.properties:
                self.check_binding(binding, part_classes, constants)
        for behavior in interface.behaviors:
            for rule in behavior.rules:
                self.check_rule(rule, part_classes, structure_ids, constants)

    # -- styles ---------------------------------------------------------------

    def check_binding(self, binding: PropertyBinding, part_classes: dict[str, str],
                      constants: set[str]) -> None:
        class_name: Optional[str] = None
        if binding.targets_class:
            class_name = binding.target
            if class_name not in self.vocabulary.classes:
                self.report("error", "UnknownClass",
                            f"style binds property on unknown class {class_name!r}",
                            binding.location)
                class_name = None
        else:
            class_name = part_classes.get(binding.target)
            if class_name is None:
                self.report("warning", "DanglingPartRef",
                            f"style binds property on unknown part "
                            f"{binding.target!r}", binding.location)
        self.check_property_name(binding.prop_name, class_name, binding.location)
        ref = constant_reference(binding.value)
        if ref is not None and ref not in constants:
            self.report("error", "UnresolvedConstant",
                        f"no content group defines constant {ref!r}", binding.location)

    def check_property_name(self, name: str, class_name: Optional[str],
                            location: SourceLocation) -> None:
        full = normalize_name(name, self.vocabulary)
        prefix = full.split(":", 1)[0] + ":"
        if prefix not in self.prefixes:
            self.report("error", "UnknownPrefix",
                        f"property {name!r} uses unknown platform prefix {prefix!r}",
                        location)
            return
        if class_name is None:
            return
        spec = self.vocabulary.classes.get(class_name)
        if spec is not None and full not in spec.properties:
            self.report("error", "UnknownProperty",
                        f"class {class_name!r} declares no property {full!r}", location)

    # -- behaviors ------------------------------------------------------------

    def check_rule(self, rule: Rule, part_classes: dict[str, str],
                   structure_ids: set[str], constants: set[str]) -> None:
        condition = rule.condition
        if isinstance(condition, (EventOccurs, EventDataEquals)):
            self.check_event_ref(condition.part, condition.event_class,
                                 part_classes, rule.location)
        for action in rule.actions:
            if isinstance(action, SetProperty):
                class_name = self.resolve_behavior_part(action.part, part_classes,
                                                        rule.location)
                self.check_property_name(action.prop_name, class_name, rule.location)
                ref = constant_reference(action.value)
                if ref is not None and ref not in constants:
                    self.report("error", "UnresolvedConstant",
                                f"no content group defines constant {ref!r}",
                                rule.location)
            elif isinstance(action, FireEvent):
                self.check_event_ref(action.part, action.event_class,
                                     part_classes, rule.location)
            elif isinstance(action, Restructure):
                if action.structure_id not in structure_ids:
                    self.report("error", "DanglingStructureRef",
                                f"no structure with id {action.structure_id!r}",
                                rule.location)

    def resolve_behavior_part(self, part_name: str, part_classes: dict[str, str],
                              location: SourceLocation) -> Optional[str]:
        class_name = part_classes.get(part_name)
        if class_name is None:
            self.report("error", "DanglingPartRef",
                        f"behavior references unknown part {part_name!r}", location)
        return class_name

    def check_event_ref(self, part_name: str, event_class: str,
                        part_classes: dict[str, str], location: SourceLocation) -> None:
        class_name = self.resolve_behavior_part(part_name, part_classes, location)
        if class_name is None:
            return
        spec = self.vocabulary.classes.get(class_name)
        if spec is None:
            return  # unknown class already reported
        full = normalize_name(event_class, self.vocabulary)
        if full not in spec.events:
            self.report("error", "UnknownEvent",
                        f"class {class_name!r} declares no event {full!r}", location)
