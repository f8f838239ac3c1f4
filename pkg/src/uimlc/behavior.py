"""Rule interpretation in a simulated runtime.

The runtime binds one interface of a document, holds the mutable property
state of every part in the active structure, and interprets behavior rules
when events are dispatched into it. Nothing is actually displayed and no
external functions are executed; every observable consequence is returned
as an effect in execution order:

* ``PropertySet`` — a part property changed (old and new value recorded)
* ``ExternalCall`` — a call action was reached (recorded, never executed)
* ``EventFired``  — a rule fired a synthetic event; the effects of the
  cascade it triggers follow immediately after (depth-first)
* ``Restructured`` — the active structure switched; part state re-seeds
  from the resolved style

Cascades are bounded: a chain of ``depth_limit`` dispatches completes, one
more raises ``EventCascadeOverflow``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import UimlError
from .model import (CallFunction, EventDataEquals, EventOccurs, FireEvent, Interface,
                    Restructure, SetProperty, Structure, UimlDocument)
from .style import EffectiveStyle, resolve_constant, resolve_style, select_content

DEFAULT_DEPTH_LIMIT = 32


@dataclass
class EventInstance:
    part: str
    event_class: str
    data: dict[str, str] = field(default_factory=dict)


@dataclass
class PropertySet:
    part: str
    prop_name: str
    old: Optional[str]
    new: str


@dataclass
class ExternalCall:
    function: str
    args: list[str] = field(default_factory=list)


@dataclass
class EventFired:
    part: str
    event_class: str
    data: dict[str, str] = field(default_factory=dict)


@dataclass
class Restructured:
    structure_id: str


Effect = Union[PropertySet, ExternalCall, EventFired, Restructured]


@dataclass
class RuntimeState:
    interface: Interface
    effective: EffectiveStyle
    content: object  # selected ContentGroup or None; used to resolve %name% values
    doc_prefix: str
    depth_limit: int
    active_structure_id: str = ""
    widgets: dict[str, dict[str, str]] = field(default_factory=dict)
    part_classes: dict[str, str] = field(default_factory=dict)

    def activate(self, structure: Structure) -> None:
        self.active_structure_id = structure.id
        self.widgets = {}
        self.part_classes = {}
        for part in structure.walk():
            self.widgets[part.name] = self.effective.props_for_part(part)
            self.part_classes[part.name] = part.part_class

    def property_value(self, part: str, prop_name: str) -> Optional[str]:
        return self.widgets.get(part, {}).get(self.normalize(prop_name))

    def normalize(self, name: str) -> str:
        return name if ":" in name else self.doc_prefix + name


def instantiate_runtime(document: UimlDocument, style_id: Optional[str] = None,
                        content_id: Optional[str] = None, doc_prefix: str = "g:",
                        depth_limit: int = DEFAULT_DEPTH_LIMIT) -> RuntimeState:
    """Bind the document's first interface and activate its first structure.

    Part properties seed from the resolved style (platform filtering keeps
    only the document's own prefix).
    """
    if not document.interfaces:
        raise UimlError("EmptyInterface", "document has no interface to run")
    interface = document.interfaces[0]
    effective = resolve_style(interface, style_id, content_id,
                              target_prefix=doc_prefix, doc_prefix=doc_prefix)
    state = RuntimeState(interface, effective, select_content(interface, content_id),
                         doc_prefix, depth_limit)
    state.activate(interface.structures[0])
    return state


def dispatch(state: RuntimeState, event: EventInstance) -> list[Effect]:
    """Interpret all rules matching ``event`` and return the effects in order."""
    return _dispatch(state, event, depth=1)


def _dispatch(state: RuntimeState, event: EventInstance, depth: int) -> list[Effect]:
    if depth > state.depth_limit:
        raise UimlError("EventCascadeOverflow",
                        f"event cascade exceeded depth limit {state.depth_limit}")
    if event.part not in state.widgets:
        raise UimlError("UnknownPart",
                        f"part {event.part!r} is not in the active structure "
                        f"{state.active_structure_id!r}")
    effects: list[Effect] = []
    event_class = state.normalize(event.event_class)
    for rule in state.interface.rules():
        if not _matches(state, rule.condition, event, event_class):
            continue
        for action in rule.actions:
            if isinstance(action, SetProperty):
                effects.append(_set_property(state, action))
            elif isinstance(action, CallFunction):
                effects.append(ExternalCall(action.function, list(action.args)))
            elif isinstance(action, FireEvent):
                fired = EventInstance(action.part, state.normalize(action.event_class),
                                      dict(action.data))
                effects.append(EventFired(fired.part, fired.event_class, fired.data))
                effects.extend(_dispatch(state, fired, depth + 1))
            elif isinstance(action, Restructure):
                effects.append(_restructure(state, action.structure_id))
    return effects


def _matches(state: RuntimeState, condition, event: EventInstance,
             event_class: str) -> bool:
    if condition.part != event.part:
        return False
    if state.normalize(condition.event_class) != event_class:
        return False
    if isinstance(condition, EventDataEquals):
        return event.data.get(condition.data_name) == condition.expected
    return isinstance(condition, EventOccurs)


def _set_property(state: RuntimeState, action: SetProperty) -> PropertySet:
    if action.part not in state.widgets:
        raise UimlError("UnknownPart",
                        f"part {action.part!r} is not in the active structure "
                        f"{state.active_structure_id!r}")
    prop_name = state.normalize(action.prop_name)
    value = resolve_constant(action.value, state.content)
    old = state.widgets[action.part].get(prop_name)
    state.widgets[action.part][prop_name] = value
    return PropertySet(action.part, prop_name, old, value)


def _restructure(state: RuntimeState, structure_id: str) -> Restructured:
    structure = state.interface.structure_by_id(structure_id)
    if structure is None:
        raise UimlError("DanglingStructureRef",
                        f"no structure with id {structure_id!r}")
    state.activate(structure)
    return Restructured(structure_id)
