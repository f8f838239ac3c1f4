"""JSON projections of the document model and runtime effects.

These are the wire shapes used by the HTTP API (and by anything else that
wants a machine-readable view of a parsed document). They are lossy in one
direction only: opaque preserved blocks are summarized, not expanded.
"""

from __future__ import annotations

from .behavior import Effect, EventFired, ExternalCall, PropertySet, Restructured
from .model import (CallFunction, Diagnostic, EventDataEquals, EventOccurs, FireEvent,
                    Part, Restructure, SetProperty, SourceLocation, UimlDocument)


def location_to_json(location: SourceLocation) -> dict:
    return {"offset": location.offset, "line": location.line,
            "column": location.column}


def diagnostic_to_json(diagnostic: Diagnostic) -> dict:
    return {"severity": diagnostic.severity, "code": diagnostic.code,
            "message": diagnostic.message,
            "location": location_to_json(diagnostic.location)}


def part_to_json(part: Part) -> dict:
    return {
        "name": part.name,
        "class": part.part_class,
        "intrinsics": dict(part.intrinsics),
        "location": location_to_json(part.location),
        "children": [part_to_json(child) for child in part.children],
    }


def condition_to_json(condition) -> dict:
    if isinstance(condition, EventOccurs):
        return {"kind": "event-occurs", "part": condition.part,
                "event": condition.event_class}
    assert isinstance(condition, EventDataEquals)
    return {"kind": "event-data-equals", "part": condition.part,
            "event": condition.event_class, "data_name": condition.data_name,
            "expected": condition.expected}


def action_to_json(action) -> dict:
    if isinstance(action, SetProperty):
        return {"kind": "set-property", "part": action.part,
                "prop": action.prop_name, "value": action.value}
    if isinstance(action, CallFunction):
        return {"kind": "call", "function": action.function,
                "args": list(action.args)}
    if isinstance(action, FireEvent):
        return {"kind": "fire-event", "part": action.part,
                "event": action.event_class, "data": dict(action.data)}
    assert isinstance(action, Restructure)
    return {"kind": "restructure", "structure": action.structure_id}


def document_to_json(document: UimlDocument) -> dict:
    return {
        "name": document.doc_name,
        "head": [{"name": m.name, "content": m.content} for m in document.head],
        "interfaces": [
            {
                "name": iface.name,
                "structures": [
                    {"id": s.id, "roots": [part_to_json(r) for r in s.roots]}
                    for s in iface.structures
                ],
                "styles": [
                    {
                        "id": style.id,
                        "source": style.source,
                        "properties": [
                            {"target": b.target, "targets_class": b.targets_class,
                             "name": b.prop_name, "value": b.value,
                             "location": location_to_json(b.location)}
                            for b in style.properties
                        ],
                    }
                    for style in iface.styles
                ],
                "contents": [
                    {"id": group.id, "constants": dict(group.constants)}
                    for group in iface.contents
                ],
                "behaviors": [
                    {
                        "rules": [
                            {"condition": condition_to_json(rule.condition),
                             "actions": [action_to_json(a) for a in rule.actions],
                             "location": location_to_json(rule.location)}
                            for rule in behavior.rules
                        ]
                    }
                    for behavior in iface.behaviors
                ],
            }
            for iface in document.interfaces
        ],
        "opaques": [{"tag": o.tag} for o in document.opaques],
        "warnings": [diagnostic_to_json(w) for w in document.warnings],
    }


def effect_to_json(effect: Effect) -> dict:
    if isinstance(effect, PropertySet):
        return {"kind": "set-property", "part": effect.part, "prop": effect.prop_name,
                "old": effect.old, "new": effect.new}
    if isinstance(effect, ExternalCall):
        return {"kind": "call", "function": effect.function,
                "args": list(effect.args)}
    if isinstance(effect, EventFired):
        return {"kind": "fire-event", "part": effect.part,
                "event": effect.event_class, "data": dict(effect.data)}
    assert isinstance(effect, Restructured)
    return {"kind": "restructure", "structure": effect.structure_id}


def effect_to_line(effect: Effect) -> str:
    if isinstance(effect, PropertySet):
        was = "unset" if effect.old is None else effect.old
        return f"set-property {effect.part} {effect.prop_name} {effect.new} (was {was})"
    if isinstance(effect, ExternalCall):
        return " ".join(["call", effect.function, *effect.args])
    if isinstance(effect, EventFired):
        return f"fire-event {effect.part} {effect.event_class}"
    assert isinstance(effect, Restructured)
    return f"restructure {effect.structure_id}"
