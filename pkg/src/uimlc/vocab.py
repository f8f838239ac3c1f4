"""Vocabularies and mapping sets.

A vocabulary declares the part classes available for one platform (or for
the whole family, in the generic case): per class its properties with value
kinds, its event classes, and whether it may hold children. A mapping set
drives transformation from the generic vocabulary to one platform: per
generic class an expansion tree of target part templates, the anchor that
receives the generic part's children, and the property/event route tables.

Both are JSON files (``*.vocab.json`` / ``*.map.json``):

    {"id": "...", "family": "...", "platform_prefix": "g:",
     "classes": {"G:Button": {"container": false,
                              "properties": [{"name": "g:text", "kind": "text"}],
                              "events": ["g:click"]}}}

    {"from": "generic", "to": "html",
     "entries": {"G:TopContainer": {
         "expansion": [{"class": "html"},
                       {"class": "head", "parent": 0, "props": {...}}, ...],
         "child_anchor": 7,
         "property_routes": {"g:title": [2, "h:text"]},
         "platform_routes": {"h:link-color": [4, "h:link-color"]},
         "event_routes": {"g:focus": [7, "h:focus"]}}}}

Expansion templates form a tree: template 0 is the root, every later
template names an earlier one as its parent. ``child_anchor`` is optional
and only meaningful for generic classes that may hold children.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .errors import UimlError
from .model import Diagnostic, SourceLocation

VALUE_KINDS = ("text", "color", "boolean", "integer")

BUILTIN_VOCABULARIES = ("generic", "html", "mockdesk")
BUILTIN_MAPPINGS = ("generic-to-html", "generic-to-mockdesk")


@dataclass
class ClassSpec:
    properties: dict[str, str]  # prop name -> value kind
    events: list[str]
    container: bool = False


@dataclass
class Vocabulary:
    id: str
    family: str
    platform_prefix: str
    classes: dict[str, ClassSpec]

    def class_spec(self, class_name: str) -> Optional[ClassSpec]:
        return self.classes.get(class_name)


@dataclass
class TargetPartTemplate:
    part_class: str
    parent: Optional[int] = None  # index of parent template; None for the root
    intrinsics: dict[str, str] = field(default_factory=dict)


@dataclass
class MappingEntry:
    expansion: list[TargetPartTemplate]
    child_anchor: Optional[int] = None
    property_routes: dict[str, tuple[int, str]] = field(default_factory=dict)
    platform_routes: dict[str, tuple[int, str]] = field(default_factory=dict)
    event_routes: dict[str, tuple[int, str]] = field(default_factory=dict)


@dataclass
class MappingSet:
    from_vocab: str
    to_vocab: str
    entries: dict[str, MappingEntry]
    warnings: list[Diagnostic] = field(default_factory=list)


def _format_error(message: str) -> UimlError:
    return UimlError("FormatError", message)


def _load_json(path: Union[str, Path]) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise UimlError("FormatError", f"{path}: {exc.msg}",
                        SourceLocation(exc.pos, exc.lineno, exc.colno)) from exc


def _reject_duplicate_keys(pairs):
    table = {}
    for key, value in pairs:
        if key in table:
            raise UimlError("DuplicateClass", f"duplicate key {key!r}")
        table[key] = value
    return table


def load_vocabulary(path: Union[str, Path]) -> Vocabulary:
    """Load and check a ``*.vocab.json`` file.

    Raises FileNotFoundError, UimlError(FormatError) for malformed files,
    and UimlError(DuplicateClass) for repeated class or property names.
    """
    raw = _load_json(path)
    for key in ("id", "family", "platform_prefix", "classes"):
        if key not in raw:
            raise _format_error(f"{path}: missing field {key!r}")
    prefix = raw["platform_prefix"]
    if not prefix.endswith(":") or prefix != prefix.lower():
        raise _format_error(f"{path}: platform_prefix must be lowercase and end with ':'")
    if not isinstance(raw["classes"], dict) or not raw["classes"]:
        raise _format_error(f"{path}: classes table must be a non-empty object")
    classes: dict[str, ClassSpec] = {}
    for class_name, spec in raw["classes"].items():
        props: dict[str, str] = {}
        for prop in spec.get("properties", []):
            name, kind = prop["name"], prop.get("kind", "text")
            if kind not in VALUE_KINDS:
                raise _format_error(f"{path}: {class_name}.{name}: unknown kind {kind!r}")
            if name in props:
                raise UimlError("DuplicateClass",
                                f"{path}: property {name!r} repeated on {class_name}")
            props[name] = kind
        classes[class_name] = ClassSpec(props, list(spec.get("events", [])),
                                        bool(spec.get("container", False)))
    return Vocabulary(raw["id"], raw["family"], prefix, classes)


def load_mapping(path: Union[str, Path], from_vocab: Vocabulary,
                 to_vocab: Vocabulary) -> MappingSet:
    """Load a ``*.map.json`` file and validate it against both vocabularies.

    Generic classes missing from the mapping produce warnings (transforming
    such a class later raises NotMapped). Classes unknown to either
    vocabulary raise UnknownClassInMapping; a child anchor that is not a
    container raises BadAnchor.
    """
    raw = _load_json(path)
    for key in ("from", "to", "entries"):
        if key not in raw:
            raise _format_error(f"{path}: missing field {key!r}")
    entries: dict[str, MappingEntry] = {}
    for class_name, raw_entry in raw["entries"].items():
        if class_name not in from_vocab.classes:
            raise UimlError("UnknownClassInMapping",
                            f"{path}: {class_name!r} not in vocabulary {from_vocab.id!r}")
        entries[class_name] = _load_entry(path, class_name, raw_entry, to_vocab)
    warnings = [
        Diagnostic("warning", "NotMapped",
                   f"generic class {name!r} has no mapping entry", SourceLocation(0, 0, 0))
        for name in from_vocab.classes if name not in entries
    ]
    return MappingSet(raw["from"], raw["to"], entries, warnings)


def _load_entry(path, class_name: str, raw: dict, to_vocab: Vocabulary) -> MappingEntry:
    raw_expansion = raw.get("expansion", [])
    if not raw_expansion:
        raise _format_error(f"{path}: {class_name}: expansion must be non-empty")
    expansion: list[TargetPartTemplate] = []
    for index, template in enumerate(raw_expansion):
        target_class = template["class"]
        if target_class not in to_vocab.classes:
            raise UimlError("UnknownClassInMapping",
                            f"{path}: {class_name}: {target_class!r} not in vocabulary "
                            f"{to_vocab.id!r}")
        parent = template.get("parent")
        if index == 0:
            if parent is not None:
                raise _format_error(f"{path}: {class_name}: template 0 must be the root")
        elif parent is None or not 0 <= parent < index:
            raise _format_error(f"{path}: {class_name}: template {index} needs a parent "
                                "index earlier in the expansion")
        expansion.append(TargetPartTemplate(
            target_class, parent, dict(template.get("props", {}))))

    anchor = raw.get("child_anchor")
    if anchor is not None:
        if not 0 <= anchor < len(expansion):
            raise UimlError("BadAnchor",
                            f"{path}: {class_name}: child_anchor {anchor} out of range")
        anchor_class = expansion[anchor].part_class
        if not to_vocab.classes[anchor_class].container:
            raise UimlError("BadAnchor",
                            f"{path}: {class_name}: anchor class {anchor_class!r} "
                            "is not a container")

    entry = MappingEntry(expansion, anchor)
    entry.property_routes = _load_routes(path, class_name, raw.get("property_routes", {}),
                                         expansion, to_vocab, events=False)
    entry.platform_routes = _load_routes(path, class_name, raw.get("platform_routes", {}),
                                         expansion, to_vocab, events=False)
    entry.event_routes = _load_routes(path, class_name, raw.get("event_routes", {}),
                                      expansion, to_vocab, events=True)
    return entry


def _load_routes(path, class_name, raw_routes: dict, expansion, to_vocab,
                 events: bool) -> dict[str, tuple[int, str]]:
    routes: dict[str, tuple[int, str]] = {}
    for name, (index, target_name) in raw_routes.items():
        if not 0 <= index < len(expansion):
            raise _format_error(f"{path}: {class_name}: route {name!r} index out of range")
        spec = to_vocab.classes[expansion[index].part_class]
        declared = spec.events if events else spec.properties
        if target_name not in declared:
            kind = "event" if events else "property"
            raise _format_error(
                f"{path}: {class_name}: route {name!r} targets undeclared {kind} "
                f"{target_name!r} on {expansion[index].part_class!r}")
        routes[name] = (index, target_name)
    return routes


def lookup_expansion(mapping: MappingSet, class_name: str) -> MappingEntry:
    """Return the mapping entry for a class; never fabricates a default."""
    entry = mapping.entries.get(class_name)
    if entry is None:
        raise UimlError("NotMapped", f"class {class_name!r} has no mapping entry")
    return entry


# -- shipped vocabularies ------------------------------------------------------

def _data_path(filename: str) -> Path:
    return Path(str(resources.files("uimlc").joinpath("vocab", filename)))


@lru_cache(maxsize=None)
def builtin_vocabulary(name: str) -> Vocabulary:
    if name not in BUILTIN_VOCABULARIES:
        raise UimlError("FormatError", f"no built-in vocabulary {name!r}")
    return load_vocabulary(_data_path(f"{name}.vocab.json"))


@lru_cache(maxsize=None)
def builtin_mapping(name: str) -> MappingSet:
    if name not in BUILTIN_MAPPINGS:
        raise UimlError("FormatError", f"no built-in mapping {name!r}")
    target = name.rsplit("-", 1)[-1]
    return load_mapping(_data_path(f"{name}.map.json"),
                        builtin_vocabulary("generic"), builtin_vocabulary(target))


def known_platform_prefixes() -> set[str]:
    return {builtin_vocabulary(name).platform_prefix for name in BUILTIN_VOCABULARIES}
