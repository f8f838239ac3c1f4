"""In-memory document model for UIML.

Documents are plain dataclass trees. They are built once by the parser and
treated as immutable values afterwards; nothing in the toolkit mutates a
parsed document (transformation builds a new one). Source locations are
excluded from equality so that a document compares structurally equal to
its serialize/parse round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class SourceLocation:
    """Byte offset plus 1-based line and column in the source text."""
    offset: int
    line: int
    column: int


_NOWHERE = SourceLocation(0, 0, 0)


@dataclass
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    location: SourceLocation

    def line_format(self) -> str:
        return f"{self.severity} {self.code} {self.location.line}:{self.location.column} {self.message}"


@dataclass
class MetaEntry:
    name: str
    content: str


@dataclass
class Part:
    name: str
    part_class: str
    children: list["Part"] = field(default_factory=list)
    # Fixed identity properties attached by transformation (e.g. input type);
    # serialized as extra attributes on <part>.
    intrinsics: dict[str, str] = field(default_factory=dict)
    location: SourceLocation = field(default=_NOWHERE, compare=False)

    def walk(self) -> Iterator["Part"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class Structure:
    id: str
    roots: list[Part] = field(default_factory=list)
    location: SourceLocation = field(default=_NOWHERE, compare=False)

    def walk(self) -> Iterator[Part]:
        for root in self.roots:
            yield from root.walk()

    def part_names(self) -> list[str]:
        return [p.name for p in self.walk()]


@dataclass
class PropertyBinding:
    target: str
    targets_class: bool  # True: target is a class name; False: a part name
    prop_name: str
    value: str
    location: SourceLocation = field(default=_NOWHERE, compare=False)


@dataclass
class Style:
    id: str
    source: Optional[str] = None
    properties: list[PropertyBinding] = field(default_factory=list)
    location: SourceLocation = field(default=_NOWHERE, compare=False)


@dataclass
class ContentGroup:
    id: str
    constants: dict[str, str] = field(default_factory=dict)
    location: SourceLocation = field(default=_NOWHERE, compare=False)


@dataclass
class EventOccurs:
    part: str
    event_class: str


@dataclass
class EventDataEquals:
    part: str
    event_class: str
    data_name: str
    expected: str


Condition = Union[EventOccurs, EventDataEquals]


@dataclass
class SetProperty:
    part: str
    prop_name: str
    value: str


@dataclass
class CallFunction:
    function: str
    args: list[str] = field(default_factory=list)


@dataclass
class FireEvent:
    part: str
    event_class: str
    data: dict[str, str] = field(default_factory=dict)


@dataclass
class Restructure:
    structure_id: str


Action = Union[SetProperty, CallFunction, FireEvent, Restructure]


@dataclass
class Rule:
    condition: Condition
    actions: list[Action] = field(default_factory=list)
    location: SourceLocation = field(default=_NOWHERE, compare=False)


@dataclass
class Behavior:
    rules: list[Rule] = field(default_factory=list)


@dataclass
class OpaqueElement:
    """Preserved-but-inert XML subtree (<peers>, <template> and their contents)."""
    tag: str
    attributes: list[tuple[str, str]] = field(default_factory=list)
    text: str = ""
    children: list["OpaqueElement"] = field(default_factory=list)


@dataclass
class Interface:
    name: str
    structures: list[Structure] = field(default_factory=list)
    styles: list[Style] = field(default_factory=list)
    contents: list[ContentGroup] = field(default_factory=list)
    behaviors: list[Behavior] = field(default_factory=list)
    location: SourceLocation = field(default=_NOWHERE, compare=False)

    def rules(self) -> list[Rule]:
        return [rule for behavior in self.behaviors for rule in behavior.rules]

    def structure_by_id(self, structure_id: str) -> Optional[Structure]:
        for structure in self.structures:
            if structure.id == structure_id:
                return structure
        return None

    def style_by_id(self, style_id: str) -> Optional[Style]:
        for style in self.styles:
            if style.id == style_id:
                return style
        return None

    def all_part_names(self) -> set[str]:
        names: set[str] = set()
        for structure in self.structures:
            names.update(structure.part_names())
        return names


@dataclass
class UimlDocument:
    head: list[MetaEntry] = field(default_factory=list)
    interfaces: list[Interface] = field(default_factory=list)
    doc_name: Optional[str] = None
    opaques: list[OpaqueElement] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list, compare=False)

    def parts(self) -> Iterator[Part]:
        for iface in self.interfaces:
            for structure in iface.structures:
                yield from structure.walk()

    def part_count(self) -> int:
        return sum(1 for _ in self.parts())
