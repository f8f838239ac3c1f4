"""Style chain resolution, platform filtering, and content substitution.

A document may carry several styles; each style may extend another via its
``source`` attribute. Resolving a style folds the chain root-first into an
effective property table: later styles override earlier ones, and within one
style a later binding overrides an earlier binding for the same target and
property name.

Resolution is platform-aware. A binding survives only if its property name is
unprefixed (shorthand for the document vocabulary's prefix), carries the
document prefix, or carries the requested target platform prefix; bindings
for other platforms are dropped and recorded so callers can surface warnings.

Whole values of the form ``%name%`` are constant references, replaced from
the selected content group at resolution time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import UimlError
from .model import ContentGroup, Interface, Part, Style
from .validate import constant_reference


@dataclass
class EffectiveStyle:
    """Folded style chain: property tables keyed by part name and class name."""
    style_id: Optional[str]
    content_id: Optional[str]
    part_props: dict[str, dict[str, str]] = field(default_factory=dict)
    class_props: dict[str, dict[str, str]] = field(default_factory=dict)
    # (binding target, property name) pairs removed by platform filtering
    dropped: list[tuple[str, str]] = field(default_factory=list)

    def props_for_part(self, part: Part) -> dict[str, str]:
        """Class-level bindings overridden by part-level bindings."""
        props = dict(self.class_props.get(part.part_class, {}))
        props.update(self.part_props.get(part.name, {}))
        return props


def check_selection(document, style_id: Optional[str],
                    content_id: Optional[str]) -> None:
    """Reject style/content ids that no interface in the document defines.

    Style and content namespaces are per-interface; an explicitly requested id
    applies to the interfaces that define it while the others fall back to
    their defaults, so existence is checked once at document level.
    """
    if style_id is not None and not any(
            i.style_by_id(style_id) for i in document.interfaces):
        raise UimlError("UnknownStyle", f"no interface defines style {style_id!r}")
    if content_id is not None and not any(
            g.id == content_id for i in document.interfaces for g in i.contents):
        raise UimlError("UnknownContentGroup",
                        f"no interface defines content group {content_id!r}")


def select_style(interface: Interface, style_id: Optional[str]) -> Optional[Style]:
    """Pick the style to resolve: the named one if this interface defines it,
    else the interface's only style.

    Returns None when the interface has no styles. Raises AmbiguousStyle when
    several styles are available but none was named.
    """
    if style_id is not None:
        style = interface.style_by_id(style_id)
        if style is not None:
            return style
    if not interface.styles:
        return None
    if len(interface.styles) > 1 and style_id is None:
        raise UimlError("AmbiguousStyle",
                        f"interface {interface.name!r} has {len(interface.styles)} "
                        "styles; name one explicitly")
    return interface.styles[0] if len(interface.styles) == 1 else None


def select_content(interface: Interface,
                   content_id: Optional[str]) -> Optional[ContentGroup]:
    """Pick the content group: the named one if defined here, else the first."""
    if content_id is not None:
        for group in interface.contents:
            if group.id == content_id:
                return group
    return interface.contents[0] if interface.contents else None


def style_chain(interface: Interface, style: Style) -> list[Style]:
    """The source chain of a style, root (most generic) first."""
    chain = [style]
    current = style
    while current.source is not None:
        current = interface.style_by_id(current.source)
        if current is None:  # parser guarantees this cannot happen
            raise UimlError("DanglingStyleSource",
                            f"style sources unknown style {chain[-1].source!r}")
        chain.append(current)
    chain.reverse()
    return chain


def resolve_constant(value: str, group: Optional[ContentGroup]) -> str:
    """Substitute a whole-value ``%name%`` reference; other values pass through."""
    ref = constant_reference(value)
    if ref is None:
        return value
    if group is None or ref not in group.constants:
        where = f"content group {group.id!r}" if group else "any content group"
        raise UimlError("UnresolvedConstant",
                        f"constant {ref!r} is not defined in {where}")
    return group.constants[ref]


def resolve_style(interface: Interface, style_id: Optional[str] = None,
                  content_id: Optional[str] = None, target_prefix: str = "g:",
                  doc_prefix: str = "g:") -> EffectiveStyle:
    """Fold the chosen style chain into an effective style for one platform.

    ``doc_prefix`` is the prefix of the vocabulary the document is written in
    (unprefixed property names expand to it); ``target_prefix`` is the platform
    being resolved for. When they are equal only same-platform bindings
    survive.
    """
    style = select_style(interface, style_id)
    group = select_content(interface, content_id)
    effective = EffectiveStyle(style.id if style else None,
                               group.id if group else None)
    if style is None:
        return effective
    for link in style_chain(interface, style):
        for binding in link.properties:
            name = binding.prop_name
            if ":" not in name:
                name = doc_prefix + name
            prefix = name.split(":", 1)[0] + ":"
            if prefix not in (doc_prefix, target_prefix):
                effective.dropped.append((binding.target, name))
                continue
            table = effective.class_props if binding.targets_class else effective.part_props
            value = resolve_constant(binding.value, group)
            table.setdefault(binding.target, {})[name] = value
    return effective
