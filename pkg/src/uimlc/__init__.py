"""uimlc — a compiler toolkit for declarative UI documents.

Pipeline: parse → validate → transform (generic → platform, with source
maps) → resolve styles/content → render (HTML or mock desktop JSON), plus a
simulated runtime that interprets behavior rules and a local workbench
server. See the README for the file formats and the CLI.
"""

from .behavior import (DEFAULT_DEPTH_LIMIT, EventFired, EventInstance, ExternalCall,
                       PropertySet, Restructured, RuntimeState, dispatch,
                       instantiate_runtime)
from .errors import MalformedXmlError, UimlError
from .model import (Behavior, CallFunction, ContentGroup, Diagnostic, EventDataEquals,
                    EventOccurs, FireEvent, Interface, MetaEntry, OpaqueElement, Part,
                    PropertyBinding, Restructure, Rule, SetProperty, SourceLocation,
                    Structure, Style, UimlDocument)
from .parser import parse_document
from .render import RenderOutput, render_html, render_mockdesk
from .serializer import serialize_document
from .style import EffectiveStyle, resolve_style, select_content, select_style
from .validate import validate
from .vocab import (ClassSpec, MappingEntry, MappingSet, TargetPartTemplate, Vocabulary,
                    builtin_mapping, builtin_vocabulary, load_mapping, load_vocabulary,
                    lookup_expansion)
from .xform import SourceMap, TransformReport, identity_source_map, transform

__version__ = "0.1.0"

__all__ = [
    "Behavior", "CallFunction", "ClassSpec", "ContentGroup", "DEFAULT_DEPTH_LIMIT",
    "Diagnostic", "EffectiveStyle", "EventDataEquals", "EventFired", "EventInstance",
    "EventOccurs", "ExternalCall", "FireEvent", "Interface", "MalformedXmlError",
    "MappingEntry", "MappingSet", "MetaEntry", "OpaqueElement", "Part",
    "PropertyBinding", "PropertySet", "RenderOutput", "Restructure", "Restructured",
    "Rule", "RuntimeState", "SetProperty", "SourceLocation", "SourceMap", "Structure",
    "Style", "TargetPartTemplate", "TransformReport", "UimlDocument", "UimlError",
    "Vocabulary", "builtin_mapping", "builtin_vocabulary", "dispatch",
    "identity_source_map", "instantiate_runtime", "load_mapping", "load_vocabulary",
    "lookup_expansion", "parse_document", "render_html", "render_mockdesk",
    "resolve_style", "select_content", "select_style", "serialize_document",
    "transform", "validate",
]
