"""Command-line interface.

    uiml validate  FILE [--vocab ID|PATH]
    uiml transform FILE --mapping ID|PATH -o OUT [--style ID] [--content ID]
    uiml render    FILE --target html|mockdesk [-o OUT] [--style ID]
                        [--content ID] [--structure ID]
    uiml simulate  FILE --events FILE [--style ID] [--content ID]
                        [--depth-limit N] [--json]
    uiml serve     [--open FILE] [--port N] [--host ADDR] [--assets DIR]

Exit codes are uniform across commands: 0 success, 1 domain error (validation
errors, unroutable properties, cascade overflow, …), 2 environment error
(missing file, malformed XML, port in use, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .behavior import DEFAULT_DEPTH_LIMIT, EventInstance, dispatch, instantiate_runtime
from .errors import MalformedXmlError, UimlError
from .jsonio import effect_to_json, effect_to_line
from .model import UimlDocument
from .parser import parse_document
from .render import RenderOutput, render_html, render_mockdesk
from .serializer import serialize_document
from .vocab import (BUILTIN_MAPPINGS, BUILTIN_VOCABULARIES, MappingSet, Vocabulary,
                    builtin_mapping, builtin_vocabulary, load_mapping, load_vocabulary)
from .validate import validate
from .xform import SourceMap, TransformReport, identity_source_map, transform

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_ENVIRONMENT = 2


def _print_error(exc: UimlError) -> None:
    print(exc.diagnostic().line_format(), file=sys.stderr)


def _read_document(path: str) -> UimlDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def detect_vocabulary_id(document: UimlDocument) -> str:
    """Infer which shipped vocabulary a document is written in from its
    part classes: generic when any class is ``G:``-prefixed, otherwise the
    platform vocabulary that declares the classes (default generic)."""
    classes = {part.part_class for part in document.parts()}
    if not classes or any(name.startswith("G:") for name in classes):
        return "generic"
    for vocab_id in ("html", "mockdesk"):
        if classes <= set(builtin_vocabulary(vocab_id).classes):
            return vocab_id
    return "generic"


def _resolve_vocabulary(spec: Optional[str], document: UimlDocument) -> Vocabulary:
    if spec is None:
        return builtin_vocabulary(detect_vocabulary_id(document))
    if spec in BUILTIN_VOCABULARIES:
        return builtin_vocabulary(spec)
    return load_vocabulary(spec)


def _resolve_mapping(spec: str) -> tuple[MappingSet, Vocabulary]:
    if spec in BUILTIN_MAPPINGS:
        mapping = builtin_mapping(spec)
    else:
        raw = json.loads(Path(spec).read_text(encoding="utf-8"))
        for key in ("from", "to"):
            if raw.get(key) not in BUILTIN_VOCABULARIES:
                raise UimlError("FormatError",
                                f"{spec}: {key!r} must name a built-in vocabulary")
        mapping = load_mapping(spec, builtin_vocabulary(raw["from"]),
                               builtin_vocabulary(raw["to"]))
    return mapping, builtin_vocabulary(mapping.to_vocab)


def render_document(document: UimlDocument, target: str,
                    style_id: Optional[str] = None, content_id: Optional[str] = None,
                    structure_id: Optional[str] = None
                    ) -> tuple[RenderOutput, SourceMap]:
    """Shared render pipeline: transform generic input first, then render.

    This is the single code path behind both ``uiml render`` and the serve
    API's render endpoint, which keeps the two byte-identical.
    """
    if target not in ("html", "mockdesk"):
        raise UimlError("FormatError", f"unknown render target {target!r}")
    if detect_vocabulary_id(document) == "generic":
        mapping, target_vocab = _resolve_mapping(f"generic-to-{target}")
        platform_doc, source_map, _ = transform(document, mapping, target_vocab,
                                                style_id=style_id,
                                                content_id=content_id)
        style_id = content_id = None
    else:
        platform_doc = document
        source_map = identity_source_map(document, target)
    renderer = render_html if target == "html" else render_mockdesk
    output = renderer(platform_doc, source_map, style_id=style_id,
                      content_id=content_id, structure_id=structure_id)
    return output, source_map


# -- subcommands -----------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        document = _read_document(args.file)
    except MalformedXmlError as exc:
        _print_error(exc)
        return EXIT_ENVIRONMENT
    except UimlError as exc:
        _print_error(exc)
        return EXIT_DOMAIN
    vocabulary = _resolve_vocabulary(args.vocab, document)
    diagnostics = list(document.warnings) + validate(document, vocabulary)
    for diagnostic in diagnostics:
        print(diagnostic.line_format(), file=sys.stderr)
    errors = sum(1 for d in diagnostics if d.severity == "error")
    print(f"{args.file}: {len(document.interfaces)} interface(s), "
          f"{document.part_count()} part(s), {errors} error(s), "
          f"{len(diagnostics) - errors} warning(s)")
    return EXIT_OK if errors == 0 else EXIT_DOMAIN


def cmd_transform(args) -> int:
    document = _read_document(args.file)
    mapping, target_vocab = _resolve_mapping(args.mapping)
    transformed, source_map, report = transform(document, mapping, target_vocab,
                                                style_id=args.style,
                                                content_id=args.content)
    for warning in report.warnings:
        print(warning.line_format(), file=sys.stderr)
    out = Path(args.out)
    out.write_text(serialize_document(transformed), encoding="utf-8")
    Path(f"{args.out}.srcmap.json").write_text(source_map.to_json_text(),
                                               encoding="utf-8")
    print(f"{args.out}: {transformed.part_count()} part(s), "
          f"{len(report.dropped_properties)} dropped propert(y/ies), "
          f"{report.translated_events} translated event(s)")
    return EXIT_OK


def cmd_render(args) -> int:
    document = _read_document(args.file)
    output, _ = render_document(document, args.target, style_id=args.style,
                                content_id=args.content, structure_id=args.structure)
    if args.out:
        Path(args.out).write_text(output.text, encoding="utf-8")
    else:
        sys.stdout.write(output.text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    document = _read_document(args.file)
    raw_events = json.loads(Path(args.events).read_text(encoding="utf-8"))
    if not isinstance(raw_events, list):
        raise UimlError("FormatError", f"{args.events}: expected a JSON list of events")
    prefix = builtin_vocabulary(detect_vocabulary_id(document)).platform_prefix
    state = instantiate_runtime(document, style_id=args.style,
                                content_id=args.content, doc_prefix=prefix,
                                depth_limit=args.depth_limit)
    effects = []
    for raw in raw_events:
        event = EventInstance(raw["part"], raw.get("event") or raw["event_class"],
                              dict(raw.get("data", {})))
        effects.extend(dispatch(state, event))
    if args.json:
        trace = {"effects": [effect_to_json(e) for e in effects],
                 "active_structure": state.active_structure_id,
                 "widgets": state.widgets}
        print(json.dumps(trace, indent=2))
    else:
        for effect in effects:
            print(effect_to_line(effect))
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import run_server  # deferred: http.server import is serve-only
    try:
        run_server(open_file=args.open, host=args.host, port=args.port,
                   assets=args.assets)
    except OSError as exc:
        print(f"error ServeFailed 0:0 {exc}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uiml",
        description="Compile, check, render, and simulate declarative UI documents.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document against a vocabulary")
    p.add_argument("file")
    p.add_argument("--vocab", help="vocabulary id (generic|html|mockdesk) or path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("transform", help="rewrite a generic document for one platform")
    p.add_argument("file")
    p.add_argument("--mapping", required=True,
                   help="mapping id (generic-to-html|generic-to-mockdesk) or path")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--style")
    p.add_argument("--content")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("render", help="render a document to html or mock desktop JSON")
    p.add_argument("file")
    p.add_argument("--target", required=True, choices=("html", "mockdesk"))
    p.add_argument("-o", "--out")
    p.add_argument("--style")
    p.add_argument("--content")
    p.add_argument("--structure")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("simulate", help="dispatch scripted events through the rules")
    p.add_argument("file")
    p.add_argument("--events", required=True,
                   help="JSON file: [{\"part\": ..., \"event\": ..., \"data\": {}}]")
    p.add_argument("--style")
    p.add_argument("--content")
    p.add_argument("--depth-limit", type=int, default=DEFAULT_DEPTH_LIMIT)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="start the local workbench server")
    p.add_argument("--open", help="document to load into the session")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--assets", help="directory of workbench static assets")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MalformedXmlError as exc:
        _print_error(exc)
        return EXIT_ENVIRONMENT
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error FileError 0:0 {exc}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    except UimlError as exc:
        _print_error(exc)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
