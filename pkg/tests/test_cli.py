import json
import socket
from pathlib import Path

import pytest

from uimlc import parse_document
from uimlc.cli import (EXIT_DOMAIN, EXIT_ENVIRONMENT, EXIT_OK, detect_vocabulary_id,
                       main, render_document)

from .conftest import FIXTURES, parse_fixture

FORM = str(FIXTURES / "data-collection.uiml")
STYLES = str(FIXTURES / "three-styles.uiml")
DEMO = str(FIXTURES / "behavior-demo.uiml")
CASCADE = str(FIXTURES / "cascade.uiml")
CLICK_OK = str(FIXTURES / "events" / "click-ok.json")
NO_MATCH = str(FIXTURES / "events" / "no-match.json")


def test_validate_clean_document(capsys):
    assert main(["validate", FORM]) == EXIT_OK
    captured = capsys.readouterr()
    assert "18 part(s), 0 error(s)" in captured.out
    assert captured.err == ""


def test_validate_reports_errors_with_positions(tmp_path, capsys):
    bad = tmp_path / "bad.uiml"
    bad.write_text("<uiml><interface name='I'><structure>"
                   "<part name='Top' class='G:TopContainer'>"
                   "<part name='C' class='G:Chart'/>"
                   "</part></structure></interface></uiml>")
    assert main(["validate", str(bad)]) == EXIT_DOMAIN
    captured = capsys.readouterr()
    assert "error UnknownClass" in captured.err
    assert "G:Chart" in captured.err
    assert "1 error(s)" in captured.out


def test_validate_missing_file(capsys):
    assert main(["validate", "no-such-file.uiml"]) == EXIT_ENVIRONMENT


def test_validate_malformed_xml(tmp_path, capsys):
    bad = tmp_path / "broken.uiml"
    bad.write_text("<uiml><interface")
    assert main(["validate", str(bad)]) == EXIT_ENVIRONMENT
    assert "MalformedXml" in capsys.readouterr().err


def test_validate_warning_only_document_passes(tmp_path, capsys):
    assert main(["validate", str(FIXTURES / "kitchen-sink.uiml")]) == EXIT_OK
    captured = capsys.readouterr()
    assert "warning OpaqueBlock" in captured.err
    assert "0 error(s), 1 warning(s)" in captured.out


def test_transform_writes_document_and_source_map(tmp_path, capsys):
    out = tmp_path / "form.html.uiml"
    assert main(["transform", FORM, "--mapping", "generic-to-html",
                 "-o", str(out)]) == EXIT_OK
    captured = capsys.readouterr()
    assert "25 part(s)" in captured.out
    transformed = parse_document(out.read_text())
    assert transformed.part_count() == 25
    srcmap = json.loads(Path(f"{out}.srcmap.json").read_text())
    assert srcmap["from"] == "generic" and srcmap["to"] == "html"
    table = srcmap["interfaces"]["DataCollectionForm"]["structure-1"]
    assert table["RequestWindow.body"] == "RequestWindow"


def test_transform_reports_dropped_properties(tmp_path, capsys):
    out = tmp_path / "out.uiml"
    assert main(["transform", STYLES, "--mapping", "generic-to-html",
                 "--style", "onlyJava", "-o", str(out)]) == EXIT_OK
    captured = capsys.readouterr()
    assert "warning DroppedProperty" in captured.err
    assert "j:resizable" in captured.err
    assert "1 dropped propert(y/ies)" in captured.out


def test_transform_requires_known_style(tmp_path, capsys):
    out = tmp_path / "out.uiml"
    assert main(["transform", STYLES, "--mapping", "generic-to-html",
                 "--style", "nope", "-o", str(out)]) == EXIT_DOMAIN
    assert "UnknownStyle" in capsys.readouterr().err
    assert not out.exists()


def test_render_to_stdout_matches_library_pipeline(capsys):
    assert main(["render", STYLES, "--target", "html",
                 "--style", "onlyHTML"]) == EXIT_OK
    captured = capsys.readouterr()
    doc = parse_fixture("three-styles.uiml")
    output, _ = render_document(doc, "html", "onlyHTML", None, None)
    assert captured.out == output.text


def test_render_to_file_matches_stdout(tmp_path, capsys):
    out = tmp_path / "page.html"
    assert main(["render", STYLES, "--target", "html", "--style", "onlyHTML",
                 "-o", str(out)]) == EXIT_OK
    capsys.readouterr()
    assert main(["render", STYLES, "--target", "html",
                 "--style", "onlyHTML"]) == EXIT_OK
    assert out.read_text() == capsys.readouterr().out


def test_render_requires_style_when_ambiguous(capsys):
    assert main(["render", STYLES, "--target", "html"]) == EXIT_DOMAIN
    assert "AmbiguousStyle" in capsys.readouterr().err


def test_render_rejects_unknown_target():
    with pytest.raises(SystemExit):  # argparse enforces the choices
        main(["render", STYLES, "--target", "gtk"])


def test_simulate_prints_effect_lines(capsys):
    assert main(["simulate", DEMO, "--events", CLICK_OK]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.splitlines() == [
        "set-property Status g:text saved (was idle)",
        "call saveForm NameField",
    ]


def test_simulate_no_matching_rules(capsys):
    assert main(["simulate", DEMO, "--events", NO_MATCH]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_simulate_json_trace(capsys):
    assert main(["simulate", CASCADE, "--events", CLICK_OK, "--json"]) == EXIT_OK
    trace = json.loads(capsys.readouterr().out)
    kinds = [e["kind"] for e in trace["effects"]]
    assert kinds == ["fire-event", "fire-event", "set-property"]
    assert trace["active_structure"] == "main"
    assert trace["widgets"]["Msg"]["g:text"] == "done"


def test_simulate_overflow_is_a_domain_error(tmp_path, capsys):
    doc = tmp_path / "loop.uiml"
    doc.write_text("""<uiml><interface name="I">
<structure><part name="Top" class="G:TopContainer">
  <part name="B" class="G:Button"/>
</part></structure>
<behavior><rule>
  <condition><event part-name="B" class="g:click"/></condition>
  <fire-event part-name="B" class="g:click"/>
</rule></behavior>
</interface></uiml>""")
    events = tmp_path / "events.json"
    events.write_text('[{"part": "B", "event": "g:click"}]')
    assert main(["simulate", str(doc), "--events", str(events),
                 "--depth-limit", "10"]) == EXIT_DOMAIN
    assert "EventCascadeOverflow" in capsys.readouterr().err


def test_simulate_rejects_non_list_events(tmp_path, capsys):
    events = tmp_path / "events.json"
    events.write_text('{"part": "B"}')
    assert main(["simulate", DEMO, "--events", str(events)]) == EXIT_DOMAIN
    assert "FormatError" in capsys.readouterr().err


def test_detect_vocabulary():
    assert detect_vocabulary_id(parse_fixture("minimal.uiml")) == "generic"
    html_doc = parse_document("<uiml><interface name='I'><structure>"
                              "<part name='D' class='div'/></structure>"
                              "</interface></uiml>")
    assert detect_vocabulary_id(html_doc) == "html"
    desk_doc = parse_document("<uiml><interface name='I'><structure>"
                              "<part name='F' class='Frame'/></structure>"
                              "</interface></uiml>")
    assert detect_vocabulary_id(desk_doc) == "mockdesk"


def test_transform_with_mapping_path(tmp_path, capsys):
    mapping_src = (Path(__file__).resolve().parent.parent / "src" / "uimlc" /
                   "vocab" / "generic-to-html.map.json")
    local = tmp_path / "copy.map.json"
    local.write_text(mapping_src.read_text())
    out = tmp_path / "out.uiml"
    assert main(["transform", str(FIXTURES / "minimal.uiml"), "--mapping",
                 str(local), "-o", str(out)]) == EXIT_OK
    assert parse_document(out.read_text()).part_count() == 9


def test_transform_with_bad_mapping_path(tmp_path, capsys):
    bad = tmp_path / "bad.map.json"
    bad.write_text(json.dumps({"from": "generic", "to": "never",
                               "entries": {}}))
    out = tmp_path / "out.uiml"
    assert main(["transform", FORM, "--mapping", str(bad),
                 "-o", str(out)]) == EXIT_DOMAIN
    assert "FormatError" in capsys.readouterr().err


def test_serve_reports_port_in_use(capsys):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        assert main(["serve", "--port", str(port)]) == EXIT_ENVIRONMENT
        assert "ServeFailed" in capsys.readouterr().err
    finally:
        blocker.close()
