/**
 * Integration: the edit loop (property writes, document replacement,
 * snapshot history with restore) and the behavior simulator, against live
 * servers.
 */

import { readFileSync } from "node:fs";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, WorkbenchClient } from "../src/api.js";
import { historyRows, previousOrdinal } from "../src/history.js";
import { defaultStyleId, partBindings } from "../src/properties.js";
import { listenedEvents } from "../src/tree.js";
import { fixturePath, startServer, type RunningServer } from "./server.js";

describe("property edits and history restore", () => {
  let server: RunningServer;
  let client: WorkbenchClient;
  let initialRender: string;
  const fixture = fixturePath("minimal.uiml");

  beforeAll(async () => {
    server = await startServer(fixture);
    client = new WorkbenchClient(server.baseUrl);
    initialRender = (await client.render({})).text;
  });

  afterAll(async () => {
    await server.stop();
  });

  it("applies successive property edits, snapshotting each one", async () => {
    for (const value of ["first pass", "second pass", "third pass"]) {
      const result = await client.setProperty("Hello", "g:text", value);
      expect(result.ok).toBe(true);
      expect(result.text).toContain(value);
    }
    const doc = await client.getDocument();
    expect(doc.text).toContain("third pass");
    expect(doc.text).not.toContain("second pass");

    const iface = doc.tree.interfaces[0]!;
    expect(defaultStyleId(iface)).toBe("base");
    expect(partBindings(iface, null, "Hello")).toEqual([
      { prop: "g:text", value: "third pass", styleId: "base", fromClass: false },
    ]);
  });

  it("overwrote the existing binding instead of stacking duplicates", async () => {
    const doc = await client.getDocument();
    const bindings = doc.tree.interfaces[0]!.styles[0]!.properties.filter(
      (b) => !b.targets_class && b.target === "Hello" && b.name === "g:text",
    );
    expect(bindings).toHaveLength(1);
    expect(bindings[0]!.value).toBe("third pass");
  });

  it("changed the rendered preview", async () => {
    const render = await client.render({});
    expect(render.text).toContain("third pass");
    expect(render.text).not.toBe(initialRender);
  });

  it("recorded one snapshot per edit, in order", async () => {
    const { entries } = await client.history();
    expect(entries.map((e) => e.ordinal)).toEqual([0, 1, 2, 3]);
    expect(entries.map((e) => e.label)).toEqual([
      "open",
      "set Hello.g:text",
      "set Hello.g:text",
      "set Hello.g:text",
    ]);
    const rows = historyRows(entries);
    expect(rows[0]!.current).toBe(true);
    expect(rows[0]!.ordinal).toBe(3);
  });

  it("restores the opening snapshot byte-for-byte", async () => {
    const result = await client.restore(0);
    expect(result.ok).toBe(true);
    expect(result.ordinal).toBe(4);
    expect(result.text).toBe(readFileSync(fixture, "utf-8"));

    const render = await client.render({});
    expect(render.text).toBe(initialRender);

    const { entries } = await client.history();
    expect(entries.map((e) => e.label)).toEqual([
      "open",
      "set Hello.g:text",
      "set Hello.g:text",
      "set Hello.g:text",
      "restore 0",
    ]);
    // restoring is itself undoable: stepping back returns to the edited text
    const back = previousOrdinal(entries);
    expect(back).toBe(3);
    const undone = await client.restore(back!);
    expect(undone.text).toContain("third pass");
  });

  it("rejects edits to parts the document does not declare", async () => {
    const failure = await client
      .setProperty("Ghost", "g:text", "boo")
      .catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("DanglingPartRef");
  });

  it("rejects restores to snapshots that never existed", async () => {
    const failure = await client.restore(99).catch((e: unknown) => e);
    expect((failure as ApiError).code).toBe("UnknownSnapshot");
  });

  it("replaces the whole document text as one snapshot", async () => {
    const doc = await client.getDocument();
    const replaced = doc.text.replace("third pass", "replaced wholesale");
    const result = await client.putDocument(replaced);
    expect(result.ok).toBe(true);
    const { entries } = await client.history();
    expect(entries[entries.length - 1]!.label).toBe("edit");
    expect((await client.getDocument()).text).toContain("replaced wholesale");
  });
});

describe("behavior simulation", () => {
  let server: RunningServer;
  let client: WorkbenchClient;

  beforeAll(async () => {
    server = await startServer(fixturePath("behavior-demo.uiml"));
    client = new WorkbenchClient(server.baseUrl);
  });

  afterAll(async () => {
    await server.stop();
  });

  it("offers the rule-listened events for the simulator panel", async () => {
    const doc = await client.getDocument();
    expect(listenedEvents(doc.tree)).toEqual([
      { part: "OKBtn", event: "g:click", dataNames: [] },
      { part: "CancelBtn", event: "g:click", dataNames: [] },
    ]);
  });

  it("dispatches an event and reports its effects and widget state", async () => {
    const result = await client.sendEvent("OKBtn", "g:click");
    expect(result.effects).toEqual([
      { kind: "set-property", part: "Status", prop: "g:text", old: "idle", new: "saved" },
      { kind: "call", function: "saveForm", args: ["NameField"] },
    ]);
    expect(result.widgets["Status"]!["g:text"]).toBe("saved");
    expect(result.active_structure).toBe("main");
  });

  it("keeps runtime state across dispatches", async () => {
    const result = await client.sendEvent("OKBtn", "g:click");
    const first = result.effects[0]!;
    expect(first.kind).toBe("set-property");
    if (first.kind === "set-property") {
      expect(first.old).toBe("saved");
    }
  });

  it("runs the other rule too", async () => {
    const result = await client.sendEvent("CancelBtn", "g:click");
    expect(result.widgets["Status"]!["g:text"]).toBe("cancelled");
  });

  it("returns no effects when no rule listens", async () => {
    const result = await client.sendEvent("Status", "g:focus");
    expect(result.effects).toEqual([]);
  });

  it("rejects events on unknown parts", async () => {
    const failure = await client.sendEvent("Ghost", "g:click").catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("UnknownPart");
  });
});
