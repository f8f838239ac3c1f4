/**
 * Typed client for the uimlc workbench HTTP API.
 *
 * Every workbench feature goes through this module; nothing else in the
 * front end talks to the network. The wire shapes mirror the server's JSON
 * projections one to one.
 */

export interface SourceLocation {
  offset: number;
  line: number;
  column: number;
}

export interface Diagnostic {
  severity: "error" | "warning";
  code: string;
  message: string;
  location: SourceLocation;
}

export interface PartNode {
  name: string;
  class: string;
  intrinsics: Record<string, string>;
  location: SourceLocation;
  children: PartNode[];
}

export interface StructureNode {
  id: string;
  roots: PartNode[];
}

export interface StyleBinding {
  target: string;
  targets_class: boolean;
  name: string;
  value: string;
  location: SourceLocation;
}

export interface StyleNode {
  id: string;
  source: string | null;
  properties: StyleBinding[];
}

export interface ContentNode {
  id: string;
  constants: Record<string, string>;
}

export type ConditionNode =
  | { kind: "event-occurs"; part: string; event: string }
  | {
      kind: "event-data-equals";
      part: string;
      event: string;
      data_name: string;
      expected: string;
    };

export type ActionNode =
  | { kind: "set-property"; part: string; prop: string; value: string }
  | { kind: "call"; function: string; args: string[] }
  | { kind: "fire-event"; part: string; event: string; data: Record<string, string> }
  | { kind: "restructure"; structure: string };

export interface RuleNode {
  condition: ConditionNode;
  actions: ActionNode[];
  location: SourceLocation;
}

export interface InterfaceNode {
  name: string;
  structures: StructureNode[];
  styles: StyleNode[];
  contents: ContentNode[];
  behaviors: { rules: RuleNode[] }[];
}

export interface DocumentTree {
  name: string | null;
  head: { name: string; content: string }[];
  interfaces: InterfaceNode[];
  opaques: { tag: string }[];
  warnings: Diagnostic[];
}

export interface RenderParams {
  target: string;
  style: string | null;
  content: string | null;
  structure: string | null;
}

export interface DocumentPayload {
  text: string;
  tree: DocumentTree;
  params: RenderParams;
  diagnostics: Diagnostic[];
}

/** interface name -> structure id -> generated part name -> source part name */
export interface SourceMapData {
  from: string;
  to: string;
  interfaces: Record<string, Record<string, Record<string, string>>>;
}

export interface RenderResult {
  target: string;
  text: string;
  /** rendered part name -> source part name (identity when untransformed) */
  annotations: Record<string, string>;
}

export interface RenderPayload extends RenderResult {
  source_map: SourceMapData | null;
}

export interface EditResult {
  ok: boolean;
  ordinal: number;
  text?: string;
  render: RenderResult | { error: ApiErrorBody } | null;
  diagnostics?: Diagnostic[];
}

export type EffectNode =
  | {
      kind: "set-property";
      part: string;
      prop: string;
      old: string | null;
      new: string;
    }
  | { kind: "call"; function: string; args: string[] }
  | { kind: "fire-event"; part: string; event: string; data: Record<string, string> }
  | { kind: "restructure"; structure: string };

export interface EventResult {
  effects: EffectNode[];
  active_structure: string | null;
  widgets: Record<string, Record<string, string>>;
}

export interface TransformResult {
  text: string;
  source_map: SourceMapData;
  report: {
    dropped_properties: [string, string][];
    translated_events: number;
    warnings: Diagnostic[];
  };
}

export interface HistoryEntry {
  ordinal: number;
  label: string;
  timestamp: number;
  document_text: string;
  render: RenderResult | { error: ApiErrorBody } | null;
  source_map: SourceMapData | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  location?: SourceLocation;
}

/** A non-2xx API response, carrying the server's machine-readable error. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly location: SourceLocation | undefined;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.location = body.location;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class WorkbenchClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    // Bind lazily so passing `window.fetch`/undici fetch around keeps working.
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { Accept: "application/json" } };
    if (body !== undefined) {
      init.headers = { ...init.headers, "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const payload: unknown = await response.json();
    if (!response.ok) {
      // Error bodies are flat {code, message, location?} objects.
      const body = payload as Partial<ApiErrorBody>;
      throw new ApiError(response.status, {
        code: body.code ?? "HttpError",
        message: body.message ?? `unexpected status ${response.status}`,
        ...(body.location !== undefined ? { location: body.location } : {}),
      });
    }
    return payload as T;
  }

  getDocument(): Promise<DocumentPayload> {
    return this.request("GET", "/api/document");
  }

  putDocument(text: string): Promise<EditResult> {
    return this.request("PUT", "/api/document", { text });
  }

  setProperty(part: string, prop: string, value: string): Promise<EditResult> {
    return this.request("POST", "/api/property", { part, prop, value });
  }

  /** Renders with the given parameter overrides; omitted keys keep their
   * session value, `null` resets one to its default. */
  render(params: Partial<RenderParams> = {}): Promise<RenderPayload> {
    return this.request("POST", "/api/render", params);
  }

  transform(mapping: string): Promise<TransformResult> {
    return this.request("POST", "/api/transform", { mapping });
  }

  sendEvent(
    part: string,
    event: string,
    data: Record<string, string> = {},
  ): Promise<EventResult> {
    return this.request("POST", "/api/event", { part, event, data });
  }

  sourceMap(): Promise<{ source_map: SourceMapData }> {
    return this.request("GET", "/api/sourcemap");
  }

  history(): Promise<{ entries: HistoryEntry[] }> {
    return this.request("GET", "/api/history");
  }

  restore(ordinal: number): Promise<EditResult> {
    return this.request("POST", "/api/history/restore", { ordinal });
  }
}
