/**
 * DOM-free indexing of rendered previews.
 *
 * Both render targets annotate every element they emit: HTML pages carry
 * `data-uiml-part` / `data-uiml-src` attributes, mockdesk payloads carry
 * `name` / `src` keys. These helpers pull those annotations out of the raw
 * render text so selection and highlighting logic can be exercised (and
 * tested) without a browser.
 */

export interface PreviewIndex {
  /** rendered part name -> source part it derives from */
  srcOf: Record<string, string>;
  /** source part name -> rendered part names, in document order */
  partsBySrc: Record<string, string[]>;
}

const OPENING_TAG = /<[a-zA-Z][^>]*>/g;
const PART_ATTR = /\bdata-uiml-part="([^"]*)"/;
const SRC_ATTR = /\bdata-uiml-src="([^"]*)"/;

const NAMED_ENTITIES: Record<string, string> = {
  amp: "&",
  lt: "<",
  gt: ">",
  quot: '"',
  apos: "'",
};

/** Inverse of the renderer's attribute escaping (named + numeric refs). */
export function unescapeAttribute(value: string): string {
  return value.replace(
    /&(?:#(\d+)|#x([0-9a-fA-F]+)|([a-z]+));/g,
    (whole, decimal: string | undefined, hex: string | undefined, name: string | undefined) => {
      if (decimal !== undefined) return String.fromCodePoint(Number(decimal));
      if (hex !== undefined) return String.fromCodePoint(parseInt(hex, 16));
      if (name !== undefined && name in NAMED_ENTITIES) return NAMED_ENTITIES[name]!;
      return whole;
    },
  );
}

function record(index: PreviewIndex, part: string, src: string): void {
  if (!(part in index.srcOf)) {
    index.srcOf[part] = src;
    (index.partsBySrc[src] ??= []).push(part);
  }
}

/** Scans a rendered HTML page for its part annotations. */
export function indexHtmlPreview(html: string): PreviewIndex {
  const index: PreviewIndex = { srcOf: {}, partsBySrc: {} };
  for (const match of html.matchAll(OPENING_TAG)) {
    const tag = match[0];
    const part = PART_ATTR.exec(tag);
    const src = SRC_ATTR.exec(tag);
    if (part?.[1] !== undefined && src?.[1] !== undefined) {
      record(index, unescapeAttribute(part[1]), unescapeAttribute(src[1]));
    }
  }
  return index;
}

export interface MockdeskNode {
  class: string;
  name: string;
  src: string;
  props: Record<string, string>;
  children: MockdeskNode[];
}

export interface MockdeskPayload {
  target: string;
  structure: string;
  roots: MockdeskNode[];
}

/** Parses a rendered mockdesk payload (a JSON document, one tree per root). */
export function parseMockdeskPreview(text: string): MockdeskNode[] {
  const payload = JSON.parse(text) as MockdeskPayload;
  return payload.roots ?? [];
}

/** Scans a rendered mockdesk payload for its part annotations. */
export function indexMockdeskPreview(text: string): PreviewIndex {
  const index: PreviewIndex = { srcOf: {}, partsBySrc: {} };
  const walk = (node: MockdeskNode): void => {
    record(index, node.name, node.src);
    node.children.forEach(walk);
  };
  parseMockdeskPreview(text).forEach(walk);
  return index;
}

/** Indexes a preview of either target. */
export function indexPreview(target: string, text: string): PreviewIndex {
  return target === "mockdesk" ? indexMockdeskPreview(text) : indexHtmlPreview(text);
}
