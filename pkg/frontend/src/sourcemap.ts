/**
 * Bidirectional lookups over a transform source map.
 *
 * The server ships the map as interface -> structure -> generated -> source.
 * The workbench needs both directions: clicking a source part in the tree
 * highlights every generated element it produced, and clicking a rendered
 * element walks back to the source part (plus its sibling expansion parts).
 */

import type { SourceMapData } from "./api.js";

/** generated part name -> source part name, for one interface + structure */
export type GeneratedToSource = Record<string, string>;

/**
 * Picks the lookup table for one interface/structure pair. Defaults to the
 * first interface and its first structure (the same defaults the renderer
 * uses), so single-interface documents need no arguments.
 */
export function tableFor(
  map: SourceMapData,
  interfaceName?: string,
  structureId?: string,
): GeneratedToSource {
  const interfaces = Object.keys(map.interfaces);
  const iface = interfaceName ?? interfaces[0];
  if (iface === undefined) return {};
  const structures = map.interfaces[iface] ?? {};
  const sid = structureId ?? Object.keys(structures)[0];
  if (sid === undefined) return {};
  return structures[sid] ?? {};
}

/** Source part a generated name came from, or null for unknown names. */
export function sourceOf(table: GeneratedToSource, generated: string): string | null {
  return table[generated] ?? null;
}

/** Every generated name a source part expanded to, in map insertion order. */
export function generatedFor(table: GeneratedToSource, source: string): string[] {
  return Object.entries(table)
    .filter(([, src]) => src === source)
    .map(([generated]) => generated);
}

/** source part name -> its generated names, preserving insertion order. */
export function invert(table: GeneratedToSource): Record<string, string[]> {
  const bySource: Record<string, string[]> = {};
  for (const [generated, source] of Object.entries(table)) {
    (bySource[source] ??= []).push(generated);
  }
  return bySource;
}

export interface SelectionHighlight {
  /** The source part the selection resolves to (null if unmapped). */
  source: string | null;
  /** All generated names to mark in the preview. */
  generated: string[];
}

/** Highlight set when the user picks a part in the source tree. */
export function highlightFromSource(
  table: GeneratedToSource,
  sourceName: string,
): SelectionHighlight {
  return { source: sourceName, generated: generatedFor(table, sourceName) };
}

/**
 * Highlight set when the user clicks a rendered element: resolve it to its
 * source part, then include every sibling element of the same expansion so
 * the whole scaffold lights up, not just the clicked tag.
 */
export function highlightFromGenerated(
  table: GeneratedToSource,
  generatedName: string,
): SelectionHighlight {
  const source = sourceOf(table, generatedName);
  if (source === null) {
    // Untransformed documents render with identity annotations; echo the
    // name back so direct platform documents still highlight themselves.
    return { source: null, generated: [generatedName] };
  }
  return { source, generated: generatedFor(table, source) };
}
