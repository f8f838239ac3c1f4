/**
 * View-model for the property inspector.
 *
 * Shows where a selected part's property values come from: the bindings that
 * name the part directly across the selected style's source chain (latest
 * wins, the same write-through target `POST /api/property` edits) plus the
 * read-only class-level defaults that apply to it. Full cascade semantics
 * (constants, platform filtering) stay server-side; this module only reports
 * what the document declares.
 */

import type { InterfaceNode, StyleNode } from "./api.js";

export interface PropertyRow {
  prop: string;
  value: string;
  /** style the winning binding lives in */
  styleId: string;
  /** true when the binding targets the part's class, not the part itself */
  fromClass: boolean;
}

/** The style id the server would pick when none is requested. */
export function defaultStyleId(iface: InterfaceNode): string | null {
  return iface.styles.length === 1 ? iface.styles[0]!.id : null;
}

/**
 * The style and its ancestors, root first. Unknown ids and cycles yield the
 * longest well-formed prefix rather than throwing — the server reports those
 * as validation diagnostics already.
 */
export function styleChain(iface: InterfaceNode, styleId: string | null): StyleNode[] {
  const byId = new Map(iface.styles.map((style) => [style.id, style]));
  const chain: StyleNode[] = [];
  const seen = new Set<string>();
  let cursor = styleId ?? defaultStyleId(iface);
  while (cursor !== null && !seen.has(cursor)) {
    const style = byId.get(cursor);
    if (style === undefined) break;
    seen.add(cursor);
    chain.push(style);
    cursor = style.source;
  }
  return chain.reverse();
}

function collect(
  chain: StyleNode[],
  predicate: (target: string, targetsClass: boolean) => boolean,
  fromClass: boolean,
): PropertyRow[] {
  const winners = new Map<string, PropertyRow>();
  for (const style of chain) {
    for (const binding of style.properties) {
      if (predicate(binding.target, binding.targets_class)) {
        winners.set(binding.name, {
          prop: binding.name,
          value: binding.value,
          styleId: style.id,
          fromClass,
        });
      }
    }
  }
  return [...winners.values()].sort((a, b) => a.prop.localeCompare(b.prop));
}

/** Direct bindings for a part along the chain, latest definition winning. */
export function partBindings(
  iface: InterfaceNode,
  styleId: string | null,
  part: string,
): PropertyRow[] {
  return collect(
    styleChain(iface, styleId),
    (target, targetsClass) => !targetsClass && target === part,
    false,
  );
}

/** Class-level defaults that apply to a part of the given class. */
export function classBindings(
  iface: InterfaceNode,
  styleId: string | null,
  partClass: string,
): PropertyRow[] {
  return collect(
    styleChain(iface, styleId),
    (target, targetsClass) => targetsClass && target === partClass,
    true,
  );
}

/** Inspector rows: class defaults first, part bindings shadowing them. */
export function inspectorRows(
  iface: InterfaceNode,
  styleId: string | null,
  part: string,
  partClass: string,
): PropertyRow[] {
  const rows = new Map<string, PropertyRow>();
  for (const row of classBindings(iface, styleId, partClass)) rows.set(row.prop, row);
  for (const row of partBindings(iface, styleId, part)) rows.set(row.prop, row);
  return [...rows.values()].sort((a, b) => a.prop.localeCompare(b.prop));
}
