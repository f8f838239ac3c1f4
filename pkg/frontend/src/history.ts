/**
 * View-model for the snapshot history panel.
 *
 * Every mutation on the server (open, document replace, property edit,
 * restore) appends a snapshot; the panel lists them newest first and lets
 * the user jump back to any of them, which itself appends a `restore N`
 * snapshot — history is append-only, never rewritten.
 */

import type { HistoryEntry } from "./api.js";

export interface HistoryRow {
  ordinal: number;
  label: string;
  /** HH:MM:SS in local time */
  time: string;
  /** false when the snapshot's render failed (e.g. ambiguous style) */
  rendered: boolean;
  current: boolean;
}

export function describeRender(entry: HistoryEntry): string {
  if (entry.render === null) return "not rendered";
  if ("error" in entry.render) {
    return `render failed: ${entry.render.error.code}`;
  }
  return `${entry.render.target}, ${entry.render.text.length} chars`;
}

export function historyRows(entries: HistoryEntry[]): HistoryRow[] {
  const latest = entries.length - 1;
  return entries
    .map((entry, index) => ({
      ordinal: entry.ordinal,
      label: entry.label,
      time: new Date(entry.timestamp * 1000).toTimeString().slice(0, 8),
      rendered: entry.render !== null && !("error" in entry.render),
      current: index === latest,
    }))
    .reverse();
}

/**
 * The ordinal a "back one step" control should restore: the snapshot just
 * before the current one, or null at the beginning of history.
 */
export function previousOrdinal(entries: HistoryEntry[]): number | null {
  return entries.length >= 2 ? entries[entries.length - 2]!.ordinal : null;
}
