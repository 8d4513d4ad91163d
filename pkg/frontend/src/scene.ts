/**
 * Typed scene graph: the declarative middle layer between layout/report
 * data and the DOM. UI tests assert on scenes; the renderer just walks
 * them.
 */

import type { InsightsDoc, PathwaysDoc } from "./types.js";
import type { AspectSort } from "./state.js";
import { layoutGraph, type Layout, type LayoutOptions } from "./layout.js";

export interface CircleNode {
  kind: "circle";
  id: string; // cluster id, used for hit-testing
  x: number;
  y: number;
  radius: number;
  fill: string;
  title: string;
}

export interface LineNode {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
  from: string;
  to: string;
}

export interface TextNode {
  kind: "text";
  x: number;
  y: number;
  text: string;
  role: "column-label" | "node-label" | "empty-state";
}

export interface BarNode {
  kind: "bar";
  term: string;
  fillFraction: number; // equals positive_pct / 100, no recomputation
  mentions: number;
  tooltip: string;
}

export interface ChipNode {
  kind: "chip";
  emotion: string;
  count: number;
}

export type SceneItem = CircleNode | LineNode | TextNode;

export interface GraphScene {
  width: number;
  height: number;
  items: SceneItem[];
  empty: boolean;
}

export interface PanelScene {
  chips: ChipNode[];
  bars: BarNode[];
  empty: boolean;
}

export const EMPTY_GRAPH_MESSAGE = "no discussions in range";
export const EMPTY_PANEL_MESSAGE = "no aspects for this run";

export function buildGraphScene(doc: PathwaysDoc, opts?: LayoutOptions): GraphScene {
  const layout: Layout = opts ? layoutGraph(doc, opts) : layoutGraph(doc);
  const items: SceneItem[] = [];

  const hasNodes = layout.nodes.length > 0;
  if (!hasNodes) {
    items.push({
      kind: "text",
      x: 20,
      y: 30,
      text: EMPTY_GRAPH_MESSAGE,
      role: "empty-state",
    });
    return { width: 280, height: 60, items, empty: true };
  }

  // Edges first so nodes paint over them.
  for (const edge of layout.edges) {
    items.push({
      kind: "line",
      x1: edge.x1,
      y1: edge.y1,
      x2: edge.x2,
      y2: edge.y2,
      width: 1 + 2 * edge.weight,
      from: edge.from,
      to: edge.to,
    });
  }
  for (const column of layout.columns) {
    items.push({
      kind: "text",
      x: column.x,
      y: 22,
      text: column.label,
      role: "column-label",
    });
  }
  for (const node of layout.nodes) {
    items.push({
      kind: "circle",
      id: node.id,
      x: node.x,
      y: node.y,
      radius: node.radius,
      fill: node.colorHex,
      title: `${node.topTerms.join(", ") || node.id} (${node.memberCount} posts)`,
    });
    items.push({
      kind: "text",
      x: node.x,
      y: node.y + node.radius + 14,
      text: node.topTerms.slice(0, 2).join(" "),
      role: "node-label",
    });
  }

  return { width: layout.width, height: layout.height + 40, items, empty: false };
}

export function sortAspects(doc: InsightsDoc, mode: AspectSort): InsightsDoc["aspects"] {
  const rows = [...doc.aspects];
  if (mode === "percentage") {
    rows.sort((a, b) => b.positive_pct - a.positive_pct || a.term.localeCompare(b.term));
  } else {
    rows.sort((a, b) => b.mentions - a.mentions || a.term.localeCompare(b.term));
  }
  return rows;
}

export function buildPanelScene(doc: InsightsDoc, sort: AspectSort): PanelScene {
  const chips: ChipNode[] = doc.top_emotions.map((e) => ({
    kind: "chip",
    emotion: e.emotion,
    count: e.count,
  }));
  const bars: BarNode[] = sortAspects(doc, sort).map((a) => ({
    kind: "bar",
    term: a.term,
    fillFraction: a.positive_pct / 100,
    mentions: a.mentions,
    tooltip: `${a.mentions} posts`,
  }));
  return { chips, bars, empty: bars.length === 0 && chips.length === 0 };
}
