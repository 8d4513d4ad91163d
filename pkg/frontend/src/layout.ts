/**
 * Layered DAG layout. One column per time window, left to right along
 * the timeline; nodes stack vertically inside their column. Pure data
 * in, pure data out, so it is testable without a DOM.
 */

import type { PathwaysDoc } from "./types.js";
import { tokenToHex } from "./colors.js";

export interface NodeBox {
  id: string;
  x: number;
  y: number;
  radius: number;
  colorHex: string;
  memberCount: number;
  topTerms: string[];
  sentiment: string | null;
  layerIndex: number;
}

export interface EdgeLine {
  from: string;
  to: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  weight: number;
}

export interface ColumnBand {
  index: number;
  x: number;
  label: string;
}

export interface Layout {
  width: number;
  height: number;
  columns: ColumnBand[];
  nodes: NodeBox[];
  edges: EdgeLine[];
}

export interface LayoutOptions {
  columnGap: number;
  rowGap: number;
  margin: number;
  baseRadius: number;
  radiusScale: number;
}

const DEFAULTS: LayoutOptions = {
  columnGap: 180,
  rowGap: 70,
  margin: 60,
  baseRadius: 10,
  radiusScale: 6,
};

/** Size encodes how much discussion a node holds; log keeps outliers sane. */
export function nodeRadius(memberCount: number, opts: LayoutOptions = DEFAULTS): number {
  return opts.baseRadius + opts.radiusScale * Math.log(Math.max(memberCount, 1));
}

function windowLabel(start: string): string {
  // "2024-03-01T08:10:00Z" -> "2024-03-01 08:10"
  return start.replace("T", " ").replace(/:\d{2}Z$/, "");
}

export function layoutGraph(doc: PathwaysDoc, opts: LayoutOptions = DEFAULTS): Layout {
  const columns: ColumnBand[] = [];
  const nodes: NodeBox[] = [];
  const position = new Map<string, { x: number; y: number }>();

  let maxRows = 0;
  for (const layer of doc.layers) {
    const x = opts.margin + layer.index * opts.columnGap;
    columns.push({ index: layer.index, x, label: windowLabel(layer.window.start) });
    layer.clusters.forEach((cluster, row) => {
      const y = opts.margin + row * opts.rowGap;
      position.set(cluster.id, { x, y });
      nodes.push({
        id: cluster.id,
        x,
        y,
        radius: nodeRadius(cluster.member_post_ids.length, opts),
        colorHex: tokenToHex(cluster.color),
        memberCount: cluster.member_post_ids.length,
        topTerms: cluster.top_terms,
        sentiment: cluster.annotation?.dominant_sentiment ?? null,
        layerIndex: layer.index,
      });
    });
    maxRows = Math.max(maxRows, layer.clusters.length);
  }

  const edges: EdgeLine[] = [];
  for (const edge of doc.edges) {
    const a = position.get(edge.from);
    const b = position.get(edge.to);
    if (!a || !b) continue; // window filter can orphan an edge endpoint
    edges.push({
      from: edge.from,
      to: edge.to,
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      weight: edge.weight,
    });
  }

  return {
    width: opts.margin * 2 + Math.max(doc.layers.length - 1, 0) * opts.columnGap,
    height: opts.margin * 2 + Math.max(maxRows - 1, 0) * opts.rowGap,
    columns,
    nodes,
    edges,
  };
}
