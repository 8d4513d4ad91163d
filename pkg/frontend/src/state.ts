/**
 * View state and the stale-response guard.
 *
 * The dashboard is read-only except for run submission, so all state is
 * either a server payload or a view preference. Concurrent fetches are
 * allowed; a response is applied only if it still matches the run the
 * view currently wants, so a slow reply for an old run can never
 * clobber a newer one.
 */

import type { PathwaysDoc } from "./types.js";

export type AspectSort = "mentions" | "percentage";

export interface TimeRange {
  from?: string;
  to?: string;
}

export interface ViewState {
  entity: string | null;
  run: string | null; // null means "latest"
  timeRange: TimeRange;
  selectedNode: string | null;
  aspectSort: AspectSort;
}

export function initialState(): ViewState {
  return {
    entity: null,
    run: null,
    timeRange: {},
    selectedNode: null,
    aspectSort: "mentions",
  };
}

type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Keep the node selection only if the new graph still has that node. */
  reconcileSelection(graph: PathwaysDoc): void {
    const selected = this.state.selectedNode;
    if (selected === null) return;
    const present = graph.layers.some((layer) =>
      layer.clusters.some((c) => c.id === selected),
    );
    if (!present) this.update({ selectedNode: null });
  }
}

/**
 * Decides whether a pathway response may be applied. "latest" requests
 * accept whatever run the server resolved; pinned requests insist on it.
 */
export function acceptResponse(state: ViewState, doc: PathwaysDoc): boolean {
  if (state.entity !== doc.entity) return false;
  if (state.run !== null && state.run !== doc.run) return false;
  return true;
}

/** Orders overlapping fetches: only the most recently started one lands. */
export class RequestGate {
  private seq = 0;

  begin(): number {
    return ++this.seq;
  }

  current(token: number): boolean {
    return token === this.seq;
  }
}
