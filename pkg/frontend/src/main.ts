/**
 * Dashboard bootstrap: wires the API client, view state, and renderers
 * to the static page. Served by the analytics service under /ui, so
 * API calls are same-origin.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderDrilldown } from "./drilldown.js";
import { renderGraph, renderPanel } from "./render.js";
import { buildGraphScene, buildPanelScene } from "./scene.js";
import { RequestGate, Store, acceptResponse } from "./state.js";
import type { AspectSort } from "./state.js";

const api = new ApiClient("");
const store = new Store();
const graphGate = new RequestGate();
const panelGate = new RequestGate();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function refreshGraph(): Promise<void> {
  const state = store.get();
  if (!state.entity) return;
  const token = graphGate.begin();
  const container = el<HTMLElement>("graph");
  try {
    const doc = await api.pathways(state.entity, {
      run: state.run ?? undefined,
      from: state.timeRange.from,
      to: state.timeRange.to,
    });
    if (!graphGate.current(token)) return; // a newer request took over
    if (!acceptResponse(store.get(), doc)) return;
    store.reconcileSelection(doc);
    renderGraph(container, buildGraphScene(doc), openDrilldown);
    el<HTMLElement>("run-label").textContent = `run ${doc.run}`;
  } catch (err) {
    if (!graphGate.current(token)) return;
    showError(container, err);
  }
}

async function refreshPanel(): Promise<void> {
  const state = store.get();
  if (!state.entity) return;
  const token = panelGate.begin();
  const container = el<HTMLElement>("panel");
  try {
    const doc = await api.aspects(state.entity, state.run ?? undefined);
    if (!panelGate.current(token)) return;
    renderPanel(container, buildPanelScene(doc, state.aspectSort));
  } catch (err) {
    if (!panelGate.current(token)) return;
    showError(container, err);
  }
}

async function openDrilldown(clusterId: string): Promise<void> {
  const state = store.get();
  if (!state.entity) return;
  store.update({ selectedNode: clusterId });
  const container = el<HTMLElement>("drilldown");
  try {
    const doc = await api.posts(state.entity, {
      cluster: clusterId,
      run: state.run ?? undefined,
    });
    renderDrilldown(container, doc);
  } catch (err) {
    showError(container, err);
  }
}

function showError(container: HTMLElement, err: unknown): void {
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = err instanceof ApiError ? err.message : "request failed";
  container.replaceChildren(p);
}

async function reanalyze(): Promise<void> {
  const state = store.get();
  if (!state.entity) return;
  const button = el<HTMLButtonElement>("reanalyze");
  button.disabled = true;
  try {
    const summary = await api.startRun(state.entity);
    if (summary.status === "completed") {
      store.update({ run: summary.run_id });
      await Promise.all([refreshGraph(), refreshPanel()]);
      return;
    }
    await pollRun(state.entity, summary.run_id);
  } catch (err) {
    showError(el<HTMLElement>("graph"), err);
  } finally {
    button.disabled = false;
  }
}

/** Poll until the submitted run becomes visible, then pin the view to it. */
async function pollRun(entity: string, runId: string): Promise<void> {
  for (let attempt = 0; attempt < 120; attempt++) {
    await new Promise((resolve) => setTimeout(resolve, 1000));
    try {
      await api.pathways(entity, { run: runId });
      store.update({ run: runId });
      await Promise.all([refreshGraph(), refreshPanel()]);
      return;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) continue;
      throw err;
    }
  }
  throw new ApiError(504, `run ${runId} did not complete`);
}

async function boot(): Promise<void> {
  const select = el<HTMLSelectElement>("entity");
  const entities = await api.entities();
  for (const row of entities) {
    const option = document.createElement("option");
    option.value = row.id;
    option.textContent = `${row.id} (${row.post_count})`;
    select.appendChild(option);
  }

  select.addEventListener("change", () => {
    store.update({ entity: select.value, run: null, selectedNode: null });
    void refreshGraph();
    void refreshPanel();
    el<HTMLElement>("drilldown").replaceChildren();
  });

  const fromInput = el<HTMLInputElement>("from");
  const toInput = el<HTMLInputElement>("to");
  const applyRange = () => {
    store.update({
      timeRange: {
        from: fromInput.value || undefined,
        to: toInput.value || undefined,
      },
    });
    void refreshGraph(); // server-side filtering keeps one source of truth
  };
  fromInput.addEventListener("change", applyRange);
  toInput.addEventListener("change", applyRange);

  const sortSelect = el<HTMLSelectElement>("sort");
  sortSelect.addEventListener("change", () => {
    store.update({ aspectSort: sortSelect.value as AspectSort });
    void refreshPanel();
  });

  el<HTMLButtonElement>("reanalyze").addEventListener("click", () => {
    void reanalyze();
  });

  const first = entities[0];
  if (first) {
    select.value = first.id;
    store.update({ entity: first.id });
    await Promise.all([refreshGraph(), refreshPanel()]);
  }
}

void boot();
