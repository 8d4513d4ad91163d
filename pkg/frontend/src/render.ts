/**
 * Scene -> DOM. The graph renders as SVG, the aspect panel as plain
 * elements. Renderers replace their container's children wholesale;
 * interactivity is limited to a node-click callback wired here.
 */

import type { GraphScene, PanelScene } from "./scene.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export type NodeClickHandler = (clusterId: string) => void;

export function renderGraph(
  container: HTMLElement,
  scene: GraphScene,
  onNodeClick?: NodeClickHandler,
): void {
  container.replaceChildren();
  if (scene.empty) {
    const p = document.createElement("p");
    p.className = "empty-state";
    const only = scene.items[0];
    p.textContent = only && only.kind === "text" ? only.text : "";
    container.appendChild(p);
    return;
  }

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${scene.width} ${scene.height}`);
  svg.setAttribute("width", String(scene.width));
  svg.setAttribute("height", String(scene.height));
  svg.setAttribute("role", "img");

  for (const item of scene.items) {
    if (item.kind === "line") {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(item.x1));
      line.setAttribute("y1", String(item.y1));
      line.setAttribute("x2", String(item.x2));
      line.setAttribute("y2", String(item.y2));
      line.setAttribute("stroke", "#666");
      line.setAttribute("stroke-width", item.width.toFixed(2));
      line.setAttribute("data-from", item.from);
      line.setAttribute("data-to", item.to);
      line.classList.add("edge");
      svg.appendChild(line);
    } else if (item.kind === "circle") {
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(item.x));
      circle.setAttribute("cy", String(item.y));
      circle.setAttribute("r", String(item.radius));
      circle.setAttribute("fill", item.fill);
      circle.setAttribute("data-node-id", item.id);
      circle.classList.add("node");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = item.title;
      circle.appendChild(title);
      if (onNodeClick) {
        circle.addEventListener("click", () => onNodeClick(item.id));
      }
      svg.appendChild(circle);
    } else {
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(item.x));
      text.setAttribute("y", String(item.y));
      text.setAttribute("data-role", item.role);
      text.textContent = item.text;
      svg.appendChild(text);
    }
  }
  container.appendChild(svg);
}

export function renderPanel(container: HTMLElement, scene: PanelScene): void {
  container.replaceChildren();
  if (scene.empty) {
    const p = document.createElement("p");
    p.className = "empty-state";
    p.textContent = "no aspects for this run";
    container.appendChild(p);
    return;
  }

  const chipRow = document.createElement("div");
  chipRow.className = "chips";
  for (const chip of scene.chips) {
    const span = document.createElement("span");
    span.className = "chip";
    span.textContent = `${chip.emotion} ${chip.count}`;
    chipRow.appendChild(span);
  }
  container.appendChild(chipRow);

  const list = document.createElement("div");
  list.className = "bars";
  for (const bar of scene.bars) {
    const row = document.createElement("div");
    row.className = "bar-row";
    row.title = bar.tooltip;

    const label = document.createElement("span");
    label.className = "bar-term";
    label.textContent = bar.term;

    const track = document.createElement("div");
    track.className = "bar-track";
    const fill = document.createElement("div");
    fill.className = "bar-fill";
    fill.style.width = `${bar.fillFraction * 100}%`;
    fill.setAttribute("data-fill-fraction", String(bar.fillFraction));
    track.appendChild(fill);

    row.appendChild(label);
    row.appendChild(track);
    list.appendChild(row);
  }
  container.appendChild(list);
}
