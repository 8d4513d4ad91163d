/**
 * Node drill-down: the member posts of one cluster, with per-aspect
 * sentiment and emotion chips. The list is exactly what the API
 * returns for the cluster; no client-side filtering.
 */

import type { PostsDoc } from "./types.js";

export function renderDrilldown(container: HTMLElement, doc: PostsDoc): void {
  container.replaceChildren();

  const heading = document.createElement("h3");
  heading.textContent = doc.cluster
    ? `${doc.cluster}: ${doc.posts.length} posts`
    : `${doc.posts.length} posts`;
  container.appendChild(heading);

  const list = document.createElement("ul");
  list.className = "post-list";
  for (const post of doc.posts) {
    const item = document.createElement("li");
    item.setAttribute("data-post-id", post.id);

    const text = document.createElement("p");
    text.textContent = post.text;
    item.appendChild(text);

    const meta = document.createElement("p");
    meta.className = "post-meta";
    meta.textContent = `${post.timestamp} · ${post.sentiment}`;
    item.appendChild(meta);

    if (post.aspects.length > 0) {
      const aspects = document.createElement("p");
      aspects.className = "post-aspects";
      aspects.textContent = post.aspects
        .map((a) => `${a.term}: ${a.label}`)
        .join(", ");
      item.appendChild(aspects);
    }
    if (post.emotions.length > 0) {
      const chips = document.createElement("span");
      chips.className = "chips";
      for (const emotion of post.emotions) {
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.textContent = emotion;
        chips.appendChild(chip);
      }
      item.appendChild(chips);
    }
    list.appendChild(item);
  }
  container.appendChild(list);
}
