/** Topic facet panel: the top annotated topics of the current result
 * set; clicking one restricts the search to that topic. */

import type { FacetEntry } from "./types";

export interface FacetHandlers {
  onTopicClick(topicId: string): void;
}

export function renderFacets(
  entries: readonly FacetEntry[],
  labels: ReadonlyMap<string, string>,
  handlers: FacetHandlers,
): HTMLElement {
  const aside = document.createElement("aside");
  aside.className = "facets";
  const heading = document.createElement("h2");
  heading.textContent = "top topics";
  aside.append(heading);

  if (entries.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no topics";
    aside.append(empty);
    return aside;
  }

  const list = document.createElement("ul");
  for (const entry of entries) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.className = "facet-topic";
    button.dataset.topic = entry.topicId;
    const count = document.createElement("span");
    count.className = "facet-count";
    count.textContent = String(entry.count);
    button.append(labels.get(entry.topicId) ?? entry.topicId, " ", count);
    button.addEventListener("click", () => handlers.onTopicClick(entry.topicId));
    item.append(button);
    list.append(item);
  }
  aside.append(list);
  return aside;
}
