/** Active-filter breadcrumbs: one chip per filter with an × to remove
 * it. Removing the last one returns to the default exploration view. */

import type { ExplorationState, FilterDimension } from "./state";

export interface BreadcrumbHandlers {
  onRemoveFilter(dimension: FilterDimension, value: string): void;
  onClearYearRange(): void;
}

interface Chip {
  key: string;
  text: string;
  remove(): void;
}

export function renderBreadcrumbs(
  state: ExplorationState,
  labels: ReadonlyMap<string, string>,
  handlers: BreadcrumbHandlers,
): HTMLElement {
  const nav = document.createElement("nav");
  nav.className = "breadcrumbs";

  const chips: Chip[] = [];
  for (const author of state.authors) {
    chips.push({
      key: `authors:${author}`,
      text: `author: ${author}`,
      remove: () => handlers.onRemoveFilter("authors", author),
    });
  }
  for (const kind of state.kinds) {
    chips.push({
      key: `kinds:${kind}`,
      text: `kind: ${kind}`,
      remove: () => handlers.onRemoveFilter("kinds", kind),
    });
  }
  for (const topic of state.topics) {
    chips.push({
      key: `topics:${topic}`,
      text: `topic: ${labels.get(topic) ?? topic}`,
      remove: () => handlers.onRemoveFilter("topics", topic),
    });
  }
  if (state.yearFrom !== null || state.yearTo !== null) {
    chips.push({
      key: "years",
      text: `years: ${state.yearFrom ?? "…"}–${state.yearTo ?? "…"}`,
      remove: () => handlers.onClearYearRange(),
    });
  }

  for (const chip of chips) {
    const span = document.createElement("span");
    span.className = "crumb";
    span.dataset.filter = chip.key;
    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "crumb-remove";
    remove.textContent = "×";
    remove.setAttribute("aria-label", `remove ${chip.text}`);
    remove.addEventListener("click", chip.remove);
    span.append(chip.text, remove);
    nav.append(span);
  }
  return nav;
}
