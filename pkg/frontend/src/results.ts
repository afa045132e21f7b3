/** Paginated results list: hits render in exactly the payload order, the
 * displayed total is the payload's, and the server's 10-per-page slicing
 * is respected (the UI never re-slices the hits array). */

import type { SearchPayload } from "./types";

export const PAGE_SIZE = 10;

export interface ResultsHandlers {
  onPageChange(page: number): void;
  onHitClick(docId: string): void;
}

export function renderResults(
  payload: SearchPayload,
  page: number,
  handlers: ResultsHandlers,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "results";

  const header = document.createElement("p");
  header.className = "results-header";
  const total = document.createElement("span");
  total.className = "total-count";
  total.textContent = String(payload.totalCount);
  header.append(total, " results");
  section.append(header);

  if (payload.hits.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no results";
    section.append(empty);
    return section;
  }

  const list = document.createElement("ol");
  list.className = "hits";
  for (const hit of payload.hits) {
    const item = document.createElement("li");
    item.className = "hit";
    item.dataset.docId = hit.docId;

    const title = document.createElement("button");
    title.type = "button";
    title.className = "hit-title";
    title.textContent = hit.title;
    title.addEventListener("click", () => handlers.onHitClick(hit.docId));

    const meta = document.createElement("p");
    meta.className = "hit-meta";
    const kind = document.createElement("span");
    kind.className = "kind-badge";
    kind.dataset.kind = hit.kind;
    kind.textContent = hit.kind;
    meta.append(hit.author, " · ", hit.date, " · ", kind);

    const snippet = document.createElement("p");
    snippet.className = "snippet";
    snippet.textContent = hit.snippet;

    item.append(title, meta, snippet);
    list.append(item);
  }
  section.append(list);

  const pageCount = Math.max(1, Math.ceil(payload.totalCount / PAGE_SIZE));
  const nav = document.createElement("nav");
  nav.className = "pagination";
  const prev = document.createElement("button");
  prev.type = "button";
  prev.className = "page-prev";
  prev.textContent = "previous";
  prev.disabled = page <= 0;
  prev.addEventListener("click", () => handlers.onPageChange(page - 1));
  const where = document.createElement("span");
  where.className = "page-where";
  where.textContent = `page ${page + 1} of ${pageCount}`;
  const next = document.createElement("button");
  next.type = "button";
  next.className = "page-next";
  next.textContent = "next";
  next.disabled = page >= pageCount - 1;
  next.addEventListener("click", () => handlers.onPageChange(page + 1));
  nav.append(prev, where, next);
  section.append(nav);
  return section;
}
