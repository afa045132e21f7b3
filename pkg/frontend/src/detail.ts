/** Full-document view opened by clicking a result. */

import type { DocumentPayload } from "./types";

export function renderDocumentDetail(
  doc: DocumentPayload,
  labels: ReadonlyMap<string, string>,
  onClose: () => void,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "detail";

  const close = document.createElement("button");
  close.type = "button";
  close.className = "detail-close";
  close.textContent = "close";
  close.setAttribute("aria-label", "close document");
  close.addEventListener("click", onClose);

  const title = document.createElement("h2");
  title.className = "detail-title";
  title.textContent = doc.title;

  const meta = document.createElement("p");
  meta.className = "detail-meta";
  meta.textContent = `${doc.author} · ${doc.date} · ${doc.kind}`;

  section.append(close, title, meta);

  if (doc.topics.length > 0) {
    const topics = document.createElement("p");
    topics.className = "detail-topics";
    topics.textContent =
      doc.topics.map((t) => labels.get(t) ?? t).join(", ");
    section.append(topics);
  }

  const text = document.createElement("div");
  text.className = "detail-text";
  text.textContent = doc.text;
  section.append(text);
  return section;
}
