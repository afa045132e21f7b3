/** Stacked-bar distribution chart: one bar per bucket in server order,
 * one colored segment per segment key. Bars and segments are buttons, so
 * every click-to-filter interaction is keyboard-reachable. */

import type { Orientation } from "./state";
import type { AggregatePayload } from "./types";

export const GENERAL_SEGMENT = "(general)";

export interface ChartHandlers {
  onBarClick(bucketKey: string): void;
  onSegmentClick(bucketKey: string, segmentKey: string): void;
}

// Stable palette keyed by document-kind declaration order; other segment
// keys (subtopics) cycle through the fallback colors in legend order.
const KIND_COLORS = new Map<string, string>([
  ["Public Speech", "#4e79a7"],
  ["Proclamation", "#f28e2b"],
  ["Executive Action", "#59a14f"],
  ["Letter", "#e15759"],
]);

const FALLBACK_COLORS = [
  "#76b7b2", "#edc949", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

function segmentKeysInOrder(view: AggregatePayload): string[] {
  const keys: string[] = [];
  for (const bucket of view.buckets) {
    for (const segment of bucket.segments) {
      if (!keys.includes(segment.key)) keys.push(segment.key);
    }
  }
  return keys;
}

export function renderChart(
  view: AggregatePayload,
  orientation: Orientation,
  handlers: ChartHandlers,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "chart";
  section.dataset.orientation = orientation;
  section.dataset.mode = view.mode;

  if (view.buckets.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no results";
    section.append(empty);
    return section;
  }

  const keys = segmentKeysInOrder(view);
  const colors = new Map(keys.map((key, position) => [
    key,
    KIND_COLORS.get(key) ??
      FALLBACK_COLORS[position % FALLBACK_COLORS.length],
  ]));

  const legend = document.createElement("ul");
  legend.className = "legend";
  for (const key of keys) {
    const entry = document.createElement("li");
    entry.className = "legend-entry";
    const swatch = document.createElement("i");
    swatch.className = "swatch";
    swatch.style.backgroundColor = colors.get(key)!;
    entry.append(swatch, key);
    legend.append(entry);
  }

  const bars = document.createElement("div");
  bars.className = "bars";
  const maxTotal = Math.max(...view.buckets.map((b) => b.total), 1);
  for (const bucket of view.buckets) {
    const row = document.createElement("div");
    row.className = "bar-row";
    row.dataset.bucket = bucket.key;

    const label = document.createElement("button");
    label.type = "button";
    label.className = "bar-label";
    label.textContent = bucket.key;
    label.title = `${bucket.key}: ${bucket.total}`;
    label.addEventListener("click", () => handlers.onBarClick(bucket.key));

    const track = document.createElement("div");
    track.className = "bar";
    track.style.setProperty("--bar-share", String(bucket.total / maxTotal));
    for (const segment of bucket.segments) {
      const piece = document.createElement("button");
      piece.type = "button";
      piece.className = "segment";
      piece.dataset.bucket = bucket.key;
      piece.dataset.segment = segment.key;
      piece.textContent = String(segment.count);
      piece.title = `${bucket.key} · ${segment.key}: ${segment.count}`;
      piece.setAttribute(
        "aria-label", `${segment.key} in ${bucket.key}: ${segment.count}`);
      piece.style.flexGrow = String(segment.count);
      piece.style.backgroundColor = colors.get(segment.key)!;
      piece.addEventListener(
        "click", () => handlers.onSegmentClick(bucket.key, segment.key));
      track.append(piece);
    }

    const total = document.createElement("span");
    total.className = "bar-total";
    total.textContent = String(bucket.total);

    row.append(label, track, total);
    bars.append(row);
  }

  section.append(legend, bars);
  if (view.mode === "author_subtopic") {
    const note = document.createElement("p");
    note.className = "footnote";
    note.textContent =
      "a document matching several subtopics appears in each matching " +
      "segment; bar totals count it once";
    section.append(note);
  }
  return section;
}
