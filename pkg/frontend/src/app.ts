/** Controller: owns the exploration state, keeps it in the URL, fetches
 * search + aggregation for every state change (latest state wins over
 * stale responses), and wires the components' click handlers to filter
 * mutations. */

import { ApiError } from "./api";
import type { ApiClient } from "./api";
import { renderBreadcrumbs } from "./breadcrumbs";
import type { BreadcrumbHandlers } from "./breadcrumbs";
import { GENERAL_SEGMENT, renderChart } from "./chart";
import type { ChartHandlers } from "./chart";
import { renderDocumentDetail } from "./detail";
import { renderFacets } from "./facets";
import type { FacetHandlers } from "./facets";
import { renderResults } from "./results";
import type { ResultsHandlers } from "./results";
import {
  addFilter,
  deriveChartMode,
  fromQueryString,
  hasAnyParameter,
  initialState,
  removeFilter,
  toQueryString,
  withOrientation,
  withPage,
  withQueryText,
  withYearRange,
} from "./state";
import type { ExplorationState } from "./state";
import type { AggregatePayload, SearchPayload } from "./types";

/** The slice of window the app touches, injectable for tests. */
export interface WindowLike {
  location: { pathname: string; search: string };
  history: {
    pushState(data: unknown, unused: string, url?: string | null): void;
  };
  addEventListener(type: "popstate", listener: () => void): void;
}

function errorMessage(reason: unknown): string {
  return reason instanceof ApiError ? reason.message : "request failed";
}

export class App {
  private current: ExplorationState = initialState();
  private seq = 0;
  private pending: Promise<void> = Promise.resolve();
  private topicsWithChildren: ReadonlySet<string> = new Set();
  private topicLabels: ReadonlyMap<string, string> = new Map();
  private lastSearch: SearchPayload | null = null;
  private lastAggregate: AggregatePayload | null = null;
  private searchError: string | null = null;
  private aggregateError: string | null = null;

  private searchInput!: HTMLInputElement;
  private crumbArea!: HTMLElement;
  private chartArea!: HTMLElement;
  private facetArea!: HTMLElement;
  private resultsArea!: HTMLElement;
  private detailArea!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    private readonly win: WindowLike,
  ) {}

  get state(): ExplorationState {
    return this.current;
  }

  /** Resolves when the most recently scheduled work has settled. */
  whenIdle(): Promise<void> {
    return this.pending;
  }

  async start(): Promise<void> {
    this.buildShell();
    try {
      const payload = await this.client.topics();
      this.topicsWithChildren = new Set(
        payload.topics.filter((t) => t.children.length > 0).map((t) => t.id));
      this.topicLabels = new Map(
        payload.topics.map((t) => [t.id, t.label]));
    } catch {
      // taxonomy labels degrade to raw ids; exploration still works
    }
    this.current = fromQueryString(this.win.location.search);
    this.win.addEventListener("popstate", () => {
      this.current = fromQueryString(this.win.location.search);
      this.searchInput.value = this.current.queryText;
      this.scheduleRefresh();
    });
    this.searchInput.value = this.current.queryText;
    this.scheduleRefresh();
    await this.whenIdle();
  }

  // ------------------------------------------------------------- shell

  private buildShell(): void {
    this.root.replaceChildren();

    const header = document.createElement("header");
    const form = document.createElement("form");
    form.className = "search";
    this.searchInput = document.createElement("input");
    this.searchInput.type = "search";
    this.searchInput.name = "q";
    this.searchInput.setAttribute("aria-label", "search query");
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "search";
    form.append(this.searchInput, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.apply(withQueryText(this.current, this.searchInput.value));
    });

    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "orientation-toggle";
    toggle.textContent = "flip axes";
    toggle.addEventListener("click", () => {
      const next = this.current.orientation === "vertical"
        ? "horizontal" : "vertical";
      // Pure presentation: re-render from the cached payloads.
      this.apply(withOrientation(this.current, next), { refetch: false });
    });
    header.append(form, toggle);

    this.crumbArea = document.createElement("div");
    this.crumbArea.className = "crumb-area";
    this.chartArea = document.createElement("div");
    this.chartArea.className = "chart-area";
    this.facetArea = document.createElement("div");
    this.facetArea.className = "facet-area";
    this.resultsArea = document.createElement("div");
    this.resultsArea.className = "results-area";
    this.detailArea = document.createElement("div");
    this.detailArea.className = "detail-area";
    this.detailArea.hidden = true;

    const main = document.createElement("main");
    main.append(this.chartArea, this.facetArea, this.resultsArea,
                this.detailArea);
    this.root.append(header, this.crumbArea, main);
  }

  // ------------------------------------------------------ state changes

  private apply(next: ExplorationState,
                { refetch = true } = {}): void {
    this.current = next;
    const query = toQueryString(next);
    const url = query
      ? `${this.win.location.pathname}?${query}`
      : this.win.location.pathname;
    this.win.history.pushState(null, "", url);
    if (refetch) {
      this.scheduleRefresh();
    } else {
      this.renderAll();
    }
  }

  private scheduleRefresh(): void {
    this.pending = this.refresh();
  }

  private async refresh(): Promise<void> {
    const seq = ++this.seq;
    const snapshot = this.current;
    if (!hasAnyParameter(snapshot)) {
      this.lastSearch = null;
      this.lastAggregate = null;
      this.searchError = null;
      this.aggregateError = null;
      this.renderAll();
      return;
    }
    const mode = deriveChartMode(snapshot, this.topicsWithChildren);
    const [search, aggregate] = await Promise.allSettled([
      this.client.search(snapshot),
      this.client.aggregate(snapshot, mode),
    ]);
    if (seq !== this.seq) {
      return; // a newer state superseded this fetch; drop it
    }
    this.lastSearch = search.status === "fulfilled" ? search.value : null;
    this.searchError =
      search.status === "rejected" ? errorMessage(search.reason) : null;
    this.lastAggregate =
      aggregate.status === "fulfilled" ? aggregate.value : null;
    this.aggregateError =
      aggregate.status === "rejected"
        ? errorMessage(aggregate.reason) : null;
    this.renderAll();
  }

  // ----------------------------------------------------------- handlers

  private readonly chartHandlers: ChartHandlers = {
    onBarClick: (bucketKey) =>
      this.apply(this.afterBucketClick(this.current, bucketKey)),
    onSegmentClick: (bucketKey, segmentKey) => {
      let next = this.afterBucketClick(this.current, bucketKey);
      if (this.renderedMode() === "author_subtopic") {
        if (segmentKey !== GENERAL_SEGMENT) {
          next = addFilter(next, "topics", segmentKey);
        }
      } else {
        next = addFilter(next, "kinds", segmentKey);
      }
      this.apply(next);
    },
  };

  /** Mode of the chart actually on screen, which is what was clicked. */
  private renderedMode(): string {
    return this.lastAggregate?.mode ??
      deriveChartMode(this.current, this.topicsWithChildren).mode;
  }

  private afterBucketClick(
    state: ExplorationState, bucketKey: string): ExplorationState {
    if (this.renderedMode() === "year_kind") {
      const year = Number.parseInt(bucketKey, 10);
      return withYearRange(state, year, year);
    }
    return addFilter(state, "authors", bucketKey);
  }

  private readonly facetHandlers: FacetHandlers = {
    onTopicClick: (topicId) =>
      this.apply(addFilter(this.current, "topics", topicId)),
  };

  private readonly crumbHandlers: BreadcrumbHandlers = {
    onRemoveFilter: (dimension, value) =>
      this.apply(removeFilter(this.current, dimension, value)),
    onClearYearRange: () =>
      this.apply(withYearRange(this.current, null, null)),
  };

  private readonly resultsHandlers: ResultsHandlers = {
    onPageChange: (page) => this.apply(withPage(this.current, page)),
    onHitClick: (docId) => {
      this.pending = this.openDocument(docId);
    },
  };

  private async openDocument(docId: string): Promise<void> {
    try {
      const doc = await this.client.document(docId);
      this.detailArea.replaceChildren(
        renderDocumentDetail(doc, this.topicLabels, () => {
          this.detailArea.replaceChildren();
          this.detailArea.hidden = true;
        }));
      this.detailArea.hidden = false;
    } catch (reason) {
      const error = document.createElement("p");
      error.className = "error";
      error.textContent = errorMessage(reason);
      this.detailArea.replaceChildren(error);
      this.detailArea.hidden = false;
    }
  }

  // ---------------------------------------------------------- rendering

  private renderAll(): void {
    this.crumbArea.replaceChildren(
      renderBreadcrumbs(this.current, this.topicLabels, this.crumbHandlers));

    if (!hasAnyParameter(this.current)) {
      this.chartArea.replaceChildren(
        placeholder("search or pick a filter to explore the corpus"));
      this.facetArea.replaceChildren();
      this.resultsArea.replaceChildren();
      return;
    }

    if (this.aggregateError !== null) {
      this.chartArea.replaceChildren(errorNode(this.aggregateError));
    } else if (this.lastAggregate !== null) {
      this.chartArea.replaceChildren(renderChart(
        this.lastAggregate, this.current.orientation, this.chartHandlers));
    }

    if (this.searchError !== null) {
      this.facetArea.replaceChildren();
      this.resultsArea.replaceChildren(errorNode(this.searchError));
    } else if (this.lastSearch !== null) {
      this.facetArea.replaceChildren(renderFacets(
        this.lastSearch.topicFacet, this.topicLabels, this.facetHandlers));
      this.resultsArea.replaceChildren(renderResults(
        this.lastSearch, this.current.page, this.resultsHandlers));
    }
  }
}

function placeholder(text: string): HTMLElement {
  const node = document.createElement("p");
  node.className = "placeholder";
  node.textContent = text;
  return node;
}

function errorNode(text: string): HTMLElement {
  const node = document.createElement("p");
  node.className = "error";
  node.textContent = text;
  return node;
}
