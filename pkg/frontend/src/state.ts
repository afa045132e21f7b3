/** Exploration state: everything the UI shows is a function of this
 * object plus API responses. The whole state serializes into the URL
 * query string so any view is shareable and the back button works. */

export type Orientation = "vertical" | "horizontal";

export type FilterDimension = "authors" | "kinds" | "topics";

export interface ExplorationState {
  readonly queryText: string;
  readonly authors: readonly string[];
  readonly kinds: readonly string[];
  readonly topics: readonly string[];
  readonly yearFrom: number | null;
  readonly yearTo: number | null;
  readonly orientation: Orientation;
  readonly page: number;
}

export function initialState(): ExplorationState {
  return {
    queryText: "",
    authors: [],
    kinds: [],
    topics: [],
    yearFrom: null,
    yearTo: null,
    orientation: "vertical",
    page: 0,
  };
}

/** The server rejects requests that name nothing at all; the UI shows a
 * prompt instead of calling it. */
export function hasAnyParameter(state: ExplorationState): boolean {
  return (
    state.queryText.trim().length > 0 ||
    state.authors.length > 0 ||
    state.kinds.length > 0 ||
    state.topics.length > 0 ||
    state.yearFrom !== null ||
    state.yearTo !== null
  );
}

export interface ChartMode {
  readonly mode: "author_kind" | "year_kind" | "author_subtopic";
  readonly parentTopic?: string;
}

/** Chart mode is derived, never user-selected: the per-year view appears
 * when exactly one author is filtered, the subtopic view when exactly one
 * topic with children is; a single author wins when both hold. */
export function deriveChartMode(
  state: ExplorationState,
  topicsWithChildren: ReadonlySet<string>,
): ChartMode {
  if (state.authors.length === 1) {
    return { mode: "year_kind" };
  }
  if (state.topics.length === 1 && topicsWithChildren.has(state.topics[0])) {
    return { mode: "author_subtopic", parentTopic: state.topics[0] };
  }
  return { mode: "author_kind" };
}

// ------------------------------------------------------------- mutations
// Every mutation returns to the first page: a changed query or filter set
// makes the old page offset meaningless.

export function withQueryText(
  state: ExplorationState, queryText: string): ExplorationState {
  return { ...state, queryText, page: 0 };
}

export function addFilter(
  state: ExplorationState, dimension: FilterDimension,
  value: string): ExplorationState {
  const values = state[dimension];
  return {
    ...state,
    [dimension]: values.includes(value) ? values : [...values, value],
    page: 0,
  };
}

export function removeFilter(
  state: ExplorationState, dimension: FilterDimension,
  value: string): ExplorationState {
  return {
    ...state,
    [dimension]: state[dimension].filter((v) => v !== value),
    page: 0,
  };
}

export function withYearRange(
  state: ExplorationState, yearFrom: number | null,
  yearTo: number | null): ExplorationState {
  return { ...state, yearFrom, yearTo, page: 0 };
}

export function withPage(
  state: ExplorationState, page: number): ExplorationState {
  return { ...state, page: Math.max(0, page) };
}

export function withOrientation(
  state: ExplorationState, orientation: Orientation): ExplorationState {
  return { ...state, orientation };
}

// ----------------------------------------------------- URL serialization

export function toQueryString(state: ExplorationState): string {
  const params = new URLSearchParams();
  if (state.queryText) params.set("q", state.queryText);
  for (const author of state.authors) params.append("author", author);
  for (const kind of state.kinds) params.append("kind", kind);
  for (const topic of state.topics) params.append("topic", topic);
  if (state.yearFrom !== null) params.set("yearFrom", String(state.yearFrom));
  if (state.yearTo !== null) params.set("yearTo", String(state.yearTo));
  if (state.page > 0) params.set("page", String(state.page));
  if (state.orientation !== "vertical") {
    params.set("orientation", state.orientation);
  }
  return params.toString();
}

function intOrNull(value: string | null): number | null {
  if (value === null) return null;
  const parsed = Number.parseInt(value, 10);
  return Number.isFinite(parsed) ? parsed : null;
}

function unique(values: string[]): string[] {
  return [...new Set(values)];
}

export function fromQueryString(search: string): ExplorationState {
  const params = new URLSearchParams(
    search.startsWith("?") ? search.slice(1) : search);
  return {
    queryText: params.get("q") ?? "",
    authors: unique(params.getAll("author")),
    kinds: unique(params.getAll("kind")),
    topics: unique(params.getAll("topic")),
    yearFrom: intOrNull(params.get("yearFrom")),
    yearTo: intOrNull(params.get("yearTo")),
    page: Math.max(0, intOrNull(params.get("page")) ?? 0),
    orientation:
      params.get("orientation") === "horizontal" ? "horizontal" : "vertical",
  };
}
