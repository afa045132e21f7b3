/** Thin typed client over the JSON endpoints. The UI performs no
 * aggregation arithmetic: everything rendered comes out of these
 * payloads. */

import type { ChartMode, ExplorationState } from "./state";
import type {
  AggregatePayload,
  DocumentPayload,
  SearchPayload,
  TopicsPayload,
} from "./types";

/** Structural subset of fetch's Response — lets tests hand in plain
 * objects and production pass window.fetch unchanged. */
export interface JsonResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string) => Promise<JsonResponse>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export interface ApiClient {
  search(state: ExplorationState): Promise<SearchPayload>;
  aggregate(state: ExplorationState, mode: ChartMode): Promise<AggregatePayload>;
  topics(): Promise<TopicsPayload>;
  document(id: string): Promise<DocumentPayload>;
}

function filterParams(state: ExplorationState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.queryText.trim()) params.set("q", state.queryText);
  for (const author of state.authors) params.append("author", author);
  for (const kind of state.kinds) params.append("kind", kind);
  for (const topic of state.topics) params.append("topic", topic);
  if (state.yearFrom !== null) params.set("yearFrom", String(state.yearFrom));
  if (state.yearTo !== null) params.set("yearTo", String(state.yearTo));
  return params;
}

export function makeClient(fetchFn: FetchLike, base = ""): ApiClient {
  async function getJson(path: string): Promise<unknown> {
    const response = await fetchFn(base + path);
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        const payload = (await response.json()) as { error?: unknown };
        if (typeof payload?.error === "string") message = payload.error;
      } catch {
        // body was not JSON; keep the status message
      }
      throw new ApiError(response.status, message);
    }
    return response.json();
  }

  return {
    async search(state) {
      const params = filterParams(state);
      if (state.page > 0) params.set("page", String(state.page));
      return (await getJson(`/api/search?${params}`)) as SearchPayload;
    },
    async aggregate(state, mode) {
      const params = filterParams(state);
      params.set("mode", mode.mode);
      if (mode.parentTopic) params.set("parentTopic", mode.parentTopic);
      return (await getJson(`/api/aggregate?${params}`)) as AggregatePayload;
    },
    async topics() {
      return (await getJson("/api/topics")) as TopicsPayload;
    },
    async document(id) {
      const path = `/api/documents/${encodeURIComponent(id)}`;
      return (await getJson(path)) as DocumentPayload;
    },
  };
}
