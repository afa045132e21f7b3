/** Payload shapes of the JSON API, mirrored field for field. */

export interface SearchHit {
  docId: string;
  score: number;
  title: string;
  author: string;
  date: string;
  kind: string;
  snippet: string;
}

export interface FacetEntry {
  topicId: string;
  count: number;
}

export interface SearchPayload {
  totalCount: number;
  hits: SearchHit[];
  topicFacet: FacetEntry[];
}

export interface Segment {
  key: string;
  count: number;
}

export interface AggregateBucket {
  key: string;
  total: number;
  segments: Segment[];
}

export interface AggregatePayload {
  mode: string;
  parentTopic: string | null;
  buckets: AggregateBucket[];
}

export interface TopicInfo {
  id: string;
  label: string;
  parents: string[];
  children: string[];
}

export interface TopicsPayload {
  topics: TopicInfo[];
}

export interface DocumentPayload {
  id: string;
  title: string;
  author: string;
  date: string;
  kind: string;
  text: string;
  topics: string[];
}
