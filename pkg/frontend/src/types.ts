/** Response payloads of the JSON API the console consumes. */

export interface DocumentsResponse {
  ids: string[];
  count: number;
}

export interface AggregateResponse {
  matched_ids: string[];
  matched_count: number;
  /** facet value -> document count */
  distribution: Record<string, number>;
  /** time bucket (year or month) -> document count */
  timeline: Record<string, number>;
  /** [term, summed weight], already ranked by the server */
  top_terms: [string, number][];
  /** [term, mean weight], already ranked by the server */
  tagcloud: [string, number][];
}

export interface HighlightsResponse {
  id: string;
  snippets: string[];
}

export interface GraphResponse {
  link_name: string;
  nodes: string[];
  /** [id_a, id_b, strength] with id_a < id_b */
  edges: [string, string, number][];
}

export interface CommunitiesResponse {
  link_name: string;
  /** null when the server kept every edge (no finite threshold) */
  threshold: number | null;
  communities: string[][];
  modularity: number;
}

export interface GlobalManifestEntry {
  name: string;
  location: string;
  type: string;
}

export interface GlobalManifestResponse {
  entries: GlobalManifestEntry[];
}

export interface ApiErrorBody {
  error: {
    type: string;
    message: string;
    correlation_id: string;
  };
}
