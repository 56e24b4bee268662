/**
 * Typed client for the JSON API with latest-wins request groups: issuing a
 * request in a group aborts the group's in-flight predecessor, and a response
 * that was superseded while in flight resolves to CANCELLED instead of data.
 */

import type { ConsoleState } from "./state.js";
import type {
  AggregateResponse,
  ApiErrorBody,
  CommunitiesResponse,
  DocumentsResponse,
  GlobalManifestResponse,
  GraphResponse,
  HighlightsResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export const CANCELLED: unique symbol = Symbol("request-superseded");
export type Cancelled = typeof CANCELLED;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly type: string,
    message: string,
    readonly correlationId?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Filter parameters shared by /documents and /aggregate. */
function filterParams(state: ConsoleState): URLSearchParams {
  const params = new URLSearchParams();
  for (const name of Object.keys(state.facets).sort()) {
    for (const value of state.facets[name]) params.append(name, value);
  }
  const keywords = state.keywords.trim();
  if (keywords) params.set("keywords", keywords);
  params.set("transformation", state.transformation);
  if (state.thesaurus) params.set("thesaurus", state.thesaurus);
  return params;
}

export class ApiClient {
  private readonly controllers = new Map<string, AbortController>();

  constructor(
    private readonly base = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** Abort the in-flight request of a group, if any. */
  cancel(group: string): void {
    this.controllers.get(group)?.abort();
    this.controllers.delete(group);
  }

  private async request<T>(group: string, path: string, init?: RequestInit): Promise<T | Cancelled> {
    this.controllers.get(group)?.abort();
    const controller = new AbortController();
    this.controllers.set(group, controller);

    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, { ...init, signal: controller.signal });
    } catch (err) {
      if (controller.signal.aborted || (err instanceof Error && err.name === "AbortError")) {
        return CANCELLED;
      }
      throw err;
    }
    if (controller.signal.aborted) return CANCELLED;

    const body: unknown = await response.json().catch(() => null);
    if (controller.signal.aborted) return CANCELLED;

    if (!response.ok) {
      const detail = (body as ApiErrorBody | null)?.error;
      throw new ApiError(
        response.status,
        detail?.type ?? "HttpError",
        detail?.message ?? `HTTP ${response.status}`,
        detail?.correlation_id,
      );
    }
    return body as T;
  }

  documents(state: ConsoleState): Promise<DocumentsResponse | Cancelled> {
    return this.request("documents", `/documents?${filterParams(state)}`);
  }

  aggregate(state: ConsoleState): Promise<AggregateResponse | Cancelled> {
    const params = filterParams(state);
    params.set("facet", state.aggFacet);
    params.set("granularity", state.granularity);
    params.set("k_terms", String(state.kTerms));
    return this.request("aggregate", `/aggregate?${params}`);
  }

  /** One-off unfiltered aggregate used to discover a facet's values. */
  facetOptions(facet: string): Promise<AggregateResponse | Cancelled> {
    const params = new URLSearchParams({ facet, k_terms: "1" });
    return this.request(`facet-options:${facet}`, `/aggregate?${params}`);
  }

  highlights(
    docId: string,
    terms: string,
    windowSize: number,
    transformation: string,
    thesaurus: string | null,
  ): Promise<HighlightsResponse | Cancelled> {
    const params = new URLSearchParams({
      id: docId,
      terms,
      window: String(windowSize),
      label: `${transformation}+classic_presentation`,
    });
    if (thesaurus) params.set("thesaurus", thesaurus);
    return this.request("highlights", `/highlights?${params}`);
  }

  communities(link: string, threshold: number): Promise<CommunitiesResponse | Cancelled> {
    const body: Record<string, unknown> = { link };
    if (Number.isFinite(threshold)) body.threshold = threshold;
    return this.request("communities", "/communities", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  linkGraph(name: string): Promise<GraphResponse | Cancelled> {
    return this.request("structure", `/links/${encodeURIComponent(name)}`);
  }

  globalManifest(): Promise<GlobalManifestResponse | Cancelled> {
    return this.request("global-manifest", "/global-manifest");
  }
}
