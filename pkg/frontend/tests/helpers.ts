/** Mock API server used by the component tests: fixed payloads, call log. */

import type { FetchLike } from "../src/api.js";
import type { AggregateResponse, CommunitiesResponse, GraphResponse } from "../src/types.js";

export const DOC_IDS = Array.from({ length: 14 }, (_, i) => `d${String(i + 1).padStart(4, "0")}`);

export const AGG: AggregateResponse = {
  matched_ids: [...DOC_IDS],
  matched_count: 14,
  distribution: {
    corp01: 2,
    corp02: 2,
    corp03: 1,
    corp04: 1,
    corp05: 1,
    corp06: 1,
    corp07: 1,
    corp08: 1,
    corp09: 1,
    corp10: 1,
    corp11: 1,
    corp12: 1,
  },
  timeline: { "2015": 5, "2016": 4, "2017": 5 },
  top_terms: [
    ["alpha", 9.5],
    ["beta", 7.25],
    ["gamma", 3],
  ],
  tagcloud: [
    ["alpha", 4],
    ["beta", 2],
    ["gamma", 1],
    ["delta", 0.5],
  ],
};

/** Per-facet value -> count map served for panel bootstrap (k_terms=1 calls). */
export const FACET_VALUES: Record<string, Record<string, number>> = {
  company: AGG.distribution,
  category: { finance: 5, legal: 5, marketing: 4 },
  mime: { "application/pdf": 2, "text/plain": 12 },
  language: { en: 8, fr: 6 },
};

export const GRAPH: GraphResponse = {
  link_name: "original_version+tfidf_vector+cosine",
  nodes: DOC_IDS.slice(0, 6),
  edges: [
    ["d0001", "d0002", 0.9],
    ["d0001", "d0003", 0.7],
    ["d0002", "d0003", 0.8],
    ["d0004", "d0005", 0.6],
    ["d0003", "d0004", 0.2],
    ["d0005", "d0006", 0.1],
  ],
};

export const COMMUNITIES: CommunitiesResponse = {
  link_name: GRAPH.link_name,
  threshold: null,
  communities: [["d0001", "d0002", "d0003"], ["d0004", "d0005"], ["d0006"]],
  modularity: 0.4125,
};

export const SNIPPETS = [
  "le client signe le contrat avant la fin du mois",
  "le consommateur confirme la commande dans le rapport",
];

export interface RecordedCall {
  url: URL;
  method: string;
  body: unknown;
  signal: AbortSignal | null;
}

export type Responder = (url: URL, init?: RequestInit) => Response | Promise<Response>;

export interface MockServer {
  fetch: FetchLike;
  calls: RecordedCall[];
  callsTo(pathname: string): RecordedCall[];
  reset(): void;
  override(pathname: string, responder: Responder): void;
  clearOverride(pathname: string): void;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export function errorResponse(status: number, type: string, message: string): Response {
  return jsonResponse({ error: { type, message, correlation_id: "test-correlation" } }, status);
}

function facetBootstrap(facet: string | null): Response {
  if (!facet || !(facet in FACET_VALUES)) {
    return errorResponse(404, "UnknownFacet", `no physical link named ${facet}`);
  }
  const base: AggregateResponse = {
    ...AGG,
    distribution: FACET_VALUES[facet],
    top_terms: [],
    tagcloud: [],
  };
  return jsonResponse(base);
}

export function mockServer(): MockServer {
  const overrides = new Map<string, Responder>();
  const calls: RecordedCall[] = [];

  const fetchFn: FetchLike = async (input, init) => {
    const url = new URL(input, "http://testhost");
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
      signal: init?.signal ?? null,
    });

    const override = overrides.get(url.pathname);
    if (override) return override(url, init);

    switch (true) {
      case url.pathname === "/global-manifest":
        return jsonResponse({
          entries: [
            { name: "stopwords-en", location: "resources/stopwords-en.txt", type: "stopwords" },
            { name: "thesaurus-fr", location: "resources/thesaurus-fr.txt", type: "thesaurus" },
          ],
        });
      case url.pathname === "/documents":
        return jsonResponse({ ids: [...DOC_IDS], count: DOC_IDS.length });
      case url.pathname === "/aggregate":
        return url.searchParams.get("k_terms") === "1"
          ? facetBootstrap(url.searchParams.get("facet"))
          : jsonResponse(AGG);
      case url.pathname === "/highlights":
        return jsonResponse({ id: url.searchParams.get("id"), snippets: [...SNIPPETS] });
      case url.pathname.startsWith("/links/"):
        return jsonResponse(GRAPH);
      case url.pathname === "/communities": {
        const body = typeof init?.body === "string" ? (JSON.parse(init.body) as Record<string, unknown>) : {};
        const threshold = typeof body.threshold === "number" ? body.threshold : null;
        if (threshold !== null && threshold >= 0.95) {
          return jsonResponse({
            link_name: String(body.link ?? ""),
            threshold,
            communities: GRAPH.nodes.map((id) => [id]),
            modularity: 0,
          });
        }
        return jsonResponse({ ...COMMUNITIES, threshold, link_name: String(body.link ?? "") });
      }
      default:
        return errorResponse(404, "NotFound", `no route for ${url.pathname}`);
    }
  };

  return {
    fetch: fetchFn,
    calls,
    callsTo: (pathname) => calls.filter((call) => call.url.pathname.startsWith(pathname)),
    reset: () => {
      calls.length = 0;
    },
    override: (pathname, responder) => {
      overrides.set(pathname, responder);
    },
    clearOverride: (pathname) => {
      overrides.delete(pathname);
    },
  };
}
