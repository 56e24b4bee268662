/**
 * Console state and its URL-query-string codec.
 *
 * The entire UI state round-trips through the query string so a session can
 * be shared or opened side by side in several windows with different filters.
 * Defaults are omitted from the encoded form, so a fresh console encodes to "".
 */

export const TRANSFORMATIONS = [
  "original_version",
  "stopword_removal",
  "lemmatized_version",
  "dictionary_filter",
] as const;

export const TABS = ["distribution", "timeline", "terms", "tagcloud"] as const;
export type Tab = (typeof TABS)[number];

export const GRANULARITIES = ["year", "month"] as const;
export type Granularity = (typeof GRANULARITIES)[number];

export const DEFAULT_LINK = "original_version+tfidf_vector+cosine";

export const WINDOW_MIN = 10;
export const WINDOW_MAX = 400;
export const K_TERMS_MIN = 1;
export const K_TERMS_MAX = 50;

export interface ConsoleState {
  /** facet name -> selected values (sorted, deduplicated, never empty) */
  facets: Record<string, string[]>;
  keywords: string;
  transformation: string;
  /** registered thesaurus name, or null when expansion is off */
  thesaurus: string | null;
  /** highlight window size in characters */
  window: number;
  /** similarity link graph name */
  link: string;
  /** minimum edge strength; -Infinity keeps every edge */
  threshold: number;
  tab: Tab;
  /** facet the distribution chart aggregates over */
  aggFacet: string;
  granularity: Granularity;
  kTerms: number;
  /** document whose highlights are shown, if any */
  selectedDoc: string | null;
}

export function defaultState(): ConsoleState {
  return {
    facets: {},
    keywords: "",
    transformation: "original_version",
    thesaurus: null,
    window: 80,
    link: DEFAULT_LINK,
    threshold: Number.NEGATIVE_INFINITY,
    tab: "distribution",
    aggFacet: "company",
    granularity: "year",
    kTerms: 10,
    selectedDoc: null,
  };
}

function clampInt(value: number, lo: number, hi: number, fallback: number): number {
  if (!Number.isFinite(value)) return fallback;
  return Math.min(hi, Math.max(lo, Math.trunc(value)));
}

/** Canonical form: facet values sorted/deduplicated, numbers clamped, enums validated. */
export function normalizeState(state: ConsoleState): ConsoleState {
  const defaults = defaultState();
  const facets: Record<string, string[]> = {};
  for (const name of Object.keys(state.facets).sort()) {
    const values = [...new Set(state.facets[name])].sort();
    if (name && values.length) facets[name] = values;
  }
  return {
    facets,
    keywords: state.keywords,
    transformation: (TRANSFORMATIONS as readonly string[]).includes(state.transformation)
      ? state.transformation
      : defaults.transformation,
    thesaurus: state.thesaurus || null,
    window: clampInt(state.window, WINDOW_MIN, WINDOW_MAX, defaults.window),
    link: state.link || defaults.link,
    threshold: typeof state.threshold === "number" && !Number.isNaN(state.threshold)
      ? state.threshold
      : defaults.threshold,
    tab: (TABS as readonly string[]).includes(state.tab) ? state.tab : defaults.tab,
    aggFacet: state.aggFacet || defaults.aggFacet,
    granularity: (GRANULARITIES as readonly string[]).includes(state.granularity)
      ? state.granularity
      : defaults.granularity,
    kTerms: clampInt(state.kTerms, K_TERMS_MIN, K_TERMS_MAX, defaults.kTerms),
    selectedDoc: state.selectedDoc || null,
  };
}

/**
 * Encode to a query string (no leading "?"). Facet selections become
 * `f.<name>=<v1>,<v2>` with each value percent-encoded before joining, so
 * values containing commas survive the round trip.
 */
export function encodeState(state: ConsoleState): string {
  const canonical = normalizeState(state);
  const defaults = defaultState();
  const params = new URLSearchParams();
  for (const name of Object.keys(canonical.facets)) {
    params.set(`f.${name}`, canonical.facets[name].map(encodeURIComponent).join(","));
  }
  if (canonical.keywords !== defaults.keywords) params.set("q", canonical.keywords);
  if (canonical.transformation !== defaults.transformation) params.set("tr", canonical.transformation);
  if (canonical.thesaurus !== null) params.set("th", canonical.thesaurus);
  if (canonical.window !== defaults.window) params.set("w", String(canonical.window));
  if (canonical.link !== defaults.link) params.set("link", canonical.link);
  if (Number.isFinite(canonical.threshold)) params.set("t", String(canonical.threshold));
  if (canonical.tab !== defaults.tab) params.set("tab", canonical.tab);
  if (canonical.aggFacet !== defaults.aggFacet) params.set("af", canonical.aggFacet);
  if (canonical.granularity !== defaults.granularity) params.set("g", canonical.granularity);
  if (canonical.kTerms !== defaults.kTerms) params.set("k", String(canonical.kTerms));
  if (canonical.selectedDoc !== null) params.set("doc", canonical.selectedDoc);
  return params.toString();
}

function decodeFacetValues(raw: string): string[] {
  const values: string[] = [];
  for (const part of raw.split(",")) {
    if (!part) continue;
    try {
      values.push(decodeURIComponent(part));
    } catch {
      values.push(part);
    }
  }
  return values;
}

/** Decode a query string (with or without leading "?"); unknown keys are ignored. */
export function decodeState(query: string): ConsoleState {
  const state = defaultState();
  const params = new URLSearchParams(query.startsWith("?") ? query.slice(1) : query);
  for (const [key, raw] of params) {
    if (key.startsWith("f.")) {
      const name = key.slice(2);
      const values = decodeFacetValues(raw);
      if (name && values.length) state.facets[name] = values;
      continue;
    }
    switch (key) {
      case "q":
        state.keywords = raw;
        break;
      case "tr":
        state.transformation = raw;
        break;
      case "th":
        state.thesaurus = raw || null;
        break;
      case "w":
        state.window = Number(raw);
        break;
      case "link":
        if (raw) state.link = raw;
        break;
      case "t": {
        const value = Number(raw);
        if (Number.isFinite(value)) state.threshold = value;
        break;
      }
      case "tab":
        state.tab = raw as Tab;
        break;
      case "af":
        if (raw) state.aggFacet = raw;
        break;
      case "g":
        state.granularity = raw as Granularity;
        break;
      case "k":
        state.kTerms = Number(raw);
        break;
      case "doc":
        state.selectedDoc = raw || null;
        break;
      default:
        break;
    }
  }
  return normalizeState(state);
}

export function statesEqual(a: ConsoleState, b: ConsoleState): boolean {
  return encodeState(a) === encodeState(b);
}
