import { describe, expect, it } from "vitest";

import { mulberry32 } from "../src/prng.js";
import {
  GRANULARITIES,
  TABS,
  TRANSFORMATIONS,
  decodeState,
  defaultState,
  encodeState,
  normalizeState,
  statesEqual,
  type ConsoleState,
} from "../src/state.js";

describe("state codec", () => {
  it("encodes the default state to an empty query string", () => {
    expect(encodeState(defaultState())).toBe("");
  });

  it("decodes an empty query string to the default state", () => {
    expect(decodeState("")).toEqual(defaultState());
    expect(decodeState("?")).toEqual(defaultState());
  });

  it("round-trips a fully populated state", () => {
    const state: ConsoleState = {
      facets: { company: ["corp03", "corp07"], language: ["en"] },
      keywords: "client contrat",
      transformation: "stopword_removal",
      thesaurus: "thesaurus-fr",
      window: 120,
      link: "stopword_removal+tfidf_vector+chi_square",
      threshold: 0.35,
      tab: "timeline",
      aggFacet: "category",
      granularity: "month",
      kTerms: 5,
      selectedDoc: "d0002",
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("keeps the 'keep all edges' threshold out of the URL and restores it", () => {
    const state = defaultState();
    expect(Number.isFinite(state.threshold)).toBe(false);
    expect(encodeState(state)).not.toContain("t=");
    expect(decodeState(encodeState(state)).threshold).toBe(Number.NEGATIVE_INFINITY);
  });

  it("survives facet values containing commas, spaces, and percent signs", () => {
    const state = normalizeState({
      ...defaultState(),
      facets: { mime: ["text/plain", "a,b", "50% off", "naïve café"] },
    });
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("ignores unknown query keys and malformed numbers", () => {
    const decoded = decodeState("?mystery=1&w=bogus&k=NaN&t=not-a-number");
    expect(decoded).toEqual(defaultState());
  });

  it("rejects out-of-range enums back to defaults", () => {
    const decoded = decodeState("?tab=pie&g=decade&tr=backwards_version");
    expect(decoded.tab).toBe(defaultState().tab);
    expect(decoded.granularity).toBe(defaultState().granularity);
    expect(decoded.transformation).toBe(defaultState().transformation);
  });

  it("canonicalizes facet values: sorted, deduplicated, empty lists dropped", () => {
    const normalized = normalizeState({
      ...defaultState(),
      facets: { company: ["zeta", "alpha", "zeta"], language: [] },
    });
    expect(normalized.facets).toEqual({ company: ["alpha", "zeta"] });
  });

  it("round-trips 300 randomized states exactly", () => {
    const rand = mulberry32(0xc0ffee);
    const pick = <T>(items: readonly T[]): T => items[Math.floor(rand() * items.length)];
    const word = () => {
      const alphabet = "abcdefghijklmnopqrstuvwxyzéü,%& ?=+/";
      let out = "";
      const length = 1 + Math.floor(rand() * 8);
      for (let i = 0; i < length; i++) out += alphabet[Math.floor(rand() * alphabet.length)];
      return out;
    };
    for (let trial = 0; trial < 300; trial++) {
      const facets: Record<string, string[]> = {};
      const facetCount = Math.floor(rand() * 3);
      for (let i = 0; i < facetCount; i++) {
        const name = `facet${Math.floor(rand() * 5)}`;
        facets[name] = Array.from({ length: 1 + Math.floor(rand() * 3) }, word);
      }
      const state = normalizeState({
        facets,
        keywords: rand() < 0.5 ? word() : "",
        transformation: pick(TRANSFORMATIONS),
        thesaurus: rand() < 0.3 ? `thesaurus-${word()}` : null,
        window: 10 + Math.floor(rand() * 390),
        link: rand() < 0.5 ? `${pick(TRANSFORMATIONS)}+tfidf_vector+cosine` : word(),
        threshold: rand() < 0.3 ? Number.NEGATIVE_INFINITY : rand() * 2 - 0.5,
        tab: pick(TABS),
        aggFacet: word(),
        granularity: pick(GRANULARITIES),
        kTerms: 1 + Math.floor(rand() * 49),
        selectedDoc: rand() < 0.5 ? word() : null,
      });
      const query = encodeState(state);
      const decoded = decodeState(query);
      expect(decoded).toEqual(state);
      expect(statesEqual(decoded, state)).toBe(true);
    }
  });
});
