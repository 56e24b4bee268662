/**
 * Console controller.
 *
 * Owns the ConsoleState, mirrors every change into the URL query string, and
 * refetches exactly the API resources a change invalidates:
 *
 *   facets / keywords / transformation / thesaurus  -> /documents, /aggregate
 *   aggFacet / granularity / kTerms                 -> /aggregate
 *   link                                            -> /links/{name}, /communities
 *   threshold                                       -> /communities
 *   keywords / transformation / thesaurus / window
 *     / selectedDoc (when a keyword is set)         -> /highlights
 *
 * Each resource uses a latest-wins fetch group, so a stale in-flight response
 * never overwrites a newer one. All analytics values shown are taken verbatim
 * from API responses.
 */

import { ApiClient, ApiError, CANCELLED } from "./api.js";
import { renderDistribution, renderTagCloud, renderTimeline, renderTopTerms } from "./charts.js";
import { clear, el } from "./dom.js";
import { renderFacetPanel, type FacetOptions } from "./facets.js";
import { renderCommunityGraph } from "./graph.js";
import { renderHighlightList } from "./highlights.js";
import {
  GRANULARITIES,
  K_TERMS_MAX,
  K_TERMS_MIN,
  TABS,
  TRANSFORMATIONS,
  WINDOW_MAX,
  WINDOW_MIN,
  defaultState,
  encodeState,
  normalizeState,
  type ConsoleState,
  type Granularity,
  type Tab,
} from "./state.js";
import type {
  AggregateResponse,
  CommunitiesResponse,
  DocumentsResponse,
  GraphResponse,
  HighlightsResponse,
} from "./types.js";

/** Physical links probed at startup to build the filter panel. */
export const FACET_CANDIDATES = ["company", "category", "mime", "language"] as const;

const DOC_LIST_LIMIT = 150;

type StateKey = keyof ConsoleState;

const DOCUMENT_KEYS: readonly StateKey[] = ["facets", "keywords", "transformation", "thesaurus"];
const AGGREGATE_KEYS: readonly StateKey[] = [...DOCUMENT_KEYS, "aggFacet", "granularity", "kTerms"];
const STRUCTURE_KEYS: readonly StateKey[] = ["link"];
const COMMUNITY_KEYS: readonly StateKey[] = ["link", "threshold"];
const HIGHLIGHT_KEYS: readonly StateKey[] = [
  "keywords",
  "transformation",
  "thesaurus",
  "window",
  "selectedDoc",
];

interface DirtyGroups {
  documents?: boolean;
  aggregate?: boolean;
  structure?: boolean;
  communities?: boolean;
  highlights?: boolean;
}

type UrlSink = (query: string) => void;
type Pane = "filters" | "main" | "graph" | "highlights";
type Resource = "bootstrap" | "documents" | "aggregate" | "structure" | "communities" | "highlights";

const RESOURCE_PANE: Record<Resource, Pane> = {
  bootstrap: "filters",
  documents: "main",
  aggregate: "main",
  structure: "graph",
  communities: "graph",
  highlights: "highlights",
};

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.type}: ${err.message}`;
  if (err instanceof Error) return err.message;
  return String(err);
}

function sameValue(a: unknown, b: unknown): boolean {
  if (typeof a === "object" && a !== null) return JSON.stringify(a) === JSON.stringify(b);
  return Object.is(a, b);
}

export class ConsoleApp {
  state: ConsoleState;

  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private readonly urlSink: UrlSink;

  private facetOptions: FacetOptions[] = [];
  private thesaurusName: string | null = null;
  private documents: DocumentsResponse | null = null;
  private aggregate: AggregateResponse | null = null;
  private structure: GraphResponse | null = null;
  private communities: CommunitiesResponse | null = null;
  private highlights: HighlightsResponse | null = null;

  /** Latest error message per API resource; a pane banner shows its union. */
  private readonly errors = new Map<Resource, string>();
  private readonly pending = new Set<Promise<unknown>>();
  private ui!: {
    banners: Record<Pane, HTMLElement>;
    facetPanel: HTMLElement;
    keywordInput: HTMLInputElement;
    transformationSelect: HTMLSelectElement;
    thesaurusToggle: HTMLInputElement;
    thesaurusLabel: HTMLElement;
    docCount: HTMLElement;
    docList: HTMLElement;
    tabs: HTMLElement;
    chartArea: HTMLElement;
    aggFacetSelect: HTMLSelectElement;
    granularitySelect: HTMLSelectElement;
    kTermsInput: HTMLInputElement;
    tagcloudArea: HTMLElement;
    highlightsPane: HTMLElement;
    windowSlider: HTMLInputElement;
    windowValue: HTMLElement;
    highlightsArea: HTMLElement;
    linkInput: HTMLInputElement;
    thresholdSlider: HTMLInputElement;
    thresholdValue: HTMLElement;
    modularityLine: HTMLElement;
    graphArea: HTMLElement;
  };

  constructor(root: HTMLElement, api: ApiClient, initial?: ConsoleState, urlSink: UrlSink = () => {}) {
    this.root = root;
    this.api = api;
    this.state = normalizeState(initial ?? defaultState());
    this.urlSink = urlSink;
    this.buildSkeleton();
    this.syncControls();
  }

  /** Bootstrap resources, then load everything the current state asks for. */
  async init(): Promise<void> {
    await this.track(this.bootstrap());
    await this.refetch({
      documents: true,
      aggregate: true,
      structure: true,
      communities: true,
      highlights: true,
    });
    await this.whenIdle();
  }

  /** Merge a change into the state, update the URL, refetch what it dirtied. */
  update(patch: Partial<ConsoleState>): Promise<void> {
    const previous = this.state;
    const next = normalizeState({ ...previous, ...patch });
    this.state = next;

    const changed = new Set<StateKey>();
    for (const key of Object.keys(next) as StateKey[]) {
      if (!sameValue(previous[key], next[key])) changed.add(key);
    }

    this.urlSink(encodeState(next));
    this.syncControls();
    if (changed.has("tab")) this.renderCharts();
    if (changed.has("selectedDoc")) this.renderDocuments();

    const touches = (keys: readonly StateKey[]) => keys.some((key) => changed.has(key));
    return this.refetch({
      documents: touches(DOCUMENT_KEYS),
      aggregate: touches(AGGREGATE_KEYS),
      structure: touches(STRUCTURE_KEYS),
      communities: touches(COMMUNITY_KEYS),
      highlights: touches(HIGHLIGHT_KEYS),
    });
  }

  /** Adopt a full state (e.g. after history navigation). */
  replaceState(state: ConsoleState): Promise<void> {
    return this.update(state);
  }

  /** Resolves once every in-flight request has settled. */
  async whenIdle(): Promise<void> {
    while (this.pending.size) {
      await Promise.all([...this.pending]);
      await Promise.resolve();
    }
  }

  // -- fetching ---------------------------------------------------------

  private track<T>(promise: Promise<T>): Promise<T> {
    this.pending.add(promise);
    void promise.finally(() => this.pending.delete(promise));
    return promise;
  }

  private refetch(dirty: DirtyGroups): Promise<void> {
    const jobs: Promise<unknown>[] = [];
    if (dirty.documents) jobs.push(this.track(this.loadDocuments()));
    if (dirty.aggregate) jobs.push(this.track(this.loadAggregate()));
    if (dirty.structure) jobs.push(this.track(this.loadStructure()));
    if (dirty.communities) jobs.push(this.track(this.loadCommunities()));
    if (dirty.highlights) jobs.push(this.track(this.loadHighlights()));
    return Promise.allSettled(jobs).then(() => undefined);
  }

  private async bootstrap(): Promise<void> {
    try {
      const manifest = await this.api.globalManifest();
      if (manifest !== CANCELLED) {
        const entry = manifest.entries.find((candidate) => candidate.type === "thesaurus");
        this.thesaurusName = entry ? entry.name : null;
      }
    } catch (err) {
      this.banner("bootstrap", describeError(err));
    }
    const options: FacetOptions[] = [];
    for (const name of FACET_CANDIDATES) {
      try {
        const response = await this.api.facetOptions(name);
        if (response === CANCELLED) continue;
        const values = Object.entries(response.distribution)
          .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
          .map(([value, count]) => ({ value, count }));
        options.push({ name, values });
      } catch {
        // facet not present in this store; leave it off the panel
      }
    }
    this.facetOptions = options;
    this.renderFacets();
    this.syncControls();
  }

  private async loadDocuments(): Promise<void> {
    try {
      const response = await this.api.documents(this.state);
      if (response === CANCELLED) return;
      this.documents = response;
      this.banner("documents", null);
      this.renderDocuments();
    } catch (err) {
      this.banner("documents", describeError(err));
    }
  }

  private async loadAggregate(): Promise<void> {
    try {
      const response = await this.api.aggregate(this.state);
      if (response === CANCELLED) return;
      this.aggregate = response;
      this.banner("aggregate", null);
      this.renderCharts();
      this.renderTagcloudPane();
    } catch (err) {
      this.banner("aggregate", describeError(err));
    }
  }

  private async loadStructure(): Promise<void> {
    try {
      const response = await this.api.linkGraph(this.state.link);
      if (response === CANCELLED) return;
      this.structure = response;
      this.banner("structure", null);
      this.renderGraph();
    } catch (err) {
      this.structure = null;
      this.renderGraph();
      this.banner("structure", describeError(err));
    }
  }

  private async loadCommunities(): Promise<void> {
    try {
      const response = await this.api.communities(this.state.link, this.state.threshold);
      if (response === CANCELLED) return;
      this.communities = response;
      this.banner("communities", null);
      this.renderGraph();
    } catch (err) {
      this.communities = null;
      this.renderGraph();
      this.banner("communities", describeError(err));
    }
  }

  private async loadHighlights(): Promise<void> {
    const terms = this.state.keywords.trim();
    if (!terms || !this.state.selectedDoc) {
      this.api.cancel("highlights");
      this.highlights = null;
      this.banner("highlights", null);
      this.renderHighlightsPane();
      return;
    }
    try {
      const response = await this.api.highlights(
        this.state.selectedDoc,
        terms,
        this.state.window,
        this.state.transformation,
        this.state.thesaurus,
      );
      if (response === CANCELLED) return;
      this.highlights = response;
      this.banner("highlights", null);
      this.renderHighlightsPane();
    } catch (err) {
      this.highlights = null;
      this.renderHighlightsPane();
      this.banner("highlights", describeError(err));
    }
  }

  // -- skeleton ---------------------------------------------------------

  private buildSkeleton(): void {
    clear(this.root);
    const console_ = el("div", { class: "console" });

    // left: filters
    const filters = el("aside", { class: "pane pane-filters" });
    filters.appendChild(el("h2", {}, "Filters"));
    const bannerFilters = el("div", { id: "banner-filters", class: "banner hidden" });
    filters.appendChild(bannerFilters);
    const facetPanel = el("div", { id: "facet-panel" });
    filters.appendChild(facetPanel);

    const keywordBox = el("section", { class: "keyword-box" });
    keywordBox.appendChild(el("h2", {}, "Keywords"));
    const keywordInput = el("input", {
      id: "keyword-input",
      type: "text",
      placeholder: "e.g. client contrat",
    });
    keywordInput.addEventListener("change", () => {
      void this.update({ keywords: keywordInput.value });
    });
    keywordBox.appendChild(keywordInput);

    const transformationSelect = el("select", { id: "transformation-select" });
    for (const name of TRANSFORMATIONS) {
      transformationSelect.appendChild(el("option", { value: name }, name));
    }
    transformationSelect.addEventListener("change", () => {
      void this.update({ transformation: transformationSelect.value });
    });
    keywordBox.appendChild(el("label", { class: "control-label", for: "transformation-select" }, "transformation"));
    keywordBox.appendChild(transformationSelect);

    const thesaurusRow = el("label", { class: "toggle-row" });
    const thesaurusToggle = el("input", { id: "thesaurus-toggle", type: "checkbox" });
    thesaurusToggle.addEventListener("change", () => {
      void this.update({ thesaurus: thesaurusToggle.checked ? this.thesaurusName : null });
    });
    const thesaurusLabel = el("span", { id: "thesaurus-name" }, "thesaurus");
    thesaurusRow.appendChild(thesaurusToggle);
    thesaurusRow.appendChild(thesaurusLabel);
    keywordBox.appendChild(thesaurusRow);
    filters.appendChild(keywordBox);
    console_.appendChild(filters);

    // center: document list + tabbed charts
    const main = el("main", { class: "pane pane-main" });
    const bannerMain = el("div", { id: "banner-main", class: "banner hidden" });
    main.appendChild(bannerMain);
    const docCount = el("p", { id: "doc-count" }, "Loading…");
    main.appendChild(docCount);
    const docList = el("ul", { id: "doc-list" });
    main.appendChild(docList);

    const toolbar = el("div", { class: "toolbar" });
    const aggFacetSelect = el("select", { id: "agg-facet-select" });
    aggFacetSelect.addEventListener("change", () => {
      void this.update({ aggFacet: aggFacetSelect.value });
    });
    toolbar.appendChild(el("label", { class: "control-label", for: "agg-facet-select" }, "facet"));
    toolbar.appendChild(aggFacetSelect);

    const granularitySelect = el("select", { id: "granularity-select" });
    for (const granularity of GRANULARITIES) {
      granularitySelect.appendChild(el("option", { value: granularity }, granularity));
    }
    granularitySelect.addEventListener("change", () => {
      void this.update({ granularity: granularitySelect.value as Granularity });
    });
    toolbar.appendChild(el("label", { class: "control-label", for: "granularity-select" }, "timeline"));
    toolbar.appendChild(granularitySelect);

    const kTermsInput = el("input", {
      id: "kterms-input",
      type: "number",
      min: K_TERMS_MIN,
      max: K_TERMS_MAX,
    });
    kTermsInput.addEventListener("change", () => {
      void this.update({ kTerms: Number(kTermsInput.value) });
    });
    toolbar.appendChild(el("label", { class: "control-label", for: "kterms-input" }, "top terms"));
    toolbar.appendChild(kTermsInput);
    main.appendChild(toolbar);

    const tabs = el("nav", { id: "tabs" });
    for (const tab of TABS) {
      const button = el("button", { type: "button", "data-tab": tab }, tab);
      button.addEventListener("click", () => {
        void this.update({ tab });
      });
      tabs.appendChild(button);
    }
    main.appendChild(tabs);
    const chartArea = el("div", { id: "chart-area" });
    main.appendChild(chartArea);
    console_.appendChild(main);

    // bottom-left: persistent tag cloud
    const tagcloudPane = el("section", { class: "pane pane-tagcloud" });
    tagcloudPane.appendChild(el("h2", {}, "Tag cloud"));
    const tagcloudArea = el("div", { id: "tagcloud-area" });
    tagcloudPane.appendChild(tagcloudArea);
    console_.appendChild(tagcloudPane);

    // top-right: highlights
    const highlightsPane = el("section", { id: "pane-highlights", class: "pane pane-highlights" });
    highlightsPane.appendChild(el("h2", {}, "Highlights"));
    const bannerHighlights = el("div", { id: "banner-highlights", class: "banner hidden" });
    highlightsPane.appendChild(bannerHighlights);
    const windowRow = el("label", { class: "slider-row" });
    windowRow.appendChild(el("span", { class: "control-label" }, "window"));
    const windowSlider = el("input", {
      id: "window-slider",
      type: "range",
      min: WINDOW_MIN,
      max: WINDOW_MAX,
      step: 5,
    });
    windowSlider.addEventListener("input", () => {
      this.ui.windowValue.textContent = windowSlider.value;
    });
    windowSlider.addEventListener("change", () => {
      void this.update({ window: Number(windowSlider.value) });
    });
    windowRow.appendChild(windowSlider);
    const windowValue = el("span", { id: "window-value" });
    windowRow.appendChild(windowValue);
    highlightsPane.appendChild(windowRow);
    const highlightsArea = el("div", { id: "highlights-area" });
    highlightsPane.appendChild(highlightsArea);
    console_.appendChild(highlightsPane);

    // bottom-right: community graph
    const graphPane = el("section", { class: "pane pane-graph" });
    graphPane.appendChild(el("h2", {}, "Communities"));
    const bannerGraph = el("div", { id: "banner-graph", class: "banner hidden" });
    graphPane.appendChild(bannerGraph);
    const linkRow = el("label", { class: "control-row" });
    linkRow.appendChild(el("span", { class: "control-label" }, "link"));
    const linkInput = el("input", { id: "link-input", type: "text" });
    linkInput.addEventListener("change", () => {
      void this.update({ link: linkInput.value });
    });
    linkRow.appendChild(linkInput);
    graphPane.appendChild(linkRow);
    const thresholdRow = el("label", { class: "slider-row" });
    thresholdRow.appendChild(el("span", { class: "control-label" }, "threshold"));
    const thresholdSlider = el("input", {
      id: "threshold-slider",
      type: "range",
      min: 0,
      max: 1,
      step: 0.01,
    });
    thresholdSlider.addEventListener("input", () => {
      this.ui.thresholdValue.textContent = thresholdSlider.value;
    });
    thresholdSlider.addEventListener("change", () => {
      void this.update({ threshold: Number(thresholdSlider.value) });
    });
    thresholdRow.appendChild(thresholdSlider);
    const thresholdValue = el("span", { id: "threshold-value" });
    thresholdRow.appendChild(thresholdValue);
    graphPane.appendChild(thresholdRow);
    const modularityLine = el("p", { id: "modularity-line" });
    graphPane.appendChild(modularityLine);
    const graphArea = el("div", { id: "graph-area" });
    graphPane.appendChild(graphArea);
    console_.appendChild(graphPane);

    this.root.appendChild(console_);
    this.ui = {
      banners: {
        filters: bannerFilters,
        main: bannerMain,
        graph: bannerGraph,
        highlights: bannerHighlights,
      },
      facetPanel,
      keywordInput,
      transformationSelect,
      thesaurusToggle,
      thesaurusLabel,
      docCount,
      docList,
      tabs,
      chartArea,
      aggFacetSelect,
      granularitySelect,
      kTermsInput,
      tagcloudArea,
      highlightsPane,
      windowSlider,
      windowValue,
      highlightsArea,
      linkInput,
      thresholdSlider,
      thresholdValue,
      modularityLine,
      graphArea,
    };
  }

  // -- rendering --------------------------------------------------------

  private banner(resource: Resource, message: string | null): void {
    if (message === null) this.errors.delete(resource);
    else this.errors.set(resource, message);
    const pane = RESOURCE_PANE[resource];
    const messages = (Object.keys(RESOURCE_PANE) as Resource[])
      .filter((candidate) => RESOURCE_PANE[candidate] === pane)
      .map((candidate) => this.errors.get(candidate))
      .filter((text): text is string => Boolean(text));
    const node = this.ui.banners[pane];
    if (!messages.length) {
      node.classList.add("hidden");
      node.textContent = "";
    } else {
      node.classList.remove("hidden");
      node.textContent = messages.join(" — ");
    }
  }

  private renderFacets(): void {
    renderFacetPanel(this.ui.facetPanel, this.facetOptions, this.state.facets, (facet, value, checked) => {
      const current = new Set(this.state.facets[facet] ?? []);
      if (checked) current.add(value);
      else current.delete(value);
      const facets = { ...this.state.facets };
      if (current.size) facets[facet] = [...current].sort();
      else delete facets[facet];
      void this.update({ facets });
    });
  }

  private renderDocuments(): void {
    const response = this.documents;
    clear(this.ui.docList);
    if (!response) {
      this.ui.docCount.textContent = "Loading…";
      return;
    }
    this.ui.docCount.textContent = `${response.count} document(s)`;
    if (!response.count) {
      this.ui.docList.appendChild(
        el("li", { class: "empty-state" }, "No documents match the current filters."),
      );
      return;
    }
    for (const id of response.ids.slice(0, DOC_LIST_LIMIT)) {
      const item = el(
        "li",
        { class: id === this.state.selectedDoc ? "doc selected" : "doc", "data-id": id },
        id,
      );
      item.addEventListener("click", () => {
        void this.update({ selectedDoc: id });
      });
      this.ui.docList.appendChild(item);
    }
    if (response.ids.length > DOC_LIST_LIMIT) {
      this.ui.docList.appendChild(
        el("li", { class: "more" }, `… and ${response.ids.length - DOC_LIST_LIMIT} more`),
      );
    }
  }

  private renderCharts(): void {
    clear(this.ui.chartArea);
    const aggregate = this.aggregate;
    if (!aggregate) {
      this.ui.chartArea.appendChild(el("p", { class: "empty" }, "No aggregate loaded."));
      return;
    }
    switch (this.state.tab) {
      case "distribution":
        this.ui.chartArea.appendChild(renderDistribution(aggregate.distribution));
        break;
      case "timeline":
        this.ui.chartArea.appendChild(renderTimeline(aggregate.timeline));
        break;
      case "terms":
        this.ui.chartArea.appendChild(renderTopTerms(aggregate.top_terms));
        break;
      case "tagcloud":
        this.ui.chartArea.appendChild(renderTagCloud(aggregate.tagcloud));
        break;
    }
  }

  private renderTagcloudPane(): void {
    clear(this.ui.tagcloudArea);
    if (this.aggregate) this.ui.tagcloudArea.appendChild(renderTagCloud(this.aggregate.tagcloud));
  }

  private renderGraph(): void {
    clear(this.ui.graphArea);
    const structure = this.structure;
    if (!structure) {
      this.ui.graphArea.appendChild(el("p", { class: "empty" }, "No link graph loaded."));
      this.ui.modularityLine.textContent = "";
      return;
    }
    const communities = this.communities;
    const threshold = communities
      ? communities.threshold
      : Number.isFinite(this.state.threshold)
        ? this.state.threshold
        : null;
    this.ui.graphArea.appendChild(
      renderCommunityGraph({
        nodes: structure.nodes,
        edges: structure.edges,
        communities: communities?.communities ?? [],
        threshold,
      }),
    );
    if (communities) {
      this.ui.modularityLine.setAttribute("data-modularity", String(communities.modularity));
      this.ui.modularityLine.textContent =
        `${communities.communities.length} communities, modularity ${communities.modularity}`;
    } else {
      this.ui.modularityLine.removeAttribute("data-modularity");
      this.ui.modularityLine.textContent = "";
    }
  }

  private renderHighlightsPane(): void {
    const hasKeywords = Boolean(this.state.keywords.trim());
    this.ui.highlightsPane.classList.toggle("hidden", !hasKeywords);
    clear(this.ui.highlightsArea);
    if (!hasKeywords) return;
    if (!this.state.selectedDoc) {
      this.ui.highlightsArea.appendChild(
        el("p", { class: "empty" }, "Select a document to see its highlights."),
      );
      return;
    }
    if (this.highlights) {
      renderHighlightList(this.ui.highlightsArea, this.highlights.id, this.highlights.snippets);
    }
  }

  private syncControls(): void {
    const state = this.state;
    this.ui.keywordInput.value = state.keywords;
    this.ui.transformationSelect.value = state.transformation;
    this.ui.thesaurusToggle.checked = state.thesaurus !== null;
    this.ui.thesaurusToggle.disabled = this.thesaurusName === null;
    this.ui.thesaurusLabel.textContent = this.thesaurusName
      ? `thesaurus (${this.thesaurusName})`
      : "thesaurus (none registered)";
    this.ui.windowSlider.value = String(state.window);
    this.ui.windowValue.textContent = String(state.window);
    this.ui.linkInput.value = state.link;
    if (Number.isFinite(state.threshold)) {
      this.ui.thresholdSlider.value = String(state.threshold);
      this.ui.thresholdValue.textContent = String(state.threshold);
    } else {
      this.ui.thresholdSlider.value = "0";
      this.ui.thresholdValue.textContent = "all edges";
    }
    for (const button of this.ui.tabs.querySelectorAll("button")) {
      button.classList.toggle("active", button.getAttribute("data-tab") === state.tab);
    }

    const facetNames = this.facetOptions.map((option) => option.name);
    if (!facetNames.includes(state.aggFacet)) facetNames.push(state.aggFacet);
    clear(this.ui.aggFacetSelect);
    for (const name of facetNames) {
      this.ui.aggFacetSelect.appendChild(el("option", { value: name }, name));
    }
    this.ui.aggFacetSelect.value = state.aggFacet;
    this.ui.granularitySelect.value = state.granularity;
    this.ui.kTermsInput.value = String(state.kTerms);

    for (const input of this.ui.facetPanel.querySelectorAll<HTMLInputElement>("input[type=checkbox]")) {
      const facet = input.getAttribute("data-facet") ?? "";
      const value = input.getAttribute("data-value") ?? "";
      input.checked = (state.facets[facet] ?? []).includes(value);
    }

    this.renderHighlightsPane();
  }
}
