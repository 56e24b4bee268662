/**
 * SVG renderers for the four aggregate visualizations.
 *
 * Every number shown comes verbatim from one API response: counts and weights
 * are stamped into data-* attributes unchanged, and only pixel geometry is
 * computed locally.
 */

import { el, svgEl } from "./dom.js";

const PLOT_HEIGHT = 150;
const TOP_PAD = 16;
const LABEL_BAND = 34;

function emptyChart(message: string): SVGSVGElement {
  const svg = svgEl("svg", { width: 280, height: 60, class: "chart chart-empty" });
  svg.appendChild(svgEl("text", { x: 140, y: 34, "text-anchor": "middle", class: "empty" }, message));
  return svg;
}

function barChart(entries: [string, number][], klass: string, keyAttr: string): SVGSVGElement {
  if (!entries.length) return emptyChart("No data");
  const slot = 34;
  const width = Math.max(280, entries.length * slot + 32);
  const height = TOP_PAD + PLOT_HEIGHT + LABEL_BAND;
  const max = Math.max(...entries.map(([, count]) => count), 1);
  const svg = svgEl("svg", {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: `chart ${klass}`,
    role: "img",
  });
  entries.forEach(([key, count], i) => {
    const barHeight = (count / max) * PLOT_HEIGHT;
    const x = 16 + i * slot;
    const bar = svgEl("rect", {
      class: "bar",
      x,
      y: TOP_PAD + PLOT_HEIGHT - barHeight,
      width: slot - 10,
      height: Math.max(barHeight, count > 0 ? 1 : 0),
      [keyAttr]: key,
      "data-count": String(count),
    });
    bar.appendChild(svgEl("title", {}, `${key}: ${count}`));
    svg.appendChild(bar);
    svg.appendChild(
      svgEl(
        "text",
        { x: x + (slot - 10) / 2, y: TOP_PAD + PLOT_HEIGHT - barHeight - 4, "text-anchor": "middle", class: "bar-count" },
        String(count),
      ),
    );
    const label = svgEl(
      "text",
      { x: x + (slot - 10) / 2, y: TOP_PAD + PLOT_HEIGHT + 16, "text-anchor": "middle", class: "bar-label" },
      key.length > 7 ? `${key.slice(0, 6)}…` : key,
    );
    label.appendChild(svgEl("title", {}, key));
    svg.appendChild(label);
  });
  return svg;
}

/** Facet distribution: one bar per facet value, sorted by value. */
export function renderDistribution(distribution: Record<string, number>): SVGSVGElement {
  const entries = Object.entries(distribution).sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
  return barChart(entries, "chart-distribution", "data-key");
}

/** Creation-date timeline: one bar per time bucket, chronological. */
export function renderTimeline(timeline: Record<string, number>): SVGSVGElement {
  const entries = Object.entries(timeline).sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
  return barChart(entries, "chart-timeline", "data-key");
}

/** Top terms: horizontal bars in the server's rank order. */
export function renderTopTerms(topTerms: [string, number][]): SVGSVGElement {
  if (!topTerms.length) return emptyChart("No terms");
  const rowHeight = 24;
  const labelWidth = 110;
  const barMax = 230;
  const width = labelWidth + barMax + 90;
  const height = topTerms.length * rowHeight + 12;
  const max = Math.max(...topTerms.map(([, weight]) => weight), Number.MIN_VALUE);
  const svg = svgEl("svg", {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: "chart chart-terms",
    role: "img",
  });
  topTerms.forEach(([term, weight], i) => {
    const y = 6 + i * rowHeight;
    svg.appendChild(
      svgEl("text", { x: labelWidth - 8, y: y + 15, "text-anchor": "end", class: "term-label" }, term),
    );
    const bar = svgEl("rect", {
      class: "bar",
      x: labelWidth,
      y: y + 3,
      width: Math.max((weight / max) * barMax, weight > 0 ? 1 : 0),
      height: rowHeight - 8,
      "data-term": term,
      "data-weight": String(weight),
    });
    bar.appendChild(svgEl("title", {}, `${term}: ${weight}`));
    svg.appendChild(bar);
    svg.appendChild(
      svgEl(
        "text",
        { x: labelWidth + Math.max((weight / max) * barMax, 1) + 6, y: y + 15, class: "term-weight" },
        String(weight),
      ),
    );
  });
  return svg;
}

/** Tag cloud: font size grows monotonically with term weight. */
export function renderTagCloud(tagcloud: [string, number][]): HTMLElement {
  const cloud = el("div", { class: "tagcloud" });
  if (!tagcloud.length) {
    cloud.appendChild(el("p", { class: "empty" }, "No terms"));
    return cloud;
  }
  const weights = tagcloud.map(([, weight]) => weight);
  const min = Math.min(...weights);
  const max = Math.max(...weights);
  const span = max - min || 1;
  for (const [term, weight] of tagcloud) {
    const size = 12 + ((weight - min) / span) * 24;
    const tag = el(
      "span",
      {
        class: "tag",
        "data-term": term,
        "data-weight": String(weight),
        title: `${term}: ${weight}`,
      },
      term,
    );
    tag.style.fontSize = `${size.toFixed(2)}px`;
    cloud.appendChild(tag);
  }
  return cloud;
}
