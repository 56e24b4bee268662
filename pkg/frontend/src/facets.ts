/** Facet filter panel: one group of multi-choice boxes per physical link. */

import { clear, el } from "./dom.js";

export interface FacetValue {
  value: string;
  count: number;
}

export interface FacetOptions {
  name: string;
  values: FacetValue[];
}

export type FacetToggle = (facet: string, value: string, checked: boolean) => void;

export function renderFacetPanel(
  container: HTMLElement,
  options: FacetOptions[],
  selected: Record<string, readonly string[]>,
  onToggle: FacetToggle,
): void {
  clear(container);
  if (!options.length) {
    container.appendChild(el("p", { class: "empty" }, "No facets available."));
    return;
  }
  for (const facet of options) {
    const group = el("fieldset", { class: "facet-group", "data-facet": facet.name });
    group.appendChild(el("legend", {}, facet.name));
    const chosen = new Set(selected[facet.name] ?? []);
    for (const { value, count } of facet.values) {
      const label = el("label", { class: "facet-option" });
      const input = el("input", { type: "checkbox", "data-facet": facet.name, "data-value": value });
      input.checked = chosen.has(value);
      input.addEventListener("change", () => onToggle(facet.name, value, input.checked));
      label.appendChild(input);
      label.appendChild(el("span", { class: "facet-value" }, value));
      label.appendChild(el("span", { class: "facet-count" }, String(count)));
      group.appendChild(label);
    }
    container.appendChild(group);
  }
}
