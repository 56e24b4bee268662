/** Highlight list: snippets rendered verbatim as returned by the server. */

import { clear, el } from "./dom.js";

export function renderHighlightList(container: HTMLElement, docId: string, snippets: string[]): void {
  clear(container);
  container.appendChild(el("h3", { class: "highlight-doc" }, docId));
  if (!snippets.length) {
    container.appendChild(el("p", { class: "empty" }, "No matches in this document."));
    return;
  }
  for (const snippet of snippets) {
    container.appendChild(el("blockquote", { class: "snippet" }, snippet));
  }
}
