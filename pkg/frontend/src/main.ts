/** Browser entry point: binds the console to the page URL and same-origin API. */

import { ApiClient } from "./api.js";
import { ConsoleApp } from "./app.js";
import { decodeState } from "./state.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new ConsoleApp(root, new ApiClient(""), decodeState(window.location.search), (query) => {
  const url = query ? `${window.location.pathname}?${query}` : window.location.pathname;
  window.history.replaceState(null, "", url);
});

window.addEventListener("popstate", () => {
  void app.replaceState(decodeState(window.location.search));
});

void app.init();
