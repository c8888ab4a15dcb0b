/**
 * Browser entry point.
 *
 * Query parameters: `api` overrides the backend origin (defaults to
 * the page's own origin) and `agent` claims an agent id, enabling the
 * answer forms on that agent's cards.  Without `agent` the console is
 * a read-only observer.
 */

import { ConsoleApi } from "./api.js";
import { EventFeed } from "./feed.js";
import { ConsoleStore } from "./store.js";
import { ConsolePage } from "./view.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? window.location.origin;
const agent = params.get("agent");

const api = new ConsoleApi(base);
const store = new ConsoleStore();
const root = document.getElementById("console");
if (!root) {
  throw new Error("page is missing the #console element");
}
const page = new ConsolePage(root, api, store, agent);

const header = document.getElementById("session");
if (header) {
  header.textContent = agent
    ? `answering as ${agent}`
    : "observing (add ?agent=ID to answer)";
}

const feed = new EventFeed(api, base, {
  onFrames: (frames) => void page.handleFrames(frames),
  lastSeq: () => page.lastSeq(),
});

void page.refetch().then(() => {
  page.render();
  void page.refreshMarking();
  feed.start();
});
