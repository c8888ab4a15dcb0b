/**
 * DOM rendering for the console: request cards, the trace feed, and
 * the marking panel.
 *
 * Cards are rendered from pending requests; the answer form comes from
 * the request's schema and validates before any network call.  A
 * session claims at most one agent id and may only answer that agent's
 * requests; every other card renders read-only, so observers can watch
 * a run without being able to steer it.
 */

import { SubmitError, type ConsoleApi } from "./api.js";
import {
  fieldsFor,
  outputsOf,
  validateFields,
  type FormField,
} from "./schema.js";
import type { ConsoleStore } from "./store.js";
import type {
  MarkingView,
  PendingRequest,
  TraceEntry,
} from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** One line of the trace feed. */
export function traceLineText(entry: TraceEntry): string {
  if (entry.kind === "work") {
    const outputs = Object.entries(entry.outputs)
      .map(([label, value]) => `${label}=${String(value)}`)
      .join(", ");
    return outputs
      ? `${entry.agent} ran ${entry.procedure}: ${outputs}`
      : `${entry.agent} ran ${entry.procedure}`;
  }
  const [sender, receiver] = entry.channel ?? ["?", "?"];
  if (entry.kind === "emission") {
    return `${sender} -> ${receiver} (${entry.action})`;
  }
  return `${receiver} <- ${sender} (${entry.action})`;
}

export function renderTrace(list: HTMLElement, trace: TraceEntry[]): void {
  list.replaceChildren();
  for (const entry of trace) {
    const item = el("li", `trace-${entry.kind}`, traceLineText(entry));
    item.dataset.seq = String(entry.seq);
    list.append(item);
  }
}

export function renderMarking(panel: HTMLElement, view: MarkingView): void {
  panel.replaceChildren();
  const statuses = el("div", "statuses");
  for (const [agent, status] of Object.entries(view.statuses)) {
    const pill = el("span", `status status-${status}`, `${agent}: ${status}`);
    statuses.append(pill);
  }
  panel.append(statuses);

  const places = el("div", "places");
  for (const [agent, marking] of Object.entries(view.agents)) {
    const held = Object.entries(marking)
      .filter(([, tokens]) => tokens.length > 0)
      .map(([place, tokens]) => `${place}: ${tokens.length}`)
      .join(", ");
    places.append(el("div", "agent-places", `${agent} holds ${held || "nothing"}`));
  }
  panel.append(places);

  const channels = el("div", "channels");
  for (const [channel, queue] of Object.entries(view.channels)) {
    channels.append(
      el("div", "channel-depth", `${channel}: ${queue.length} queued`),
    );
  }
  if (Object.keys(view.channels).length === 0) {
    channels.append(el("div", "channel-depth", "channels empty"));
  }
  panel.append(channels);

  if (view.quiescent) {
    panel.append(el("div", "quiescent", "run complete"));
  }
}

export interface CardHandlers {
  submit: (request: PendingRequest, fields: FormField[]) => Promise<void>;
}

export function renderCard(
  request: PendingRequest,
  fields: FormField[],
  readOnly: boolean,
  handlers: CardHandlers,
): HTMLElement {
  const card = el("section", "card");
  card.dataset.requestId = request.id;
  card.dataset.procedure = request.procedure;

  const title = el("h3", "card-title");
  title.append(el("span", "card-procedure", request.procedure));
  if (request.description) {
    title.append(el("span", "card-description", request.description));
  }
  card.append(title);

  if (request.prompt) {
    card.append(el("p", "card-prompt", request.prompt));
  }

  const entries = Object.entries(request.data);
  if (entries.length > 0) {
    const dl = el("dl", "card-data");
    for (const [label, value] of entries) {
      dl.append(el("dt", undefined, label));
      dl.append(el("dd", undefined, value));
    }
    card.append(dl);
  }

  if (readOnly) {
    card.append(el("p", "card-readonly", `waiting on ${request.agent}`));
    return card;
  }

  const form = el("form", "card-form");
  for (const field of fields) {
    const row = el("label", "field");
    row.append(el("span", "field-label", `${field.label} (${field.colorset})`));
    const input = el("input");
    input.name = field.label;
    input.value = field.value;
    input.addEventListener("input", () => {
      field.value = input.value;
    });
    row.append(input);
    const error = el("span", "field-error", field.error ?? "");
    row.append(error);
    form.append(row);
  }
  const submitError = el("p", "submit-error", "");
  const button = el("button", "submit", "submit");
  button.type = "submit";
  form.append(button);
  form.append(submitError);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!validateFields(fields)) {
      refreshFieldErrors(form, fields);
      return;
    }
    refreshFieldErrors(form, fields);
    handlers.submit(request, fields).catch((error: unknown) => {
      submitError.textContent =
        error instanceof Error ? error.message : String(error);
    });
  });
  card.append(form);
  return card;
}

function refreshFieldErrors(form: HTMLElement, fields: FormField[]): void {
  const errors = form.querySelectorAll(".field-error");
  fields.forEach((field, index) => {
    const node = errors[index];
    if (node) node.textContent = field.error ?? "";
  });
}

/**
 * The page controller: owns the store, renders on change, answers
 * cards through the API, and performs the full-state refetch whenever
 * the store reports a sequence gap.
 */
export class ConsolePage {
  private root: HTMLElement;
  private api: ConsoleApi;
  private store: ConsoleStore;
  private agent: string | null;
  private forms = new Map<string, FormField[]>();
  private cardsHost: HTMLElement;
  private traceHost: HTMLElement;
  private markingHost: HTMLElement;

  constructor(
    root: HTMLElement,
    api: ConsoleApi,
    store: ConsoleStore,
    agent: string | null,
  ) {
    this.root = root;
    this.api = api;
    this.store = store;
    this.agent = agent;
    this.cardsHost = el("div", "cards");
    this.traceHost = el("ol", "trace");
    this.markingHost = el("div", "marking");
    const traceWrap = el("section", "trace-panel");
    traceWrap.append(el("h2", undefined, "trace"));
    traceWrap.append(this.traceHost);
    const markingWrap = el("section", "marking-panel");
    markingWrap.append(el("h2", undefined, "society"));
    markingWrap.append(this.markingHost);
    this.root.replaceChildren(this.cardsHost, traceWrap, markingWrap);
  }

  /** Feed callback: apply frames, recover from gaps, re-render. */
  async handleFrames(frames: import("./types.js").EventFrame[]): Promise<void> {
    const changed = this.store.ingestAll(frames);
    if (this.store.needsRefetch) {
      await this.refetch();
    } else if (changed === 0) {
      return;
    }
    this.render();
    await this.refreshMarking();
  }

  lastSeq(): number {
    return this.store.seen;
  }

  /** Full-state resync from the REST endpoints after a gap. */
  async refetch(): Promise<void> {
    const [requests, trace, events] = await Promise.all([
      this.api.requests(),
      this.api.trace(),
      this.api.events(Number.MAX_SAFE_INTEGER),
    ]);
    this.store.reset(requests, trace, events.seq);
  }

  render(): void {
    const pending = this.store.pending();
    const alive = new Set(pending.map((r) => r.id));
    for (const id of [...this.forms.keys()]) {
      if (!alive.has(id)) this.forms.delete(id);
    }
    this.cardsHost.replaceChildren();
    for (const request of pending) {
      let fields = this.forms.get(request.id);
      if (!fields) {
        fields = fieldsFor(request.result_schema);
        this.forms.set(request.id, fields);
      }
      const readOnly = this.agent === null || request.agent !== this.agent;
      this.cardsHost.append(
        renderCard(request, fields, readOnly, {
          submit: (req, f) => this.submit(req, f),
        }),
      );
    }
    renderTrace(this.traceHost, this.store.trace);
  }

  async refreshMarking(): Promise<void> {
    try {
      renderMarking(this.markingHost, await this.api.marking());
    } catch {
      // leave the previous snapshot up if the fetch failed
    }
  }

  private async submit(
    request: PendingRequest,
    fields: FormField[],
  ): Promise<void> {
    try {
      await this.api.submit(request.id, outputsOf(fields));
    } catch (error) {
      if (error instanceof SubmitError && error.status === 409) {
        throw new Error(`already answered differently: ${error.message}`);
      }
      throw error;
    }
    // The card disappears when the "answered" frame arrives; nothing
    // to do here, and a retried submit lands in the same place.
  }
}
