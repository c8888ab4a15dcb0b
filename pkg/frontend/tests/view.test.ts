// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import { fieldsFor } from "../src/schema.js";
import {
  renderCard,
  renderMarking,
  renderTrace,
  traceLineText,
} from "../src/view.js";
import type {
  MarkingView,
  PendingRequest,
  TraceEntry,
} from "../src/types.js";

const designRequest: PendingRequest = {
  id: "req-1",
  agent: "WP",
  procedure: "Des",
  description: "Design",
  prompt: "Design a product answering the pending demand.",
  data: { d: "d1" },
  result_schema: [["x", "S"]],
  state: "pending",
};

function cardFor(
  request: PendingRequest,
  readOnly: boolean,
  submitted: Array<Record<string, string>>,
) {
  const fields = fieldsFor(request.result_schema);
  const card = renderCard(request, fields, readOnly, {
    submit: async (_req, f) => {
      submitted.push(Object.fromEntries(f.map((x) => [x.label, x.value])));
    },
  });
  document.body.append(card);
  return { card, fields };
}

describe("request cards", () => {
  it("shows the procedure name, description, prompt, and data", () => {
    const { card } = cardFor(designRequest, false, []);
    expect(card.querySelector(".card-procedure")?.textContent).toBe("Des");
    expect(card.querySelector(".card-description")?.textContent).toBe(
      "Design",
    );
    expect(card.querySelector(".card-prompt")?.textContent).toContain(
      "demand",
    );
    expect(card.querySelector(".card-data")?.textContent).toContain("d1");
    expect(card.dataset.requestId).toBe("req-1");
  });

  it("renders one labeled input per schema entry", () => {
    const { card } = cardFor(designRequest, false, []);
    const labels = [...card.querySelectorAll(".field-label")].map(
      (n) => n.textContent,
    );
    expect(labels).toEqual(["x (S)"]);
  });

  it("blocks submission of a blank required field, with no call out", () => {
    const submitted: Array<Record<string, string>> = [];
    const { card } = cardFor(designRequest, false, submitted);
    const form = card.querySelector("form");
    form?.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(submitted).toHaveLength(0);
    expect(card.querySelector(".field-error")?.textContent).toContain("x");
  });

  it("submits a filled form and clears the inline error", () => {
    const submitted: Array<Record<string, string>> = [];
    const { card, fields } = cardFor(designRequest, false, submitted);
    const form = card.querySelector("form");
    form?.dispatchEvent(new Event("submit", { cancelable: true }));
    fields[0].value = "s1";
    form?.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(submitted).toEqual([{ x: "s1" }]);
    expect(card.querySelector(".field-error")?.textContent).toBe("");
  });

  it("typing in the input lands in the form field", () => {
    const { card, fields } = cardFor(designRequest, false, []);
    const input = card.querySelector("input");
    if (!input) throw new Error("no input rendered");
    input.value = "s9";
    input.dispatchEvent(new Event("input"));
    expect(fields[0].value).toBe("s9");
  });

  it("renders read-only cards without a form for observers", () => {
    const { card } = cardFor(designRequest, true, []);
    expect(card.querySelector("form")).toBeNull();
    expect(card.querySelector(".card-readonly")?.textContent).toContain("WP");
  });
});

describe("trace feed", () => {
  const entries: TraceEntry[] = [
    {
      seq: 1,
      agent: "WP",
      transition: "Des",
      procedure: "Des",
      kind: "work",
      channel: null,
      action: null,
      outputs: { x: "s1" },
    },
    {
      seq: 2,
      agent: "WP",
      transition: "PPS.AE",
      procedure: "PPS.AE",
      kind: "emission",
      channel: ["WP", "PP"],
      action: "G",
      outputs: {},
    },
    {
      seq: 3,
      agent: "PP",
      transition: "PPS",
      procedure: "PPS",
      kind: "reception",
      channel: ["WP", "PP"],
      action: "G",
      outputs: {},
    },
  ];

  it("describes each occurrence kind", () => {
    expect(traceLineText(entries[0])).toBe("WP ran Des: x=s1");
    expect(traceLineText(entries[1])).toBe("WP -> PP (G)");
    expect(traceLineText(entries[2])).toBe("PP <- WP (G)");
  });

  it("renders entries in list order with their sequence numbers", () => {
    const list = document.createElement("ol");
    renderTrace(list, entries);
    const items = [...list.querySelectorAll("li")];
    expect(items).toHaveLength(3);
    expect(items.map((i) => i.dataset.seq)).toEqual(["1", "2", "3"]);
    expect(items[0].className).toBe("trace-work");
  });
});

describe("marking panel", () => {
  const view: MarkingView = {
    agents: { WP: {}, M: { pc: ["pc1"], wst: [] } },
    channels: { "WP->M": [{ performative: "request", action: "Ma", params: ["rm1"], seq: 1 }] },
    statuses: { WP: "done", M: "waiting-message" },
    quiescent: false,
  };

  it("shows statuses, held tokens, and channel depths", () => {
    const panel = document.createElement("div");
    renderMarking(panel, view);
    expect(panel.textContent).toContain("WP: done");
    expect(panel.textContent).toContain("M holds pc: 1");
    expect(panel.textContent).toContain("WP->M: 1 queued");
    expect(panel.querySelector(".quiescent")).toBeNull();
  });

  it("marks a finished run", () => {
    const panel = document.createElement("div");
    renderMarking(panel, { ...view, channels: {}, quiescent: true });
    expect(panel.querySelector(".quiescent")?.textContent).toBe(
      "run complete",
    );
    expect(panel.textContent).toContain("channels empty");
  });
});
