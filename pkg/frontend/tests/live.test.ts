/**
 * End-to-end run against a real `orgweave serve` process.
 *
 * Spawns the backend on a test port, then drives the console's own
 * store and API client through a whole run of the bundled society:
 * the first event frame must already carry the Des request, answering
 * it must retire that card and surface P, and the trace the store
 * accumulates from event frames must match GET /trace exactly.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ConsoleApi, SubmitError } from "../src/api.js";
import { ConsoleStore } from "../src/store.js";
import type { PendingRequest } from "../src/types.js";

const PORT = 8791;
const BASE = `http://127.0.0.1:${PORT}`;
const FIXTURE = fileURLToPath(
  new URL("../../src/orgweave/fixtures/pmo.society.json", import.meta.url),
);

/** Canonical answer value for each human procedure in the fixture. */
const ANSWERS: Record<string, string> = {
  Des: "s1",
  P: "pg1",
  Sup: "rm1",
};

function answerFor(request: PendingRequest): Record<string, string> {
  const value = ANSWERS[request.procedure];
  if (value === undefined) {
    throw new Error(`no scripted answer for ${request.procedure}`);
  }
  return Object.fromEntries(
    request.result_schema.map(([label]) => [label, value]),
  );
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

let server: ChildProcess;
let stderr = "";
let exitNotice: string | null = null;
let desId = "";
const api = new ConsoleApi(BASE);
const store = new ConsoleStore();

/** Pull every frame past the store's cursor and apply it. */
async function catchUp(): Promise<void> {
  const { events } = await api.events(store.seen);
  store.ingestAll(events);
  if (store.needsRefetch) {
    throw new Error("sequence gap while catching up");
  }
}

function procedures(): string[] {
  return store.pending().map((r) => r.procedure);
}

beforeAll(async () => {
  server = spawn(
    "orgweave",
    ["serve", FIXTURE, "--seed", "11", "--port", String(PORT)],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  server.stderr?.on("data", (chunk) => {
    stderr += String(chunk);
  });
  server.once("exit", (code) => {
    exitNotice = `serve exited (${code}): ${stderr}`;
  });
  for (let attempt = 0; attempt < 80; attempt++) {
    if (exitNotice) throw new Error(exitNotice);
    try {
      await api.requests();
      return;
    } catch {
      await sleep(250);
    }
  }
  throw new Error(`serve never came up on ${BASE}: ${stderr}`);
}, 25000);

afterAll(() => {
  server?.kill();
});

describe("console against a live serve run", () => {
  it("shows the Des card within one event frame of run start", async () => {
    const { events } = await api.events(0);
    expect(events.length).toBeGreaterThan(0);
    expect(events[0].type).toBe("request");

    store.ingest(events[0]);
    expect(procedures()).toEqual(["Des"]);

    store.ingestAll(events.slice(1));
    expect(procedures()).toEqual(["Des", "Sup"]);
  });

  it("retires the Des card on submit and surfaces P on the next step", async () => {
    const des = store.pending().find((r) => r.procedure === "Des");
    if (!des) throw new Error("Des card missing");
    desId = des.id;
    const reply = await api.submit(des.id, answerFor(des));
    expect(reply.ok).toBe(true);
    expect(reply.already).toBe(false);

    await catchUp();
    expect(procedures()).not.toContain("Des");
    expect(procedures()).toContain("P");
  });

  it("keeps the trace view identical to GET /trace", async () => {
    const served = await api.trace();
    expect(store.trace).toEqual(served);
    expect(served.length).toBeGreaterThan(0);
    expect(served[0].procedure).toBe("Des");
  });

  it("runs the society to completion from the cards alone", async () => {
    for (let round = 0; round < 10 && store.pending().length > 0; round++) {
      for (const request of store.pending()) {
        await api.submit(request.id, answerFor(request));
      }
      await catchUp();
    }
    expect(store.pending()).toEqual([]);

    const marking = await api.marking();
    expect(marking.quiescent).toBe(true);
    expect(Object.values(marking.statuses)).toEqual(
      Object.keys(marking.statuses).map(() => "done"),
    );
    expect(marking.agents.M.pc).toEqual(["pc1"]);
  });

  it("agrees with the server on the finished trace, in order", async () => {
    const served = await api.trace();
    expect(store.trace).toEqual(served);
    expect(served.map((e) => e.seq)).toEqual(served.map((_, i) => i + 1));
    const work = served.filter((e) => e.kind === "work");
    expect(work.map((e) => e.procedure)).toEqual([
      "Des",
      "Sup",
      "P",
      "G",
      "Ma",
      "C",
    ]);
  });

  it("treats an identical re-answer as already done, a different one as a conflict", async () => {
    const again = await api.submit(desId, { x: "s1" });
    expect(again.ok).toBe(true);
    expect(again.already).toBe(true);

    await expect(api.submit(desId, { x: "s2" })).rejects.toSatisfy(
      (error) => error instanceof SubmitError && error.status === 409,
    );
  });
});
