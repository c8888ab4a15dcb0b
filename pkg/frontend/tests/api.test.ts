import { describe, expect, it } from "vitest";

import { ConsoleApi, SubmitError, type FetchLike } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function recordingFetch(
  replies: Array<{ status: number; body: unknown }>,
): { fetchFn: FetchLike; calls: Array<{ url: string; init?: RequestInit }> } {
  const calls: Array<{ url: string; init?: RequestInit }> = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({ url, init });
    const reply = replies[Math.min(calls.length - 1, replies.length - 1)];
    return jsonResponse(reply.status, reply.body);
  };
  return { fetchFn, calls };
}

describe("endpoint plumbing", () => {
  it("unwraps request and trace listings and passes after", async () => {
    const { fetchFn, calls } = recordingFetch([
      { status: 200, body: { requests: [] } },
    ]);
    const api = new ConsoleApi("http://host:1234/", fetchFn);
    await api.requests();
    expect(calls[0].url).toBe("http://host:1234/requests");

    const traced = recordingFetch([{ status: 200, body: { trace: [] } }]);
    await new ConsoleApi("http://host", traced.fetchFn).trace(7);
    expect(traced.calls[0].url).toBe("http://host/trace?after=7");

    const evented = recordingFetch([
      { status: 200, body: { events: [], seq: 3 } },
    ]);
    const batch = await new ConsoleApi("http://host", evented.fetchFn).events(2);
    expect(evented.calls[0].url).toBe("http://host/events?after=2");
    expect(batch.seq).toBe(3);
  });
});

describe("submission", () => {
  it("posts outputs as JSON", async () => {
    const { fetchFn, calls } = recordingFetch([
      { status: 200, body: { ok: true, state: "committed", already: false } },
    ]);
    const api = new ConsoleApi("http://host", fetchFn);
    const reply = await api.submit("req-1", { x: "s1" });
    expect(reply.already).toBe(false);
    expect(calls[0].url).toBe("http://host/requests/req-1/result");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      outputs: { x: "s1" },
    });
  });

  it("treats an acknowledged retry as success", async () => {
    const { fetchFn } = recordingFetch([
      { status: 200, body: { ok: true, state: "committed", already: true } },
    ]);
    const reply = await new ConsoleApi("http://host", fetchFn).submit(
      "req-1",
      { x: "s1" },
    );
    expect(reply.ok).toBe(true);
    expect(reply.already).toBe(true);
  });

  it("surfaces a conflicting re-answer as a 409 SubmitError", async () => {
    const { fetchFn } = recordingFetch([
      { status: 409, body: { detail: "answered differently" } },
    ]);
    const api = new ConsoleApi("http://host", fetchFn);
    await expect(api.submit("req-1", { x: "zzz" })).rejects.toThrowError(
      SubmitError,
    );
    await api.submit("req-1", { x: "zzz" }).catch((error: SubmitError) => {
      expect(error.status).toBe(409);
      expect(error.message).toContain("answered differently");
    });
  });

  it("surfaces schema problems with the server's message", async () => {
    const { fetchFn } = recordingFetch([
      { status: 422, body: { detail: "missing output 'x'" } },
    ]);
    const api = new ConsoleApi("http://host", fetchFn);
    await api.submit("req-1", {}).catch((error: SubmitError) => {
      expect(error.status).toBe(422);
      expect(error.message).toContain("missing output");
    });
  });
});
