/**
 * Thin typed client for the serve endpoints.
 *
 * Submission is idempotent from the console's point of view: re-sending
 * an answer the server already accepted resolves normally (the reply
 * carries already=true).  A conflicting re-answer or a schema problem
 * rejects with a SubmitError carrying the HTTP status and the server's
 * message, so the card can show it inline.
 */

import type {
  EventFrame,
  MarkingView,
  PendingRequest,
  SubmitReply,
  TraceEntry,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class SubmitError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
  } catch {
    // not JSON; fall through to the status line
  }
  return `request failed with status ${response.status}`;
}

export class ConsoleApi {
  private base: string;
  private fetchFn: FetchLike;

  constructor(base: string, fetchFn?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) {
      throw new Error(await errorDetail(response));
    }
    return (await response.json()) as T;
  }

  async requests(): Promise<PendingRequest[]> {
    const body = await this.getJson<{ requests: PendingRequest[] }>(
      "/requests",
    );
    return body.requests;
  }

  async trace(after = 0): Promise<TraceEntry[]> {
    const body = await this.getJson<{ trace: TraceEntry[] }>(
      `/trace?after=${after}`,
    );
    return body.trace;
  }

  async marking(): Promise<MarkingView> {
    return this.getJson<MarkingView>("/marking");
  }

  async events(after = 0): Promise<{ events: EventFrame[]; seq: number }> {
    return this.getJson<{ events: EventFrame[]; seq: number }>(
      `/events?after=${after}`,
    );
  }

  async submit(
    requestId: string,
    outputs: Record<string, string>,
  ): Promise<SubmitReply> {
    const response = await this.fetchFn(
      `${this.base}/requests/${requestId}/result`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ outputs }),
      },
    );
    if (!response.ok) {
      throw new SubmitError(response.status, await errorDetail(response));
    }
    return (await response.json()) as SubmitReply;
  }
}
