/**
 * Console state as a pure function of the event frames applied to it.
 *
 * Frames carry a strictly increasing sequence number.  The store
 * applies a frame only when it is the next expected one: earlier
 * numbers are duplicates and are dropped, later numbers mean frames
 * were lost and flip needsRefetch so the owner performs a full-state
 * refetch (reset) from the REST endpoints.  Request cards appear on
 * "request" frames, disappear on "answered" frames; "trace" frames
 * append to the feed in order.
 */

import type {
  EventFrame,
  PendingRequest,
  TraceEntry,
} from "./types.js";

export class ConsoleStore {
  /** Sequence number of the last applied frame. */
  seen = 0;
  /** True when a gap was detected; cleared by reset(). */
  needsRefetch = false;
  requests = new Map<string, PendingRequest>();
  trace: TraceEntry[] = [];

  /** Apply one frame; returns true when it changed the state. */
  ingest(frame: EventFrame): boolean {
    if (frame.seq <= this.seen) {
      return false;
    }
    if (frame.seq !== this.seen + 1) {
      this.needsRefetch = true;
      return false;
    }
    this.seen = frame.seq;
    switch (frame.type) {
      case "request": {
        const request = frame.payload as PendingRequest;
        this.requests.set(request.id, request);
        return true;
      }
      case "answered": {
        const request = frame.payload as PendingRequest;
        return this.requests.delete(request.id);
      }
      case "trace": {
        this.trace.push(frame.payload as TraceEntry);
        return true;
      }
    }
  }

  /** Apply a batch in order; returns how many frames changed state. */
  ingestAll(frames: EventFrame[]): number {
    let changed = 0;
    for (const frame of frames) {
      if (this.ingest(frame)) changed += 1;
    }
    return changed;
  }

  /**
   * Replace the whole state with a snapshot fetched from the REST
   * endpoints, and resume frame application from `seq`.
   */
  reset(requests: PendingRequest[], trace: TraceEntry[], seq: number): void {
    this.requests = new Map(requests.map((r) => [r.id, r]));
    this.trace = trace.slice();
    this.seen = seq;
    this.needsRefetch = false;
  }

  /** Pending cards in surfacing order (request ids are "req-<n>"). */
  pending(): PendingRequest[] {
    return [...this.requests.values()].sort(
      (a, b) => requestNumber(a.id) - requestNumber(b.id),
    );
  }
}

function requestNumber(id: string): number {
  const n = Number(id.split("-")[1]);
  return Number.isNaN(n) ? 0 : n;
}
