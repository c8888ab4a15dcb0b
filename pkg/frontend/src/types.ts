/**
 * Wire types for the society console backend.
 *
 * These mirror the JSON the runtime's serve endpoints produce: pending
 * requests, trace entries, event frames, and the marking snapshot.
 */

/** One expected answer field: [label, colorset name]. */
export type SchemaEntry = [string, string];

export type RequestState = "pending" | "answered" | "committed";

export interface PendingRequest {
  id: string;
  agent: string;
  procedure: string;
  description: string;
  prompt: string;
  data: Record<string, string>;
  result_schema: SchemaEntry[];
  state: RequestState;
}

export type OccurrenceKind = "work" | "emission" | "reception";

export interface TraceEntry {
  seq: number;
  agent: string;
  transition: string;
  procedure: string;
  kind: OccurrenceKind;
  channel: [string, string] | null;
  action: string | null;
  outputs: Record<string, unknown>;
}

export type FrameType = "request" | "answered" | "trace";

export interface EventFrame {
  seq: number;
  type: FrameType;
  payload: PendingRequest | TraceEntry;
}

export interface ChannelMessage {
  performative: string;
  action: string;
  params: unknown[];
  seq: number;
}

export interface MarkingView {
  agents: Record<string, Record<string, unknown[]>>;
  channels: Record<string, ChannelMessage[]>;
  statuses: Record<string, string>;
  quiescent: boolean;
}

export interface SubmitReply {
  ok: boolean;
  state: RequestState;
  already: boolean;
}
