/**
 * Event delivery with reconnect-and-resume.
 *
 * Preferred transport is the event websocket; when sockets are not
 * available (or a connection drops) the feed falls back to polling the
 * events endpoint.  Either way every (re)connection passes the last
 * seen sequence number as `after`, so the server replays exactly the
 * missed frames and the store never sees a gap from a plain reconnect.
 */

import type { EventFrame } from "./types.js";
import type { ConsoleApi } from "./api.js";

export interface FeedOptions {
  /** Called with each batch of frames, in order. */
  onFrames: (frames: EventFrame[]) => void;
  /** Where to resume from; read again before every (re)connect. */
  lastSeq: () => number;
  /** Polling period in ms when the socket is unavailable. */
  pollMs?: number;
  /** Websocket constructor; absent means polling only. */
  socketCtor?: typeof WebSocket;
}

export class EventFeed {
  private api: ConsoleApi;
  private wsBase: string | null;
  private options: FeedOptions;
  private socket: WebSocket | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;
  private stopped = false;

  constructor(api: ConsoleApi, httpBase: string, options: FeedOptions) {
    this.api = api;
    this.options = options;
    const ctor = options.socketCtor ?? globalThis.WebSocket;
    this.wsBase = ctor ? httpBase.replace(/^http/, "ws") : null;
  }

  start(): void {
    this.stopped = false;
    if (this.wsBase) {
      this.connectSocket();
    } else {
      this.startPolling();
    }
  }

  stop(): void {
    this.stopped = true;
    if (this.socket) {
      this.socket.close();
      this.socket = null;
    }
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private connectSocket(): void {
    if (this.stopped || !this.wsBase) return;
    const ctor = this.options.socketCtor ?? globalThis.WebSocket;
    const url = `${this.wsBase}/events?after=${this.options.lastSeq()}`;
    const socket = new ctor(url);
    this.socket = socket;
    socket.onmessage = (event) => {
      const frame = JSON.parse(String(event.data)) as EventFrame;
      this.options.onFrames([frame]);
    };
    socket.onclose = () => {
      this.socket = null;
      if (!this.stopped) {
        setTimeout(() => this.connectSocket(), this.options.pollMs ?? 1000);
      }
    };
    socket.onerror = () => {
      socket.close();
    };
  }

  private startPolling(): void {
    const period = this.options.pollMs ?? 500;
    const poll = async () => {
      if (this.stopped) return;
      try {
        const batch = await this.api.events(this.options.lastSeq());
        if (batch.events.length > 0) {
          this.options.onFrames(batch.events);
        }
      } catch {
        // server briefly unreachable; the next tick retries
      }
    };
    void poll();
    this.timer = setInterval(() => void poll(), period);
  }
}
