// Session client: REST session creation plus the websocket command channel.
// Each user action maps to exactly one protocol command; replies resolve the
// matching pending promise by seq.

import { asSnapshot, isServerMessage, type CommandType, type SimParams } from "./protocol.js";
import type { Store } from "./state.js";

interface Pending {
  resolve: (effectiveStep: number) => void;
  reject: (error: Error) => void;
}

export class CommandError extends Error {
  constructor(public code: string, message: string) {
    super(message);
  }
}

export class SessionClient {
  private ws: WebSocket | null = null;
  private seq = 0;
  private pending = new Map<number, Pending>();
  private channelUrl = "";
  private shouldReconnect = true;
  private reconnectDelayMs = 500;

  constructor(private baseUrl: string, private store: Store) {}

  async createSession(params: SimParams): Promise<string> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ params }),
    });
    const body = await response.json();
    if (!response.ok) {
      throw new CommandError(body.code ?? "http_error", body.message ?? response.statusText);
    }
    this.channelUrl = body.channel_url;
    await this.connect();
    return body.session_id;
  }

  private wsUrl(): string {
    const http = new URL(this.baseUrl);
    const scheme = http.protocol === "https:" ? "wss:" : "ws:";
    return `${scheme}//${http.host}${this.channelUrl}`;
  }

  private connect(): Promise<void> {
    this.store.update({ connection: "connecting" });
    return new Promise((resolve, reject) => {
      const ws = new WebSocket(this.wsUrl());
      this.ws = ws;
      ws.onopen = () => {
        this.store.update({ connection: "open" });
        this.reconnectDelayMs = 500;
        resolve();
      };
      ws.onmessage = (event) => this.handleMessage(String(event.data));
      ws.onerror = () => reject(new Error("websocket error"));
      ws.onclose = () => {
        this.failAllPending(new CommandError("connection_lost", "channel closed"));
        if (this.shouldReconnect) {
          this.store.update({ connection: "reconnecting" });
          setTimeout(() => {
            this.connect().catch(() => undefined);
          }, this.reconnectDelayMs);
          this.reconnectDelayMs = Math.min(this.reconnectDelayMs * 2, 8000);
        } else {
          this.store.update({ connection: "closed" });
        }
      };
    });
  }

  close(): void {
    this.shouldReconnect = false;
    this.ws?.close();
  }

  private handleMessage(raw: string): void {
    let data: unknown;
    try {
      data = JSON.parse(raw);
    } catch {
      return;
    }
    if (!isServerMessage(data)) return;
    if (data.type === "snapshot") {
      const snapshot = asSnapshot(data.payload);
      if (snapshot) this.store.acceptSnapshot(snapshot);
      return;
    }
    const seq = typeof data.seq === "number" ? data.seq : null;
    if (seq === null) return;
    const pending = this.pending.get(seq);
    if (!pending) return;
    this.pending.delete(seq);
    this.store.update({ pendingCommands: this.pending.size });
    if (data.type === "ack") {
      const step = Number(data.payload.effective_step);
      this.store.update({ lastEffectiveStep: step });
      pending.resolve(step);
    } else {
      const code = String(data.payload.code ?? "error");
      const message = String(data.payload.message ?? "command rejected");
      this.store.update({ lastError: `${code}: ${message}` });
      pending.reject(new CommandError(code, message));
    }
  }

  private failAllPending(error: Error): void {
    for (const pending of this.pending.values()) pending.reject(error);
    this.pending.clear();
    this.store.update({ pendingCommands: 0 });
  }

  /** Send one command; resolves with the acknowledged effective step. */
  send(type: CommandType, payload: Record<string, unknown> = {}): Promise<number> {
    const ws = this.ws;
    if (!ws || ws.readyState !== WebSocket.OPEN) {
      return Promise.reject(new CommandError("not_connected", "channel not open"));
    }
    this.seq += 1;
    const seq = this.seq;
    const promise = new Promise<number>((resolve, reject) => {
      this.pending.set(seq, { resolve, reject });
    });
    this.store.update({ pendingCommands: this.pending.size });
    ws.send(JSON.stringify({ type, seq, payload }));
    return promise;
  }
}
