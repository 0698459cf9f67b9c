// View model: what the console knows, all of it server-acknowledged. The
// client never steps the model locally; every field here is a replica of
// server output plus connection bookkeeping.

import type { Snapshot } from "./protocol.js";

export type ConnectionState = "connecting" | "open" | "reconnecting" | "closed";

export interface ViewModel {
  snapshot: Snapshot | null;
  previousSnapshot: Snapshot | null;
  connection: ConnectionState;
  pendingCommands: number;
  lastEffectiveStep: number | null;
  lastError: string | null;
}

type Listener = (model: ViewModel) => void;

export class Store {
  private model: ViewModel = {
    snapshot: null,
    previousSnapshot: null,
    connection: "connecting",
    pendingCommands: 0,
    lastEffectiveStep: null,
    lastError: null,
  };
  private listeners: Listener[] = [];

  get current(): ViewModel {
    return this.model;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.model);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<ViewModel>): void {
    this.model = { ...this.model, ...patch };
    for (const listener of this.listeners) listener(this.model);
  }

  // latest-wins: an older snapshot never overwrites a newer one
  acceptSnapshot(snapshot: Snapshot): void {
    const current = this.model.snapshot;
    if (current && snapshot.time < current.time && snapshot.session === current.session) {
      return;
    }
    this.update({ previousSnapshot: current, snapshot });
  }
}
