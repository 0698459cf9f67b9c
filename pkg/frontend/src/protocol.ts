// Wire types for the session channel. Mirrors the server's
// docs/snapshot-protocol.md, schema version 1. Unknown fields in incoming
// messages are ignored by construction (we only read what we know).

export const SNAPSHOT_SCHEMA_VERSION = 1;

export interface SimParams {
  num_voters: number;
  num_candidates: number;
  appeasement_delta: number;
  falloff_rate: number;
  max_openness: number;
  max_tolerance: number;
  seed: number;
}

export interface CandidateView {
  id: number;
  label: string;
  position: [number, number];
  repulsion: number;
}

export interface ScandalView {
  id: number;
  target: number;
  potential: number;
  onset_time: number;
}

export interface TallyView {
  votes: Record<string, number>;
  abstentions: number;
  abstention_rate: number;
}

export interface Snapshot {
  schema_version: number;
  session: string;
  time: number;
  play_state: "paused" | "running";
  tick_rate: number;
  candidates: CandidateView[];
  scandals: ScandalView[];
  voters: {
    total: number;
    sampled: number;
    ids: number[];
    positions: [number, number][];
  };
  tally: TallyView;
}

export type CommandType =
  | "configure"
  | "start"
  | "pause"
  | "resume"
  | "set_speed"
  | "trigger_scandal"
  | "reset"
  | "request_snapshot";

export interface ServerMessage {
  type: "ack" | "error" | "snapshot";
  seq: number | null;
  payload: Record<string, unknown>;
}

export function isServerMessage(value: unknown): value is ServerMessage {
  if (typeof value !== "object" || value === null) return false;
  const message = value as Record<string, unknown>;
  return (
    (message.type === "ack" || message.type === "error" || message.type === "snapshot") &&
    typeof message.payload === "object" &&
    message.payload !== null
  );
}

export function asSnapshot(payload: Record<string, unknown>): Snapshot | null {
  if (typeof payload.time !== "number" || !Array.isArray(payload.candidates)) return null;
  return payload as unknown as Snapshot;
}

// Field ranges enforced by the server; the form validates against the same
// bounds before submitting.
export interface FieldRange {
  min: number;
  max: number;
  integer: boolean;
  label: string;
}

export const PARAM_RANGES: Record<keyof SimParams, FieldRange> = {
  num_voters: { min: 0, max: 1_000_000, integer: true, label: "Voters" },
  num_candidates: { min: 0, max: 100, integer: true, label: "Candidates" },
  appeasement_delta: { min: 0, max: 1, integer: false, label: "Appeasement delta" },
  falloff_rate: { min: 0, max: 1, integer: false, label: "Scandal falloff rate" },
  max_openness: { min: 0, max: 10, integer: false, label: "Max openness" },
  max_tolerance: { min: 0, max: 100, integer: false, label: "Max tolerance" },
  seed: { min: 0, max: Number.MAX_SAFE_INTEGER, integer: true, label: "Seed" },
};

export const DEFAULT_PARAMS: SimParams = {
  num_voters: 500,
  num_candidates: 5,
  appeasement_delta: 0.01,
  falloff_rate: 0.05,
  max_openness: 0.25,
  max_tolerance: 1.0,
  seed: 2017,
};

export function validateParams(values: Partial<SimParams>): Map<keyof SimParams, string> {
  const errors = new Map<keyof SimParams, string>();
  for (const key of Object.keys(PARAM_RANGES) as (keyof SimParams)[]) {
    const range = PARAM_RANGES[key];
    const value = values[key];
    if (value === undefined || Number.isNaN(value)) {
      errors.set(key, "required");
      continue;
    }
    if (range.integer && !Number.isInteger(value)) {
      errors.set(key, "must be an integer");
      continue;
    }
    if (value < range.min || value > range.max) {
      errors.set(key, `must be within [${range.min}, ${range.max}]`);
    }
  }
  return errors;
}
