// The rendered tally panel must equal the snapshot's tally values
// field-for-field, and re-rendering from scratch (a "reload") must
// reproduce the identical frame. The fixture is a real snapshot captured
// from a paused service session.

import { describe, expect, it } from "vitest";
import { buildTallyRows, electorateSize, renderTallyPanel } from "../src/tallyPanel";
import type { Snapshot } from "../src/protocol";
import fixture from "./fixtures/snapshot.json";

const snapshot = fixture as unknown as Snapshot;

describe("tally panel", () => {
  it("is a field-for-field projection of the snapshot tally", () => {
    const root = document.createElement("div");
    renderTallyPanel(root, snapshot);

    for (const candidate of snapshot.candidates) {
      const row = root.querySelector<HTMLTableRowElement>(`[data-candidate="${candidate.id}"]`);
      expect(row, `row for candidate ${candidate.id}`).toBeTruthy();
      expect(row!.dataset.votes).toBe(String(snapshot.tally.votes[String(candidate.id)]));
      expect(row!.cells[0].textContent).toBe(candidate.label);
      expect(row!.cells[1].textContent).toBe(String(snapshot.tally.votes[String(candidate.id)]));
    }
    const abstention = root.querySelector<HTMLElement>(".abstention")!;
    expect(abstention.dataset.abstentions).toBe(String(snapshot.tally.abstentions));
    expect(abstention.dataset.abstentionRate).toBe(String(snapshot.tally.abstention_rate));
  });

  it("reload reproduces the identical frame", () => {
    const first = document.createElement("div");
    const second = document.createElement("div");
    renderTallyPanel(first, snapshot);
    renderTallyPanel(second, snapshot);
    expect(second.innerHTML).toBe(first.innerHTML);
  });

  it("derives shares over the full electorate", () => {
    expect(electorateSize(snapshot)).toBe(40);
    const rows = buildTallyRows(snapshot);
    const total = rows.reduce((a, r) => a + r.share, 0) + snapshot.tally.abstention_rate;
    expect(total).toBeCloseTo(1.0, 12);
  });

  it("renders zero-vote candidates rather than dropping them", () => {
    const root = document.createElement("div");
    renderTallyPanel(root, snapshot);
    const zeroRow = root.querySelector<HTMLElement>('[data-candidate="1"]');
    expect(zeroRow!.dataset.votes).toBe("0");
  });
});
