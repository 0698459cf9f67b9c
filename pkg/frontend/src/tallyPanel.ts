// Tally panel: a pure projection of the snapshot's tally field. Values are
// rendered exactly as reported; shares are votes over the full electorate.

import type { Snapshot } from "./protocol.js";

export interface TallyRow {
  id: number;
  label: string;
  votes: number;
  share: number;
}

export function electorateSize(snapshot: Snapshot): number {
  const votes = Object.values(snapshot.tally.votes).reduce((a, b) => a + b, 0);
  return votes + snapshot.tally.abstentions;
}

export function buildTallyRows(snapshot: Snapshot): TallyRow[] {
  const total = electorateSize(snapshot);
  return snapshot.candidates.map((candidate) => {
    const votes = snapshot.tally.votes[String(candidate.id)] ?? 0;
    return {
      id: candidate.id,
      label: candidate.label,
      votes,
      share: total > 0 ? votes / total : 0,
    };
  });
}

export function formatShare(share: number): string {
  return `${(share * 100).toFixed(1)}%`;
}

export function renderTallyPanel(root: HTMLElement, snapshot: Snapshot): void {
  const rows = buildTallyRows(snapshot);
  const table = document.createElement("table");
  table.className = "tally";
  const head = table.insertRow();
  for (const title of ["Candidate", "Votes", "Share"]) {
    const cell = document.createElement("th");
    cell.textContent = title;
    head.appendChild(cell);
  }
  for (const row of rows) {
    const tr = table.insertRow();
    tr.dataset.candidate = String(row.id);
    tr.dataset.votes = String(row.votes);
    tr.insertCell().textContent = row.label;
    tr.insertCell().textContent = String(row.votes);
    tr.insertCell().textContent = formatShare(row.share);
  }
  const abstention = table.insertRow();
  abstention.className = "abstention";
  abstention.dataset.abstentions = String(snapshot.tally.abstentions);
  abstention.dataset.abstentionRate = String(snapshot.tally.abstention_rate);
  abstention.insertCell().textContent = "Abstention";
  abstention.insertCell().textContent = String(snapshot.tally.abstentions);
  abstention.insertCell().textContent = formatShare(snapshot.tally.abstention_rate);

  root.replaceChildren(table);
}
