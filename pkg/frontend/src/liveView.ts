// Canvas rendering of the opinion plane. Candidates are fixed markers whose
// halo radius grows affinely with repulsion; voters are points; candidates
// under an active scandal pulse. Tweening between snapshots is cosmetic.

import type { Snapshot } from "./protocol.js";

export const CANDIDATE_RADIUS = 7;
export const HALO_BASE = 9;
export const HALO_SCALE = 26;

const CANDIDATE_COLORS = [
  "#d62728",
  "#1f77b4",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#e377c2",
  "#17becf",
];

export function haloRadius(repulsion: number): number {
  return HALO_BASE + HALO_SCALE * repulsion;
}

export function candidateColor(index: number): string {
  return CANDIDATE_COLORS[index % CANDIDATE_COLORS.length];
}

/** Linear tween of matching voter ids; unmatched voters stay at `next`. */
export function tweenVoterPositions(
  previous: Snapshot | null,
  next: Snapshot,
  alpha: number,
): [number, number][] {
  if (!previous || previous.session !== next.session || alpha >= 1) {
    return next.voters.positions;
  }
  const prevById = new Map<number, [number, number]>();
  previous.voters.ids.forEach((id, i) => prevById.set(id, previous.voters.positions[i]));
  return next.voters.positions.map((pos, i) => {
    const before = prevById.get(next.voters.ids[i]);
    if (!before) return pos;
    return [
      before[0] + (pos[0] - before[0]) * alpha,
      before[1] + (pos[1] - before[1]) * alpha,
    ];
  });
}

export class LiveView {
  private ctx: CanvasRenderingContext2D | null;

  constructor(private canvas: HTMLCanvasElement) {
    this.ctx = canvas.getContext("2d");
  }

  render(snapshot: Snapshot, previous: Snapshot | null, alpha: number, nowMs: number): void {
    const ctx = this.ctx;
    if (!ctx) return;
    const { width, height } = this.canvas;
    const px = (x: number) => x * width;
    const py = (y: number) => (1 - y) * height; // y up, like the opinion plane

    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#fcfcf7";
    ctx.fillRect(0, 0, width, height);

    const scandalTargets = new Set(snapshot.scandals.map((s) => s.target));

    // voters beneath everything else
    ctx.fillStyle = "rgba(60, 60, 70, 0.55)";
    for (const [x, y] of tweenVoterPositions(previous, snapshot, alpha)) {
      ctx.beginPath();
      ctx.arc(px(x), py(y), 2.2, 0, Math.PI * 2);
      ctx.fill();
    }

    snapshot.candidates.forEach((candidate, index) => {
      const cx = px(candidate.position[0]);
      const cy = py(candidate.position[1]);
      const color = candidateColor(index);

      ctx.beginPath();
      ctx.arc(cx, cy, haloRadius(candidate.repulsion), 0, Math.PI * 2);
      ctx.fillStyle = "rgba(214, 39, 40, 0.18)";
      ctx.fill();

      if (scandalTargets.has(candidate.id)) {
        const pulse = 1 + 0.25 * Math.sin(nowMs / 120);
        ctx.beginPath();
        ctx.arc(cx, cy, haloRadius(candidate.repulsion) * pulse, 0, Math.PI * 2);
        ctx.strokeStyle = "rgba(214, 39, 40, 0.8)";
        ctx.lineWidth = 2;
        ctx.stroke();
      }

      ctx.beginPath();
      ctx.arc(cx, cy, CANDIDATE_RADIUS, 0, Math.PI * 2);
      ctx.fillStyle = color;
      ctx.fill();
      ctx.strokeStyle = "#222";
      ctx.lineWidth = 1.5;
      ctx.stroke();

      ctx.fillStyle = "#222";
      ctx.font = "12px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(candidate.label, cx, cy - haloRadius(candidate.repulsion) - 4);
    });
  }
}
