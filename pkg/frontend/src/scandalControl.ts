// Scandal trigger: pick a target candidate and an intensity in [0,1],
// send one trigger_scandal command, surface the acknowledged step or the
// server's rejection inline.

import type { Snapshot } from "./protocol.js";

export type TriggerSender = (candidate: number, potential: number) => Promise<number>;

export class ScandalControl {
  private select = document.createElement("select");
  private slider = document.createElement("input");
  private readout = document.createElement("span");
  private status = document.createElement("em");
  private button = document.createElement("button");

  constructor(private root: HTMLElement, private send: TriggerSender) {}

  mount(): void {
    const wrap = document.createElement("div");
    wrap.className = "scandal-control";

    this.select.name = "scandal-target";

    this.slider.type = "range";
    this.slider.name = "scandal-intensity";
    this.slider.min = "0";
    this.slider.max = "1";
    this.slider.step = "0.01";
    this.slider.value = "0.8";
    this.slider.addEventListener("input", () => this.reflectIntensity());

    this.readout.className = "intensity-readout";

    this.button.type = "button";
    this.button.textContent = "Trigger scandal";
    this.button.addEventListener("click", () => void this.fire());

    this.status.className = "scandal-status";

    wrap.append(this.select, this.slider, this.readout, this.button, this.status);
    this.root.replaceChildren(wrap);
    this.reflectIntensity();
  }

  /** Keep the target list in sync with the candidates the server reports. */
  syncCandidates(snapshot: Snapshot): void {
    const have = Array.from(this.select.options).map((o) => o.value);
    const want = snapshot.candidates.map((c) => String(c.id));
    if (have.join(",") === want.join(",")) return;
    this.select.replaceChildren(
      ...snapshot.candidates.map((candidate) => {
        const option = document.createElement("option");
        option.value = String(candidate.id);
        option.textContent = candidate.label;
        return option;
      }),
    );
  }

  private reflectIntensity(): void {
    const value = Number(this.slider.value);
    this.readout.textContent = value.toFixed(2);
    this.readout.classList.toggle("inert", value === 0);
    this.readout.title = value === 0 ? "zero intensity: legal but has no effect" : "";
  }

  private async fire(): Promise<void> {
    const candidate = Number(this.select.value);
    const potential = Number(this.slider.value);
    this.button.disabled = true;
    try {
      const step = await this.send(candidate, potential);
      this.status.textContent = `takes effect at step ${step}`;
      this.status.classList.remove("error");
    } catch (error) {
      this.status.textContent = error instanceof Error ? error.message : String(error);
      this.status.classList.add("error");
    } finally {
      this.button.disabled = false;
    }
  }
}
