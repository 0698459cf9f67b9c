// Console wiring: parameter screen first, then the live view. All state
// shown here is server-acknowledged; the page can be reloaded at any time
// and rebuilds itself from the next snapshot.

import { SessionClient } from "./client.js";
import { LiveView } from "./liveView.js";
import { ParamForm } from "./paramForm.js";
import { ScandalControl } from "./scandalControl.js";
import { mountSpeedControl } from "./speedControl.js";
import { Store } from "./state.js";
import { renderTallyPanel } from "./tallyPanel.js";
import type { SimParams } from "./protocol.js";

function serviceBaseUrl(): string {
  const override = new URLSearchParams(window.location.search).get("service");
  return override ?? "http://localhost:8000";
}

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function main(): void {
  const store = new Store();
  const client = new SessionClient(serviceBaseUrl(), store);

  const setupScreen = el("screen-setup");
  const liveScreen = el("screen-live");
  const banner = el("connection-banner");
  const statusLine = el("status-line");
  const canvas = el("plane") as HTMLCanvasElement;
  const view = new LiveView(canvas);
  const scandals = new ScandalControl(el("scandal-slot"), (candidate, potential) =>
    client.send("trigger_scandal", { candidate, potential }),
  );

  const form = new ParamForm(el("form-slot"), async (params: SimParams) => {
    await client.createSession(params);
    // the selection screen's contract: configure, then start
    await client.send("configure", { params });
    await client.send("start", {});
    setupScreen.hidden = true;
    liveScreen.hidden = false;
  });
  form.mount();

  mountSpeedControl(el("speed-slot"), (rate) => client.send("set_speed", { rate }));
  scandals.mount();

  const playPause = el("play-pause") as HTMLButtonElement;
  playPause.addEventListener("click", () => {
    const snapshot = store.current.snapshot;
    if (!snapshot) return;
    const command = snapshot.play_state === "running" ? "pause" : "resume";
    void client.send(command, {});
  });
  (el("reset") as HTMLButtonElement).addEventListener("click", () => {
    void client.send("reset", {});
  });

  let lastSnapshotAt = 0;
  store.subscribe((model) => {
    banner.hidden = model.connection === "open";
    banner.textContent =
      model.connection === "reconnecting" ? "connection lost - reconnecting" : "connecting";
    const snapshot = model.snapshot;
    if (!snapshot) return;
    if (snapshot !== model.previousSnapshot) lastSnapshotAt = performance.now();
    renderTallyPanel(el("tally-slot"), snapshot);
    scandals.syncCandidates(snapshot);
    playPause.textContent = snapshot.play_state === "running" ? "Pause" : "Resume";
    statusLine.textContent =
      `step ${snapshot.time} | ${snapshot.play_state} | ` +
      `${snapshot.tick_rate} steps/s | ${snapshot.voters.total} voters`;
  });

  function frame(now: number): void {
    const { snapshot, previousSnapshot } = store.current;
    if (snapshot && !liveScreen.hidden) {
      const interval = 1000 / Math.max(snapshot.tick_rate, 1);
      const alpha = Math.min(1, (now - lastSnapshotAt) / interval);
      view.render(snapshot, previousSnapshot, alpha, now);
    }
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

main();
