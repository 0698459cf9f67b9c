// Discrete speed presets over a base tick rate; each press is one
// set_speed command. Presentation-level only, the model never changes.

export const BASE_TICK_RATE = 10;
export const SPEED_MULTIPLIERS = [0.25, 1, 4, 16] as const;

export function rateFor(multiplier: number): number {
  return BASE_TICK_RATE * multiplier;
}

export function mountSpeedControl(
  root: HTMLElement,
  sendRate: (rate: number) => Promise<number>,
): void {
  const group = document.createElement("div");
  group.className = "speed-control";
  for (const multiplier of SPEED_MULTIPLIERS) {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = `${multiplier}x`;
    button.dataset.multiplier = String(multiplier);
    if (multiplier === 1) button.classList.add("active");
    button.addEventListener("click", () => {
      void sendRate(rateFor(multiplier)).then(() => {
        group.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
        button.classList.add("active");
      });
    });
    group.appendChild(button);
  }
  root.replaceChildren(group);
}
