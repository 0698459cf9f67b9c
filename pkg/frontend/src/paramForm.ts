// Parameter screen: one input per global knob, validated against the same
// ranges the server enforces. Submission is disabled while a session is
// being created so a double click cannot open two sessions.

import {
  DEFAULT_PARAMS,
  PARAM_RANGES,
  validateParams,
  type SimParams,
} from "./protocol.js";

export type SubmitHandler = (params: SimParams) => Promise<void>;

const FIELD_ORDER: (keyof SimParams)[] = [
  "num_voters",
  "num_candidates",
  "appeasement_delta",
  "falloff_rate",
  "max_openness",
  "max_tolerance",
  "seed",
];

export class ParamForm {
  private submitting = false;

  constructor(private root: HTMLElement, private onSubmit: SubmitHandler) {}

  mount(): void {
    const form = document.createElement("form");
    form.id = "param-form";
    form.noValidate = true;

    for (const key of FIELD_ORDER) {
      const range = PARAM_RANGES[key];
      const row = document.createElement("label");
      row.className = "field";
      const caption = document.createElement("span");
      caption.textContent = range.label;
      const input = document.createElement("input");
      input.name = key;
      input.type = "number";
      input.step = range.integer ? "1" : "any";
      input.value = String(DEFAULT_PARAMS[key]);
      const error = document.createElement("em");
      error.className = "field-error";
      error.dataset.for = key;
      row.append(caption, input, error);
      form.appendChild(row);
    }

    const legend = document.createElement("p");
    legend.className = "form-note";
    legend.textContent =
      "Individual voter traits are drawn at random below the maxima. " +
      "The scandal falloff rate is part of the model configuration even " +
      "though the original selection screen lists only the appeasement delta.";
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "Create simulation";
    form.append(legend, submit);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit(form, submit);
    });
    this.root.replaceChildren(form);
  }

  read(form: HTMLFormElement): Partial<SimParams> {
    const values: Partial<SimParams> = {};
    for (const key of FIELD_ORDER) {
      const input = form.elements.namedItem(key) as HTMLInputElement;
      values[key] = input.value === "" ? Number.NaN : Number(input.value);
    }
    return values;
  }

  private showErrors(form: HTMLFormElement, errors: Map<keyof SimParams, string>): void {
    for (const key of FIELD_ORDER) {
      const slot = form.querySelector<HTMLElement>(`[data-for="${key}"]`);
      if (slot) slot.textContent = errors.get(key) ?? "";
    }
  }

  private async submit(form: HTMLFormElement, button: HTMLButtonElement): Promise<void> {
    if (this.submitting) return;
    const values = this.read(form);
    const errors = validateParams(values);
    this.showErrors(form, errors);
    if (errors.size > 0) return;

    this.submitting = true;
    button.disabled = true;
    try {
      await this.onSubmit(values as SimParams);
    } catch (error) {
      const slot = form.querySelector<HTMLElement>(`[data-for="seed"]`);
      if (slot) slot.textContent = error instanceof Error ? error.message : String(error);
    } finally {
      this.submitting = false;
      button.disabled = false;
    }
  }
}
