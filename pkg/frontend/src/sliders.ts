/** Slider panel: one row per node, enabled only on leaves.
 *
 * Slider moves are debounced and handed to the caller as one combined
 * overrides object; the caller owns the service round trip. A service
 * rejection is surfaced inline on the sliders it names.
 */

import { formatConfidence } from "./format.js";
import type { CaseView, NodeView } from "./model.js";

export const DEBOUNCE_MS = 150;

export interface SliderCallbacks {
  onOverrides(overrides: Record<string, number>): void;
  onReset(): void;
}

/** Collects rapid changes and fires once the input goes quiet. */
export class Debouncer {
  private pending: Record<string, number> = {};
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly fire: (overrides: Record<string, number>) => void,
    private readonly delay: number = DEBOUNCE_MS,
  ) {}

  change(id: string, value: number): void {
    this.pending[id] = value;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      const batch = this.pending;
      this.pending = {};
      this.fire(batch);
    }, this.delay);
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = {};
  }
}

export class SliderPanel {
  private readonly rows = new Map<
    string,
    { input: HTMLInputElement; value: HTMLElement; error: HTMLElement }
  >();
  private readonly debouncer: Debouncer;

  constructor(
    private readonly root: HTMLElement,
    private readonly view: CaseView,
    callbacks: SliderCallbacks,
  ) {
    this.debouncer = new Debouncer((batch) => callbacks.onOverrides(batch));
    this.root.textContent = "";
    const heading = document.createElement("div");
    heading.className = "panel-heading";
    heading.textContent = "Leaf confidences";
    const reset = document.createElement("button");
    reset.type = "button";
    reset.className = "reset";
    reset.textContent = "Reset to baseline";
    reset.addEventListener("click", () => {
      this.debouncer.cancel();
      callbacks.onReset();
    });
    heading.appendChild(reset);
    this.root.appendChild(heading);
    for (const node of view.byId.values()) {
      this.root.appendChild(this.buildRow(node));
    }
  }

  private buildRow(node: NodeView): HTMLElement {
    const row = document.createElement("div");
    row.className = "slider-row";
    row.dataset.node = node.id;

    const label = document.createElement("label");
    label.textContent = node.id;
    label.title = node.label;

    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "1";
    input.step = "0.0001";
    input.value = String(node.current);
    input.disabled = !node.isLeaf;
    if (!node.isLeaf) {
      input.title = "computed by its supporting block";
    }
    input.addEventListener("input", () => {
      value.textContent = formatConfidence(Number(input.value));
      this.clearError(node.id);
      this.debouncer.change(node.id, Number(input.value));
    });

    const value = document.createElement("span");
    value.className = "slider-value";
    value.textContent = formatConfidence(node.current);

    const error = document.createElement("span");
    error.className = "slider-error";

    row.append(label, input, value, error);
    this.rows.set(node.id, { input, value, error });
    return row;
  }

  /** Move the controls to match the view after a response or reset. */
  refresh(): void {
    for (const node of this.view.byId.values()) {
      const row = this.rows.get(node.id);
      if (row === undefined) {
        continue;
      }
      const override = this.view.overrides[node.id];
      const shown = override !== undefined ? override : node.current;
      row.input.value = String(shown);
      row.value.textContent = formatConfidence(shown);
    }
  }

  /** Attach a service rejection to the sliders its message names. */
  showError(message: string): void {
    let placed = false;
    for (const [id, row] of this.rows) {
      if (message.includes(`'${id}'`)) {
        row.error.textContent = message;
        placed = true;
      }
    }
    if (!placed) {
      const first = this.rows.values().next().value;
      if (first !== undefined) {
        first.error.textContent = message;
      }
    }
  }

  clearError(id?: string): void {
    for (const [rowId, row] of this.rows) {
      if (id === undefined || rowId === id) {
        row.error.textContent = "";
      }
    }
  }
}
