/** Read-only side panels: sensitivity and dependence bounds. Both show
 * the baseline analysis; the service computes them on the loaded case.
 */

import { formatConfidence } from "./format.js";
import type { BoundsEntryPayload, SensitivityEntryPayload } from "./model.js";

export function renderSensitivity(
  root: HTMLElement,
  entries: SensitivityEntryPayload[],
): void {
  root.textContent = "";
  const heading = document.createElement("div");
  heading.className = "panel-heading";
  heading.textContent = "Sensitivity (effect on top claim)";
  root.appendChild(heading);
  const list = document.createElement("table");
  list.className = "sensitivity";
  const ordered = [...entries].sort(
    (a, b) => b.derivative - a.derivative || a.leaf.localeCompare(b.leaf),
  );
  for (const entry of ordered) {
    const row = document.createElement("tr");
    row.dataset.leaf = entry.leaf;
    const name = document.createElement("td");
    name.textContent = entry.leaf;
    const derivative = document.createElement("td");
    derivative.textContent = formatConfidence(entry.derivative);
    if (entry.one_sided) {
      derivative.textContent += " (one-sided)";
    }
    const range = document.createElement("td");
    range.textContent =
      `${formatConfidence(entry.at_zero)} at 0, ` +
      `${formatConfidence(entry.at_one)} at 1`;
    row.append(name, derivative, range);
    list.appendChild(row);
  }
  root.appendChild(list);
}

export function renderBounds(
  root: HTMLElement,
  blocks: BoundsEntryPayload[],
): void {
  root.textContent = "";
  const heading = document.createElement("div");
  heading.className = "panel-heading";
  heading.textContent = "Dependence bounds";
  root.appendChild(heading);
  if (blocks.length === 0) {
    const empty = document.createElement("div");
    empty.className = "panel-empty";
    empty.textContent = "No combining blocks in this case.";
    root.appendChild(empty);
    return;
  }
  const list = document.createElement("table");
  list.className = "bounds";
  for (const entry of blocks) {
    const row = document.createElement("tr");
    row.dataset.block = entry.block;
    const name = document.createElement("td");
    name.textContent = entry.block;
    const interval = document.createElement("td");
    interval.textContent =
      `[${formatConfidence(entry.low)}, ${formatConfidence(entry.high)}]`;
    const point = document.createElement("td");
    point.textContent = `point ${formatConfidence(entry.point)}`;
    row.append(name, interval, point);
    list.appendChild(row);
  }
  root.appendChild(list);
}
