/** Argument tree rendering: one expandable element per claim, with the
 * supporting block's details and the sideclaim attached to the step
 * that uses it. Colors scale with the displayed confidence.
 */

import { formatConfidence, formatDelta } from "./format.js";
import type { BlockView, CaseView, NodeView } from "./model.js";

/** Green at full confidence through amber to red at none. */
export function confidenceColor(value: number): string {
  const clamped = Math.min(1, Math.max(0, value));
  return `hsl(${Math.round(clamped * 120)}, 70%, 42%)`;
}

function valueBadge(node: NodeView): HTMLElement {
  const badge = document.createElement("span");
  badge.className = "value-badge";
  badge.dataset.value = String(node.current);
  badge.textContent = formatConfidence(node.current);
  badge.style.backgroundColor = confidenceColor(node.current);
  return badge;
}

function deltaBadge(node: NodeView): HTMLElement | null {
  const text = formatDelta(node.current, node.baseline);
  if (text === "") {
    return null;
  }
  const badge = document.createElement("span");
  badge.className = "delta-badge";
  badge.textContent = text;
  return badge;
}

function warningBadge(node: NodeView): HTMLElement | null {
  if (node.warnings.length === 0) {
    return null;
  }
  const badge = document.createElement("span");
  badge.className = "warning-badge";
  badge.textContent = `! ${node.warnings.length}`;
  badge.title = node.warnings.join("\n");
  return badge;
}

function blockDetails(block: BlockView): HTMLElement {
  const details = document.createElement("div");
  details.className = "block-details";
  const parts = [`${block.kind}`];
  if (block.mode !== null) {
    parts.push(`mode ${block.mode}`);
  }
  if (block.k !== 1.0) {
    parts.push(`k ${formatConfidence(block.k)}`);
  }
  if (!block.justified) {
    parts.push("unjustified");
  }
  details.textContent = parts.join(" | ");
  if (block.sideclaim !== null) {
    const side = document.createElement("div");
    side.className = "sideclaim";
    side.dataset.node = block.sideclaim.id;
    side.textContent =
      `sideclaim ${block.sideclaim.id}: ` +
      `${formatConfidence(block.sideclaim.current)}`;
    side.title = block.sideclaim.label;
    details.appendChild(side);
  }
  return details;
}

function renderNode(node: NodeView): HTMLElement {
  const item = document.createElement("li");
  item.dataset.node = node.id;
  const header = document.createElement("div");
  header.className = node.isEvidence ? "node evidence" : "node claim";

  const name = document.createElement("span");
  name.className = "node-id";
  name.textContent = node.id;
  name.title = node.label;
  header.appendChild(name);
  header.appendChild(valueBadge(node));
  const delta = deltaBadge(node);
  if (delta !== null) {
    header.appendChild(delta);
  }
  const warning = warningBadge(node);
  if (warning !== null) {
    header.appendChild(warning);
  }
  const statement = document.createElement("div");
  statement.className = "node-statement";
  statement.textContent = node.label;
  item.append(header, statement);

  if (node.support !== null) {
    item.appendChild(blockDetails(node.support));
    const children = document.createElement("ul");
    children.className = "subclaims";
    for (const child of node.support.subclaims) {
      children.appendChild(renderNode(child));
    }
    item.appendChild(children);
  }
  return item;
}

/** Replace the container's contents with the current tree. */
export function renderTree(view: CaseView, container: HTMLElement): void {
  container.textContent = "";
  const topBadge = document.createElement("div");
  topBadge.className = "top-line";
  topBadge.dataset.top = view.top.id;
  const label = document.createElement("span");
  label.textContent = `top ${view.top.id}: `;
  const value = document.createElement("span");
  value.className = "top-confidence";
  value.dataset.value = String(view.top.current);
  value.textContent = formatConfidence(view.top.current);
  value.style.color = confidenceColor(view.top.current);
  topBadge.append(label, value);
  const topDelta = deltaBadge(view.top);
  if (topDelta !== null) {
    topBadge.appendChild(topDelta);
  }
  container.appendChild(topBadge);

  const root = document.createElement("ul");
  root.className = "tree";
  root.appendChild(renderNode(view.top));
  container.appendChild(root);

  if (view.unattached.length > 0) {
    const strays = document.createElement("ul");
    strays.className = "tree unattached";
    for (const node of view.unattached) {
      strays.appendChild(renderNode(node));
    }
    container.appendChild(strays);
  }

  for (const warning of view.warnings) {
    const line = document.createElement("div");
    line.className = "case-warning";
    line.textContent = warning;
    container.appendChild(line);
  }
}
