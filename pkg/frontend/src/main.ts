/** Application entry point: loads the case from the service, then wires
 * the tree, sliders, and analysis panels together. The view is rebuilt
 * purely from service responses; resetting restores the baseline run
 * exactly as it was first received.
 */

import { ApiClient, ApiError, WhatifChannel, isAbort } from "./api.js";
import {
  applyLint,
  applyPropagation,
  buildView,
  resetView,
} from "./model.js";
import type { CaseView } from "./model.js";
import { renderBounds, renderSensitivity } from "./panels.js";
import { SliderPanel } from "./sliders.js";
import { renderTree } from "./tree.js";

export interface AppHandle {
  view: CaseView;
  panel: SliderPanel;
  /** Send one batch of slider positions; resolves once the view settled. */
  submit(batch: Record<string, number>): Promise<void>;
  reset(): void;
}

function section(className: string): HTMLElement {
  const element = document.createElement("section");
  element.className = className;
  return element;
}

/** Load everything, render, and return a handle; on failure render an
 * error state with a retry control and resolve null. */
export async function startApp(
  root: HTMLElement,
  base = "",
): Promise<AppHandle | null> {
  const client = new ApiClient(base);
  const channel = new WhatifChannel(base);

  root.textContent = "";
  const status = document.createElement("div");
  status.className = "status";
  status.textContent = "Loading case...";
  root.appendChild(status);

  try {
    const [casePayload, lint, sensitivity, bounds] = await Promise.all([
      client.fetchCase(),
      client.fetchLint(),
      client.fetchSensitivity(),
      client.fetchBounds(),
    ]);

    const view = buildView(casePayload);
    applyLint(view, lint.findings);

    root.textContent = "";
    const header = document.createElement("header");
    const title = document.createElement("h1");
    title.textContent = "Assurance case explorer";
    const subtitle = document.createElement("div");
    subtitle.className = "case-top";
    subtitle.textContent = view.top.label;
    header.append(title, subtitle);

    const layout = document.createElement("div");
    layout.className = "layout";
    const treePanel = section("tree-panel");
    const side = document.createElement("aside");
    side.className = "side";
    const slidersPanel = section("sliders-panel");
    const sensitivityPanel = section("sensitivity-panel");
    const boundsPanel = section("bounds-panel");
    side.append(slidersPanel, sensitivityPanel, boundsPanel);
    layout.append(treePanel, side);
    root.append(header, layout);

    renderTree(view, treePanel);
    renderSensitivity(sensitivityPanel, sensitivity.entries);
    renderBounds(boundsPanel, bounds.blocks);

    const submit = async (batch: Record<string, number>): Promise<void> => {
      const combined = { ...view.overrides, ...batch };
      try {
        const payload = await channel.send(combined);
        applyPropagation(view, payload, combined);
        renderTree(view, treePanel);
        panel.clearError();
        panel.refresh();
      } catch (error) {
        if (isAbort(error)) {
          return;
        }
        const message =
          error instanceof ApiError || error instanceof Error
            ? error.message
            : String(error);
        panel.showError(message);
      }
    };

    const reset = (): void => {
      channel.cancel();
      resetView(view);
      panel.clearError();
      panel.refresh();
      renderTree(view, treePanel);
    };

    const panel = new SliderPanel(slidersPanel, view, {
      onOverrides: (batch) => {
        void submit(batch);
      },
      onReset: reset,
    });

    return { view, panel, submit, reset };
  } catch (error) {
    const message = error instanceof Error ? error.message : String(error);
    root.textContent = "";
    const failure = document.createElement("div");
    failure.className = "status error";
    failure.textContent = `Failed to load the case: ${message}`;
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      void startApp(root, base);
    });
    failure.appendChild(retry);
    root.appendChild(failure);
    return null;
  }
}

const mount = document.getElementById("app");
if (mount !== null) {
  void startApp(mount);
}
