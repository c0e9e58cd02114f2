/** Service payload types and the view model built from them.
 *
 * Every confidence shown in the UI comes verbatim from a service
 * response; this module only arranges values, it never computes them.
 */

export interface ResidualEntry {
  class: string;
  count: number;
}

export interface ConfirmationEntry {
  p_e_given_c: number;
  p_e_given_not_c: number;
}

export interface NodeEntry {
  id: string;
  node_type: "claim" | "evidence";
  kind?: string;
  statement?: string;
  description?: string;
  confidence?: number;
  measurement_fidelity?: number;
  confirmation?: ConfirmationEntry;
  residual?: ResidualEntry;
}

export interface BlockEntry {
  id: string;
  kind: string;
  parent: string;
  subclaims: string[];
  sideclaim?: string;
  mode?: string;
  weights?: number[];
  conditionals?: (number | null)[];
  k?: number;
  justified?: boolean;
}

export interface CaseDocumentPayload {
  version: string;
  nodes: NodeEntry[];
  blocks: BlockEntry[];
  top: string;
  networks?: Record<string, unknown>;
}

export interface PropagationPayload {
  nodes: Record<string, number>;
  top: string;
  top_confidence: number;
  blocks: {
    block: string;
    parent: string;
    subclaim_confidences: number[];
    sideclaim_confidence: number;
    output: number;
  }[];
  warnings: string[];
}

export interface CasePayload {
  document: CaseDocumentPayload;
  baseline: PropagationPayload;
}

export interface LintFindingPayload {
  rule: string;
  severity: string;
  node: string | null;
  message: string;
}

export interface SensitivityEntryPayload {
  leaf: string;
  derivative: number;
  at_zero: number;
  at_one: number;
  one_sided: boolean;
}

export interface BoundsEntryPayload {
  block: string;
  low: number;
  high: number;
  point: number;
}

/** One node of the rendered argument tree. */
export interface NodeView {
  id: string;
  label: string;
  isEvidence: boolean;
  isLeaf: boolean;
  kind: string;
  baseline: number;
  current: number;
  warnings: string[];
  /** The block giving this node its value, absent on leaves. */
  support: BlockView | null;
}

export interface BlockView {
  id: string;
  kind: string;
  mode: string | null;
  k: number;
  justified: boolean;
  subclaims: NodeView[];
  /** The sideclaim node, rendered attached to the block. */
  sideclaim: NodeView | null;
}

export interface CaseView {
  top: NodeView;
  /** Every node, including sideclaims and any unreachable strays. */
  byId: Map<string, NodeView>;
  /** Nodes not reachable from the top claim, in document order. */
  unattached: NodeView[];
  overrides: Record<string, number>;
  warnings: string[];
}

function nodeLabel(entry: NodeEntry): string {
  return entry.statement ?? entry.description ?? entry.id;
}

/** Arrange the document and its baseline run into a renderable tree. */
export function buildView(payload: CasePayload): CaseView {
  const { document, baseline } = payload;
  const byId = new Map<string, NodeView>();
  const blocksByParent = new Map<string, BlockEntry>();
  for (const block of document.blocks) {
    blocksByParent.set(block.parent, block);
  }
  for (const entry of document.nodes) {
    const value = baseline.nodes[entry.id] ?? Number.NaN;
    byId.set(entry.id, {
      id: entry.id,
      label: nodeLabel(entry),
      isEvidence: entry.node_type === "evidence",
      isLeaf: !blocksByParent.has(entry.id),
      kind: entry.kind ?? (entry.node_type === "evidence" ? "evidence" : "ordinary"),
      baseline: value,
      current: value,
      warnings: [],
      support: null,
    });
  }
  const attached = new Set<string>();

  function attach(id: string): NodeView {
    const view = byId.get(id);
    if (view === undefined) {
      throw new Error(`document references unknown node '${id}'`);
    }
    if (attached.has(id)) {
      return view;
    }
    attached.add(id);
    const block = blocksByParent.get(id);
    if (block !== undefined) {
      view.support = {
        id: block.id,
        kind: block.kind,
        mode: block.mode ?? null,
        k: block.k ?? 1.0,
        justified: block.justified ?? false,
        subclaims: block.subclaims.map(attach),
        sideclaim: block.sideclaim !== undefined ? attach(block.sideclaim) : null,
      };
    }
    return view;
  }

  const top = attach(document.top);
  const unattached = document.nodes
    .filter((entry) => !attached.has(entry.id))
    .map((entry) => byId.get(entry.id)!);
  return { top, byId, unattached, overrides: {}, warnings: [...baseline.warnings] };
}

/** Record lint findings on the nodes they point at. */
export function applyLint(view: CaseView, findings: LintFindingPayload[]): void {
  for (const node of view.byId.values()) {
    node.warnings = [];
  }
  for (const finding of findings) {
    if (finding.node !== null) {
      const node = view.byId.get(finding.node);
      if (node !== undefined) {
        node.warnings.push(`${finding.rule}: ${finding.message}`);
      }
    }
  }
}

/** Refresh every displayed value from one propagation response. */
export function applyPropagation(
  view: CaseView,
  payload: PropagationPayload,
  overrides: Record<string, number>,
): void {
  for (const [id, value] of Object.entries(payload.nodes)) {
    const node = view.byId.get(id);
    if (node !== undefined) {
      node.current = value;
    }
  }
  view.overrides = { ...overrides };
}

/** Put every value back to the baseline run. */
export function resetView(view: CaseView): void {
  for (const node of view.byId.values()) {
    node.current = node.baseline;
  }
  view.overrides = {};
}

function nodeState(view: NodeView): unknown {
  return {
    id: view.id,
    label: view.label,
    isEvidence: view.isEvidence,
    isLeaf: view.isLeaf,
    kind: view.kind,
    baseline: view.baseline,
    current: view.current,
    warnings: view.warnings,
    support:
      view.support === null
        ? null
        : {
            id: view.support.id,
            kind: view.support.kind,
            mode: view.support.mode,
            k: view.support.k,
            justified: view.support.justified,
            subclaims: view.support.subclaims.map(nodeState),
            sideclaim:
              view.support.sideclaim === null
                ? null
                : nodeState(view.support.sideclaim),
          },
  };
}

/** Stable serialization of the whole view, used to compare UI states. */
export function serializeView(view: CaseView): string {
  return JSON.stringify({
    top: nodeState(view.top),
    unattached: view.unattached.map(nodeState),
    overrides: view.overrides,
    warnings: view.warnings,
  });
}

/** Leaves in document order; the only nodes whose sliders are enabled. */
export function leafIds(view: CaseView): string[] {
  return [...view.byId.values()].filter((n) => n.isLeaf).map((n) => n.id);
}
