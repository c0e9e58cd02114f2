/** Shared fixtures: a small nested case and canned service payloads. */

import type {
  CasePayload,
  LintFindingPayload,
  PropagationPayload,
} from "../src/model.js";

/** TOP is combined from A and M; M is substituted from B under
 * sideclaim S; U is a stray node outside the argument. The baseline
 * top value is deliberately not derivable from the leaves so a test
 * can prove values are shown verbatim rather than recomputed.
 */
export function nestedCase(): CasePayload {
  return {
    document: {
      version: "confprop/1",
      nodes: [
        {
          id: "TOP",
          node_type: "claim",
          kind: "ordinary",
          statement: "The service is acceptably safe.",
        },
        {
          id: "A",
          node_type: "evidence",
          description: "Field telemetry over one year.",
          confidence: 0.7,
        },
        {
          id: "M",
          node_type: "claim",
          kind: "ordinary",
          statement: "Bench results transfer to operation.",
        },
        {
          id: "B",
          node_type: "claim",
          kind: "measured",
          statement: "Bench results meet the target.",
          confidence: 0.6,
        },
        {
          id: "S",
          node_type: "claim",
          kind: "assumption",
          statement: "The bench mirrors operational load.",
          confidence: 0.9,
        },
        {
          id: "U",
          node_type: "claim",
          kind: "assumption",
          statement: "A stray assumption nothing references.",
          confidence: 0.4,
        },
      ],
      blocks: [
        {
          id: "BLK1",
          kind: "decomposition",
          parent: "TOP",
          subclaims: ["A", "M"],
          mode: "diversity",
          k: 0.98,
        },
        {
          id: "BLK2",
          kind: "substitution",
          parent: "M",
          subclaims: ["B"],
          sideclaim: "S",
          justified: true,
        },
      ],
      top: "TOP",
    },
    baseline: {
      nodes: { TOP: 0.5, A: 0.7, M: 0.54, B: 0.6, S: 0.9, U: 0.4 },
      top: "TOP",
      top_confidence: 0.5,
      blocks: [
        {
          block: "BLK1",
          parent: "TOP",
          subclaim_confidences: [0.7, 0.54],
          sideclaim_confidence: 1.0,
          output: 0.5,
        },
        {
          block: "BLK2",
          parent: "M",
          subclaim_confidences: [0.6],
          sideclaim_confidence: 0.9,
          output: 0.54,
        },
      ],
      warnings: ["node 'U' does not support the top claim"],
    },
  };
}

/** A later what-if run whose numbers are intentionally arbitrary. */
export function shiftedPropagation(): PropagationPayload {
  return {
    nodes: { TOP: 0.123456, A: 0.7, M: 0.9, B: 0.95, S: 0.9, U: 0.4 },
    top: "TOP",
    top_confidence: 0.123456,
    blocks: [],
    warnings: [],
  };
}

export function sampleFindings(): LintFindingPayload[] {
  return [
    {
      rule: "low-confidence",
      severity: "warning",
      node: "B",
      message: "confidence 0.6 is close to the floor",
    },
    {
      rule: "unreferenced-node",
      severity: "warning",
      node: "U",
      message: "node does not support the top claim",
    },
    {
      rule: "case-shape",
      severity: "warning",
      node: null,
      message: "a finding without a node attaches nowhere",
    },
  ];
}
