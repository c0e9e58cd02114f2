"""Confidence arithmetic and bottom-up propagation.

Each argument block turns subclaim confidences into a parent confidence:

    parent = combined(subclaims) * k * sideclaim

where k discounts for doubt in the inference rule itself and the sideclaim
factor discounts for the context claim the block leans on. Single-subclaim
blocks skip the combination step. The seven combination modes answer "how do
several subclaims jointly bear on one parent", from fully redundant
(diversity) to fully required (product, sum_of_doubts).

All arithmetic is plain binary64; results are deterministic for a given
case and override set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .model import (
    ArgumentBlock,
    AssuranceCase,
    CombinationMode,
    EvidenceLeaf,
    NodeId,
    SINGLE_SUBCLAIM_KINDS,
    WEIGHT_SUM_TOLERANCE,
    ensure_valid,
    topological_order,
)


def doubt(confidence: float) -> float:
    """Complement of a confidence."""
    return 1.0 - confidence


def evidence_confidence(leaf: EvidenceLeaf, sideclaim_conf: float = 1.0) -> float:
    """Confidence contributed by one evidence leaf.

    The posterior is discounted by measurement fidelity and, when the leaf
    is read together with a usefulness sideclaim, by that claim's
    confidence. During propagation the sideclaim discount is applied by the
    consuming block instead, so leaves there use the default of 1.
    """
    return leaf.posterior * leaf.measurement_fidelity * sideclaim_conf


def good_confirmation(p_e_given_c: float, p_e_given_not_c: float) -> float:
    """Weight of evidence: log of the likelihood ratio.

    Positive means the evidence supports the claim, zero means it is
    uninformative, negative means it tells against. Diagnostic only; the
    value is a log-ratio, not a probability, and must never be multiplied
    into a propagation. Raises ValueError unless both inputs are positive.
    """
    if p_e_given_c <= 0.0 or p_e_given_not_c <= 0.0:
        raise ValueError(
            "likelihoods must be positive, got "
            f"{p_e_given_c!r} and {p_e_given_not_c!r}"
        )
    return math.log(p_e_given_c / p_e_given_not_c)


def single_subclaim(conf_sub: float, conf_side: float = 1.0, k: float = 1.0) -> float:
    """Parent confidence for a one-subclaim block: k * conf_sub * conf_side."""
    return k * conf_sub * conf_side


def combine_diversity(confs: Sequence[float]) -> float:
    """Independent alternative arguments: one minus the product of doubts.

    Any single subclaim holding is enough, so doubts multiply.
    """
    _require_some(confs)
    remaining_doubt = 1.0
    for c in confs:
        remaining_doubt *= 1.0 - c
    return 1.0 - remaining_doubt


def combine_partitioned(
    confs: Sequence[float], weights: Optional[Sequence[float]] = None
) -> float:
    """Weighted sum over a partition of the claim space.

    Each confidence must already be global, i.e. conditioned on its part
    and multiplied by nothing else; the weights are the part probabilities
    and must sum to one. Without weights the parts are taken as equal,
    which reduces to the arithmetic mean.
    """
    _require_some(confs)
    if weights is None:
        return math.fsum(confs) / len(confs)
    if len(weights) != len(confs):
        raise ValueError(f"{len(weights)} weights for {len(confs)} confidences")
    if any(w < 0.0 for w in weights):
        raise ValueError("weights must be nonnegative")
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise ValueError(f"weights sum to {total!r}, expected 1")
    return math.fsum(w * c for w, c in zip(weights, confs))


def combine_averaging(confs: Sequence[float]) -> float:
    """Arithmetic mean, the equal-weight partition."""
    _require_some(confs)
    return math.fsum(confs) / len(confs)


def combine_containment(confs: Sequence[float]) -> float:
    """Strongest single argument: the maximum.

    This is the lower Frechet bound for a union, reached when the weaker
    arguments are contained in the strongest one.
    """
    _require_some(confs)
    return max(confs)


def combine_cumulative(
    confs: Sequence[float],
    conditionals: Optional[Sequence[Optional[float]]] = None,
) -> float:
    """Chain of dependent steps: product of per-step effective confidences.

    conditionals[i], when given, replaces confs[i] with the confidence of
    step i given that the earlier steps hold. A None entry keeps the
    marginal value, which is correct for the first step and for steps
    independent of the earlier ones.
    """
    _require_some(confs)
    if conditionals is None:
        conditionals = [None] * len(confs)
    if len(conditionals) != len(confs):
        raise ValueError(
            f"{len(conditionals)} conditionals for {len(confs)} confidences"
        )
    result = 1.0
    for conf, conditional in zip(confs, conditionals):
        result *= conf if conditional is None else conditional
    return result


def combine_product(confs: Sequence[float]) -> float:
    """All subclaims needed and independent: plain product."""
    _require_some(confs)
    result = 1.0
    for c in confs:
        result *= c
    return result


def combine_sum_of_doubts(confs: Sequence[float]) -> float:
    """All subclaims needed, dependence unknown: doubts add, clipped at 0.

    Equals max(0, sum(confs) - (n - 1)), the lower Frechet bound for an
    intersection, so it never overstates the joint confidence.
    """
    _require_some(confs)
    return max(0.0, math.fsum(confs) - (len(confs) - 1))


def frechet_interval(confs: Sequence[float]) -> tuple[float, float]:
    """Range a union of the subclaims can take under any dependence.

    The lower end (containment) assumes maximal overlap, the upper end
    (capped sum) assumes disjointness. diversity always lands inside.
    """
    _require_some(confs)
    return (max(confs), min(1.0, math.fsum(confs)))


def _require_some(confs: Sequence[float]) -> None:
    if not confs:
        raise ValueError("need at least one confidence")


_COMBINERS = {
    CombinationMode.DIVERSITY: lambda b, confs: combine_diversity(confs),
    CombinationMode.PARTITIONED: lambda b, confs: combine_partitioned(
        confs, b.weights
    ),
    CombinationMode.AVERAGING: lambda b, confs: combine_averaging(confs),
    CombinationMode.CONTAINMENT: lambda b, confs: combine_containment(confs),
    CombinationMode.CUMULATIVE: lambda b, confs: combine_cumulative(
        confs, b.conditionals
    ),
    CombinationMode.PRODUCT: lambda b, confs: combine_product(confs),
    CombinationMode.SUM_OF_DOUBTS: lambda b, confs: combine_sum_of_doubts(confs),
}


def block_confidence(
    block: ArgumentBlock,
    subclaim_confs: Sequence[float],
    sideclaim_conf: float = 1.0,
) -> float:
    """Confidence the block grants its parent.

    Applies the block's combination mode (or the single-subclaim rule),
    then the k discount and the sideclaim factor. Multiplying by the
    sideclaim here rather than inside the combiner keeps the factor
    applied exactly once.
    """
    if block.kind in SINGLE_SUBCLAIM_KINDS:
        if len(subclaim_confs) != 1:
            raise ValueError(
                f"{block.kind.value} block takes one subclaim confidence, "
                f"got {len(subclaim_confs)}"
            )
        return single_subclaim(subclaim_confs[0], sideclaim_conf, block.k)
    if block.mode is None:
        raise ValueError(f"block {block.id!r} has no combination mode")
    combined = _COMBINERS[block.mode](block, subclaim_confs)
    return block.k * combined * sideclaim_conf


@dataclass(frozen=True)
class BlockTrace:
    """How one block's output was computed during a propagation."""

    block: NodeId
    parent: NodeId
    subclaim_confs: tuple[float, ...]
    sideclaim_conf: float
    output: float


@dataclass(frozen=True)
class PropagationResult:
    """Per-node confidences plus per-block traces for one propagation."""

    values: Mapping[NodeId, float]
    traces: Mapping[NodeId, BlockTrace]  # keyed by block id
    warnings: tuple[str, ...] = ()

    def top_confidence(self, case: AssuranceCase) -> float:
        return self.values[case.top]


def propagate(
    case: AssuranceCase,
    overrides: Optional[Mapping[NodeId, float]] = None,
) -> PropagationResult:
    """Evaluate every node bottom-up and return all confidences.

    overrides pin leaf values for what-if exploration; overriding a
    supported claim would silently contradict its block, so only leaves
    may be overridden. Raises MalformedCaseError for invalid cases and
    ValueError for bad overrides.
    """
    warnings = [str(f) for f in ensure_valid(case)]
    overrides = dict(overrides or {})
    for node_id, value in overrides.items():
        if not case.has_node(node_id):
            raise ValueError(f"unknown node {node_id!r}")
        if not case.is_leaf(node_id):
            raise ValueError(f"node {node_id!r} is not a leaf")
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"override {value!r} for {node_id!r} outside [0, 1]")

    values: dict[NodeId, float] = {}
    traces: dict[NodeId, BlockTrace] = {}
    for node_id in topological_order(case):
        if node_id in overrides:
            values[node_id] = overrides[node_id]
            continue
        node = case.node(node_id)
        block = case.supporting_block(node_id)
        if block is not None:
            subclaim_confs = tuple(values[s] for s in block.subclaims)
            sideclaim_conf = (
                values[block.sideclaim] if block.sideclaim is not None else 1.0
            )
            output = block_confidence(block, subclaim_confs, sideclaim_conf)
            traces[block.id] = BlockTrace(
                block=block.id,
                parent=node_id,
                subclaim_confs=subclaim_confs,
                sideclaim_conf=sideclaim_conf,
                output=output,
            )
            values[node_id] = output
        elif isinstance(node, EvidenceLeaf):
            values[node_id] = evidence_confidence(node)
        else:
            assert node.assigned_confidence is not None  # ensured by validation
            values[node_id] = node.assigned_confidence

    for block in case.blocks:
        if not block.justified:
            warnings.append(
                f"block {block.id!r} is not justified: no rationale recorded "
                "for its combination choice"
            )
    return PropagationResult(
        values=values, traces=traces, warnings=tuple(warnings)
    )
