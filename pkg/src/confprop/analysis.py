"""Analyses on top of propagation: sensitivity, lints, bounds, risk.

Everything here treats the case as immutable and re-propagates as needed,
so results are deterministic and safe to compute concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import (
    AssuranceCase,
    ClaimNode,
    CombinationMode,
    EvidenceLeaf,
    MULTI_SUBCLAIM_KINDS,
    NodeId,
    ResidualSeverity,
    Severity,
    ValidationFinding,
    WEIGHT_SUM_TOLERANCE,
    validate_case,
)
from .propagation import (
    PropagationResult,
    good_confirmation,
    propagate,
)

# Forward and backward difference quotients agreeing this closely means the
# stencil saw no kink; the combiners are multilinear between kinks.
_KINK_TOLERANCE = 1e-9

# Instance count above which a pile of minor residuals draws a warning.
DEFAULT_MINOR_RESIDUAL_CAP = 10

# Confidence below even odds cannot be adjudged true.
DEFAULT_LOW_CONFIDENCE_THRESHOLD = 0.5


@dataclass(frozen=True)
class SensitivityEntry:
    """Effect of one leaf on the top confidence.

    derivative approximates d conf(top) / d conf(leaf) by a finite
    difference; at_zero and at_one are exact evaluations with the leaf
    pinned to the ends of its range. one_sided marks entries where the
    central stencil left [0, 1] or straddled a kink, and the difference
    was taken on one side only.
    """

    leaf: NodeId
    derivative: float
    at_zero: float
    at_one: float
    one_sided: bool = False


@dataclass(frozen=True)
class LintFinding:
    """One rule violation; rule names the entry in the documented rule set."""

    rule: str
    severity: Severity
    node: Optional[NodeId]
    message: str

    def __str__(self) -> str:
        where = f" [{self.node}]" if self.node else ""
        return f"{self.severity.value} {self.rule}{where}: {self.message}"


@dataclass(frozen=True)
class BlockBounds:
    """Dependence envelope for one block, with the point value inside."""

    block: NodeId
    low: float
    high: float
    point: float


def sensitivity(case: AssuranceCase, delta: float = 0.01) -> list[SensitivityEntry]:
    """One entry per leaf, ordered by leaf id.

    Uses a central finite difference of half-width delta where the stencil
    stays inside [0, 1] and sees no kink, a forward or backward difference
    otherwise (flagged one_sided). Endpoint evaluations are exact. delta
    must be in (0, 0.05] so the stencil stays local.
    """
    if not 0.0 < delta <= 0.05:
        raise ValueError(f"delta {delta!r} outside (0, 0.05]")
    baseline = propagate(case)
    top_baseline = baseline.values[case.top]
    entries: list[SensitivityEntry] = []
    for leaf in sorted(node.id for node in case.leaves()):
        value = baseline.values[leaf]

        def top_with(pinned: float) -> float:
            return propagate(case, {leaf: pinned}).values[case.top]

        at_zero = top_with(0.0)
        at_one = top_with(1.0)
        can_step_up = value + delta <= 1.0
        can_step_down = value - delta >= 0.0
        if can_step_up and can_step_down:
            up = top_with(value + delta)
            down = top_with(value - delta)
            forward = (up - top_baseline) / delta
            backward = (top_baseline - down) / delta
            if abs(forward - backward) <= _KINK_TOLERANCE:
                derivative = (up - down) / (2.0 * delta)
                one_sided = False
            else:
                derivative = forward
                one_sided = True
        elif can_step_up:
            derivative = (top_with(value + delta) - top_baseline) / delta
            one_sided = True
        else:
            derivative = (top_baseline - top_with(value - delta)) / delta
            one_sided = True
        entries.append(
            SensitivityEntry(
                leaf=leaf,
                derivative=derivative,
                at_zero=at_zero,
                at_one=at_one,
                one_sided=one_sided,
            )
        )
    return entries


def lint(
    case: AssuranceCase,
    low_conf_threshold: float = DEFAULT_LOW_CONFIDENCE_THRESHOLD,
    minor_cap: int = DEFAULT_MINOR_RESIDUAL_CAP,
) -> list[LintFinding]:
    """Check the documented lint rules and return findings in rule order.

    Rules:
      significant-residual (error): a residual classed significant means
        the system is not ready for probabilistic assessment at all.
      minor-residual-count (warning): minor residuals whose count exceeds
        minor_cap; a handful may be tolerable where a pile is not.
      malformed-weights (error): partitioned weights that are negative,
        mis-sized, or do not sum to one.
      unjustified-block (warning): block without a recorded justification
        for its combination choice.
      non-discriminating-evidence (warning): recorded confirmation inputs
        give a nonpositive weight of evidence, so the evidence does not
        actually support its claim.
      low-confidence (warning): any node whose propagated confidence falls
        below low_conf_threshold, however high the top value is; such a
        subclaim would not have been adjudged true on its own. Skipped,
        like any valuation rule, when the case does not validate.
    """
    out: list[LintFinding] = []
    for node in case.nodes:
        if isinstance(node, ClaimNode) and node.residual is not None:
            if node.residual.severity is ResidualSeverity.SIGNIFICANT:
                out.append(
                    LintFinding(
                        rule="significant-residual",
                        severity=Severity.ERROR,
                        node=node.id,
                        message=(
                            "significant residual: not ready for "
                            "probabilistic assessment"
                        ),
                    )
                )
            elif (
                node.residual.severity is ResidualSeverity.MINOR
                and node.residual.count > minor_cap
            ):
                out.append(
                    LintFinding(
                        rule="minor-residual-count",
                        severity=Severity.WARNING,
                        node=node.id,
                        message=(
                            f"{node.residual.count} minor residuals exceed "
                            f"the cap of {minor_cap}"
                        ),
                    )
                )
    for block in case.blocks:
        if block.weights is not None and block.mode is CombinationMode.PARTITIONED:
            problems = []
            if len(block.weights) != len(block.subclaims):
                problems.append(
                    f"{len(block.weights)} weights for "
                    f"{len(block.subclaims)} subclaims"
                )
            if any(w < 0.0 for w in block.weights):
                problems.append("negative weight")
            total = math.fsum(block.weights)
            if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
                problems.append(f"weights sum to {total!r}")
            if problems:
                out.append(
                    LintFinding(
                        rule="malformed-weights",
                        severity=Severity.ERROR,
                        node=block.id,
                        message="; ".join(problems),
                    )
                )
        if not block.justified:
            out.append(
                LintFinding(
                    rule="unjustified-block",
                    severity=Severity.WARNING,
                    node=block.id,
                    message="combination choice has no recorded justification",
                )
            )
    for node in case.nodes:
        if isinstance(node, EvidenceLeaf) and node.confirmation is not None:
            p_given, p_given_not = node.confirmation
            if p_given > 0.0 and p_given_not > 0.0:
                if good_confirmation(p_given, p_given_not) <= 0.0:
                    out.append(
                        LintFinding(
                            rule="non-discriminating-evidence",
                            severity=Severity.WARNING,
                            node=node.id,
                            message=(
                                "evidence is no likelier under the claim "
                                "than under its negation"
                            ),
                        )
                    )
    if not any(f.severity is Severity.ERROR for f in validate_case(case)):
        values = propagate(case).values
        for node in case.nodes:
            if values[node.id] < low_conf_threshold:
                out.append(
                    LintFinding(
                        rule="low-confidence",
                        severity=Severity.WARNING,
                        node=node.id,
                        message=(
                            f"confidence {values[node.id]:.6g} is below "
                            f"{low_conf_threshold:.6g} and could not be "
                            "adjudged true on its own"
                        ),
                    )
                )
    return out


def bayes_posterior(
    prior: float, likelihood_pos: float, likelihood_neg: float
) -> float:
    """P(C | E) from P(C), P(E | C) and P(E | not C).

    Raises ValueError when an argument leaves [0, 1] or the total
    probability of the evidence is zero.
    """
    for name, value in (
        ("prior", prior),
        ("likelihood_pos", likelihood_pos),
        ("likelihood_neg", likelihood_neg),
    ):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} {value!r} outside [0, 1]")
    denominator = prior * likelihood_pos + (1.0 - prior) * likelihood_neg
    if denominator <= 0.0:
        raise ValueError("evidence has probability zero under both hypotheses")
    return prior * likelihood_pos / denominator


def chain_of_confidence_risk(p_ok: float, r_ok: float, r_not_ok: float) -> float:
    """Expected risk when assurance itself may be wrong.

    With probability p_ok the assessed risk r_ok applies; otherwise the
    system was not fit for purpose and r_not_ok applies.
    """
    if not 0.0 <= p_ok <= 1.0:
        raise ValueError(f"p_ok {p_ok!r} outside [0, 1]")
    if r_ok < 0.0 or r_not_ok < 0.0:
        raise ValueError("risks must be nonnegative")
    return p_ok * r_ok + (1.0 - p_ok) * r_not_ok


def dependence_bounds(
    case: AssuranceCase,
    block_id: NodeId,
    result: Optional[PropagationResult] = None,
) -> BlockBounds:
    """Range the block's output could take under any subclaim dependence.

    For union-style modes (diversity, containment) this is the envelope
    between full overlap, max(confs), and disjointness, min(1, sum).
    Partitioned and averaging blocks get the same envelope over their
    weighted contributions. Conjunction-style modes (product, cumulative,
    sum_of_doubts) get the intersection envelope, from the worst-case
    max(0, sum - (n - 1)) up to min(confs). Both ends are scaled by k and
    the sideclaim confidence, and the block's own output always lies
    inside. Raises ValueError unless the block exists and combines
    several subclaims.
    """
    if not case.has_block(block_id):
        raise ValueError(f"unknown block {block_id!r}")
    block = case.block(block_id)
    if block.kind not in MULTI_SUBCLAIM_KINDS or block.mode is None:
        raise ValueError(f"block {block_id!r} does not combine several subclaims")
    if result is None:
        result = propagate(case)
    trace = result.traces[block_id]
    confs = trace.subclaim_confs
    n = len(confs)
    mode = block.mode
    if mode in (CombinationMode.DIVERSITY, CombinationMode.CONTAINMENT):
        low, high = max(confs), min(1.0, math.fsum(confs))
    elif mode in (CombinationMode.PARTITIONED, CombinationMode.AVERAGING):
        if mode is CombinationMode.PARTITIONED and block.weights is not None:
            contributions = [w * c for w, c in zip(block.weights, confs)]
            low, high = max(contributions), min(1.0, math.fsum(contributions))
        else:
            # Equal parts; divide late so the top end matches the combiner
            # bit for bit.
            low, high = max(confs) / n, min(1.0, math.fsum(confs) / n)
    else:
        effective = list(confs)
        if mode is CombinationMode.CUMULATIVE and block.conditionals is not None:
            effective = [
                c if cond is None else cond
                for c, cond in zip(confs, block.conditionals)
            ]
        low = max(0.0, math.fsum(effective) - (n - 1))
        high = min(effective)
    scale = block.k * trace.sideclaim_conf
    return BlockBounds(
        block=block_id,
        low=low * scale,
        high=high * scale,
        point=trace.output,
    )
