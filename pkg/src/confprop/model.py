"""Core model for quantified assurance cases.

An assurance case is a directed acyclic graph of claims and evidence.
Interior claims are supported by argument blocks; each block names the
subclaims (and optionally a sideclaim) whose confidences combine into the
parent claim's confidence. Leaves are either evidence nodes or claims with
an assigned confidence, typically assumptions.

Confidence is a subjective probability in [0, 1] that the statement holds.
Doubt is its complement. Nothing in this module computes confidences; see
:mod:`confprop.propagation` for the arithmetic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Optional, Union

NodeId = str

# Tolerance for "weights sum to one" checks. Weights are author-supplied
# decimals, so exact equality would reject e.g. 0.1 + 0.2 + 0.7.
WEIGHT_SUM_TOLERANCE = 1e-9


class Severity(str, Enum):
    """Severity of a validation or lint finding."""

    ERROR = "error"
    WARNING = "warning"


class ClaimKind(str, Enum):
    """Role a claim plays in the argument."""

    ORDINARY = "ordinary"
    MEASURED = "measured"  # directly established by measurement or test
    USEFUL = "useful"  # the measured property matters for the parent
    ASSUMPTION = "assumption"  # accepted without support, carries confidence
    RESIDUAL = "residual"  # names a known imperfection left in the system


class ResidualSeverity(str, Enum):
    """Fourfold classification of a residual imperfection."""

    SIGNIFICANT = "significant"  # bars probabilistic assessment outright
    MINOR = "minor"  # tolerable individually, suspicious in bulk
    MANAGEABLE = "manageable"
    NEGLIGIBLE = "negligible"


class BlockKind(str, Enum):
    """Argument step joining subclaims to a parent claim."""

    EVIDENCE_INCORPORATION = "evidence_incorporation"
    CONCRETION = "concretion"
    SUBSTITUTION = "substitution"
    EXACT_DEFEATER = "exact_defeater"
    DECOMPOSITION = "decomposition"
    CALCULATION = "calculation"


# Kinds taking exactly one subclaim and no combination mode.
SINGLE_SUBCLAIM_KINDS = frozenset(
    {
        BlockKind.EVIDENCE_INCORPORATION,
        BlockKind.CONCRETION,
        BlockKind.SUBSTITUTION,
        BlockKind.EXACT_DEFEATER,
    }
)

# Kinds taking two or more subclaims and a mandatory combination mode.
MULTI_SUBCLAIM_KINDS = frozenset({BlockKind.DECOMPOSITION, BlockKind.CALCULATION})


class CombinationMode(str, Enum):
    """How a multi-subclaim block merges subclaim confidences."""

    DIVERSITY = "diversity"  # independent alternatives, complement product
    PARTITIONED = "partitioned"  # weighted split of the claim space
    AVERAGING = "averaging"  # unweighted mean
    CONTAINMENT = "containment"  # best single line of argument
    CUMULATIVE = "cumulative"  # chain of conditional steps
    PRODUCT = "product"  # all subclaims needed, assumed independent
    SUM_OF_DOUBTS = "sum_of_doubts"  # all needed, worst-case dependence


@dataclass(frozen=True)
class ResidualAssessment:
    """Classification attached to a residual claim.

    count is the number of imperfections the claim stands for; ten minor
    issues may be tolerable where a hundred would not be.
    """

    severity: ResidualSeverity
    count: int = 1


@dataclass(frozen=True)
class ClaimNode:
    """A claim in the case.

    assigned_confidence is only meaningful for leaves; supported claims get
    their value from their block during propagation.
    """

    id: NodeId
    statement: str
    kind: ClaimKind = ClaimKind.ORDINARY
    assigned_confidence: Optional[float] = None
    residual: Optional[ResidualAssessment] = None


@dataclass(frozen=True)
class EvidenceLeaf:
    """A piece of evidence with its appraised weight.

    posterior is the probability that the claim the evidence supports holds
    given the evidence. measurement_fidelity discounts for the gap between
    what was measured and what the instrument reports. confirmation, when
    recorded, holds (P(E | C), P(E | not C)) for the diagnostic
    log-likelihood-ratio measure; it never enters propagation.
    """

    id: NodeId
    description: str
    posterior: float
    measurement_fidelity: float = 1.0
    confirmation: Optional[tuple[float, float]] = None


Node = Union[ClaimNode, EvidenceLeaf]


@dataclass(frozen=True)
class ArgumentBlock:
    """One argument step.

    k is the inference-rule discount in [0, 1]: the probability that the
    step itself is sound. weights apply only to partitioned mode and must
    sum to one. conditionals apply only to cumulative mode; entry i, when
    not None, replaces subclaim i's confidence with its confidence given
    the preceding subclaims. justified records whether the author has
    argued the chosen mode is appropriate.
    """

    id: NodeId
    kind: BlockKind
    parent: NodeId
    subclaims: tuple[NodeId, ...]
    sideclaim: Optional[NodeId] = None
    mode: Optional[CombinationMode] = None
    k: float = 1.0
    weights: Optional[tuple[float, ...]] = None
    conditionals: Optional[tuple[Optional[float], ...]] = None
    justified: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "subclaims", tuple(self.subclaims))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))
        if self.conditionals is not None:
            object.__setattr__(self, "conditionals", tuple(self.conditionals))


@dataclass(frozen=True)
class ValidationFinding:
    """One problem found while checking a case or network."""

    severity: Severity
    node: Optional[NodeId]  # offending node or block id, None for case-level
    message: str

    def __str__(self) -> str:
        where = f" [{self.node}]" if self.node else ""
        return f"{self.severity.value}{where}: {self.message}"


class MalformedCaseError(ValueError):
    """Raised when an operation needs a well-formed case and got errors."""

    def __init__(self, findings: list[ValidationFinding]):
        self.findings = [f for f in findings if f.severity is Severity.ERROR]
        lines = "; ".join(str(f) for f in self.findings) or "malformed case"
        super().__init__(lines)


@dataclass(frozen=True)
class AssuranceCase:
    """Immutable case graph: nodes, argument blocks, and the top claim id."""

    nodes: tuple[Node, ...]
    blocks: tuple[ArgumentBlock, ...]
    top: NodeId

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "blocks", tuple(self.blocks))
        nodes_by_id: dict[NodeId, Node] = {}
        for node in self.nodes:
            nodes_by_id.setdefault(node.id, node)
        blocks_by_id: dict[NodeId, ArgumentBlock] = {}
        blocks_by_parent: dict[NodeId, ArgumentBlock] = {}
        for block in self.blocks:
            blocks_by_id.setdefault(block.id, block)
            blocks_by_parent.setdefault(block.parent, block)
        object.__setattr__(self, "_nodes_by_id", nodes_by_id)
        object.__setattr__(self, "_blocks_by_id", blocks_by_id)
        object.__setattr__(self, "_blocks_by_parent", blocks_by_parent)

    def node(self, node_id: NodeId) -> Node:
        return self._nodes_by_id[node_id]  # type: ignore[attr-defined]

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self._nodes_by_id  # type: ignore[attr-defined]

    def block(self, block_id: NodeId) -> ArgumentBlock:
        return self._blocks_by_id[block_id]  # type: ignore[attr-defined]

    def has_block(self, block_id: NodeId) -> bool:
        return block_id in self._blocks_by_id  # type: ignore[attr-defined]

    def supporting_block(self, claim_id: NodeId) -> Optional[ArgumentBlock]:
        """The block whose parent is claim_id, or None for leaves."""
        return self._blocks_by_parent.get(claim_id)  # type: ignore[attr-defined]

    def is_leaf(self, node_id: NodeId) -> bool:
        """True when the node gets no value from a block."""
        return self.has_node(node_id) and self.supporting_block(node_id) is None

    def leaves(self) -> Iterator[Node]:
        for node in self.nodes:
            if self.supporting_block(node.id) is None:
                yield node

    def claims(self) -> Iterator[ClaimNode]:
        for node in self.nodes:
            if isinstance(node, ClaimNode):
                yield node

    def evidence(self) -> Iterator[EvidenceLeaf]:
        for node in self.nodes:
            if isinstance(node, EvidenceLeaf):
                yield node


def _in_unit_interval(value: float) -> bool:
    return isinstance(value, (int, float)) and 0.0 <= value <= 1.0


def _check_node(node: Node, out: list[ValidationFinding]) -> None:
    def err(msg: str) -> None:
        out.append(ValidationFinding(Severity.ERROR, node.id, msg))

    if isinstance(node, ClaimNode):
        if node.assigned_confidence is not None and not _in_unit_interval(
            node.assigned_confidence
        ):
            err(f"confidence {node.assigned_confidence!r} outside [0, 1]")
        if node.residual is not None and node.residual.count < 1:
            err(f"residual count {node.residual.count} must be at least 1")
    else:
        if not _in_unit_interval(node.posterior):
            err(f"confidence {node.posterior!r} outside [0, 1]")
        if not _in_unit_interval(node.measurement_fidelity):
            err(
                f"measurement fidelity {node.measurement_fidelity!r} outside [0, 1]"
            )
        if node.confirmation is not None:
            p_given, p_given_not = node.confirmation
            for label, p in (("P(E|C)", p_given), ("P(E|not C)", p_given_not)):
                if not (
                    isinstance(p, (int, float)) and 0.0 < p <= 1.0
                ):
                    err(f"confirmation {label} = {p!r} must be in (0, 1]")


def _check_block(block: ArgumentBlock, out: list[ValidationFinding]) -> None:
    def err(msg: str) -> None:
        out.append(ValidationFinding(Severity.ERROR, block.id, msg))

    n = len(block.subclaims)
    if block.kind in SINGLE_SUBCLAIM_KINDS:
        if n != 1:
            err(f"{block.kind.value} block needs exactly one subclaim, has {n}")
        if block.mode is not None:
            err(f"{block.kind.value} block cannot carry a combination mode")
    else:
        if n < 2:
            err(f"{block.kind.value} block needs at least two subclaims, has {n}")
        if block.mode is None:
            err(f"{block.kind.value} block needs a combination mode")
    if len(set(block.subclaims)) != n:
        err("subclaims must be distinct")
    if not _in_unit_interval(block.k):
        err(f"discount k = {block.k!r} outside [0, 1]")
    if block.weights is not None:
        if block.mode is not CombinationMode.PARTITIONED:
            err("weights are only meaningful for partitioned mode")
        elif len(block.weights) != n:
            err(
                f"{len(block.weights)} weights for {n} subclaims"
            )
        else:
            if any(w < 0.0 for w in block.weights):
                err("weights must be nonnegative")
            total = sum(block.weights)
            if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
                err(f"weights sum to {total!r}, expected 1")
    if block.conditionals is not None:
        if block.mode is not CombinationMode.CUMULATIVE:
            err("conditionals are only meaningful for cumulative mode")
        elif len(block.conditionals) != n:
            err(f"{len(block.conditionals)} conditionals for {n} subclaims")
        else:
            for i, c in enumerate(block.conditionals):
                if c is not None and not _in_unit_interval(c):
                    err(f"conditional {i} = {c!r} outside [0, 1]")


def validate_case(case: AssuranceCase) -> list[ValidationFinding]:
    """Check structural invariants and return findings, errors first per item.

    An empty list, or a list with only warnings, means the case is ready for
    propagation. Findings are deterministic: nodes in declaration order, then
    blocks, then graph-level checks.
    """
    out: list[ValidationFinding] = []
    seen_nodes: set[NodeId] = set()
    for node in case.nodes:
        if node.id in seen_nodes:
            out.append(
                ValidationFinding(Severity.ERROR, node.id, "duplicate node id")
            )
            continue
        seen_nodes.add(node.id)
        _check_node(node, out)

    seen_blocks: set[NodeId] = set()
    parents_seen: set[NodeId] = set()
    referenced: set[NodeId] = set()
    for block in case.blocks:
        if block.id in seen_blocks:
            out.append(
                ValidationFinding(Severity.ERROR, block.id, "duplicate block id")
            )
            continue
        seen_blocks.add(block.id)
        if block.id in seen_nodes:
            out.append(
                ValidationFinding(
                    Severity.ERROR, block.id, "block id collides with a node id"
                )
            )
        _check_block(block, out)
        for ref in (block.parent, *block.subclaims):
            if ref not in seen_nodes:
                out.append(
                    ValidationFinding(
                        Severity.ERROR, block.id, f"unknown node {ref!r}"
                    )
                )
        if block.sideclaim is not None and block.sideclaim not in seen_nodes:
            out.append(
                ValidationFinding(
                    Severity.ERROR, block.id, f"unknown node {block.sideclaim!r}"
                )
            )
        if case.has_node(block.parent) and isinstance(
            case.node(block.parent), EvidenceLeaf
        ):
            out.append(
                ValidationFinding(
                    Severity.ERROR,
                    block.id,
                    f"parent {block.parent!r} is evidence, not a claim",
                )
            )
        if block.parent in parents_seen:
            out.append(
                ValidationFinding(
                    Severity.ERROR,
                    block.id,
                    f"claim {block.parent!r} already has a supporting block",
                )
            )
        parents_seen.add(block.parent)
        referenced.update(block.subclaims)
        if block.sideclaim is not None:
            referenced.add(block.sideclaim)

    # Leaf claims need a value to start propagation from.
    for node in case.nodes:
        if (
            isinstance(node, ClaimNode)
            and node.id not in parents_seen
            and node.assigned_confidence is None
        ):
            out.append(
                ValidationFinding(
                    Severity.ERROR,
                    node.id,
                    "leaf claim has no assigned confidence",
                )
            )
        if (
            isinstance(node, ClaimNode)
            and node.id in parents_seen
            and node.assigned_confidence is not None
        ):
            out.append(
                ValidationFinding(
                    Severity.WARNING,
                    node.id,
                    "assigned confidence is ignored on a supported claim",
                )
            )

    if not case.has_node(case.top):
        out.append(
            ValidationFinding(Severity.ERROR, case.top, "top claim does not exist")
        )
    else:
        if not isinstance(case.node(case.top), ClaimNode):
            out.append(
                ValidationFinding(Severity.ERROR, case.top, "top must be a claim")
            )
        if case.top in referenced:
            out.append(
                ValidationFinding(
                    Severity.ERROR,
                    case.top,
                    "top claim is referenced by a block",
                )
            )

    cycle = _find_cycle_members(case)
    if cycle:
        out.append(
            ValidationFinding(
                Severity.ERROR,
                min(cycle),
                "cycle through " + ", ".join(sorted(cycle)),
            )
        )
    elif not any(f.severity is Severity.ERROR for f in out):
        for node_id in sorted(seen_nodes - _ancestor_closure(case)):
            out.append(
                ValidationFinding(
                    Severity.WARNING, node_id, "node is unreachable from the top"
                )
            )
    return out


def _edges(case: AssuranceCase) -> dict[NodeId, set[NodeId]]:
    """Dependency edges child -> parents, restricted to known node ids."""
    deps: dict[NodeId, set[NodeId]] = {n.id: set() for n in case.nodes}
    for block in case.blocks:
        if block.parent not in deps:
            continue
        for child in (*block.subclaims, block.sideclaim):
            if child is not None and child in deps:
                deps[child].add(block.parent)
    return deps


def _find_cycle_members(case: AssuranceCase) -> set[NodeId]:
    """Node ids stuck on a cycle, empty when the graph is acyclic."""
    deps = _edges(case)
    indegree = {node_id: 0 for node_id in deps}
    for targets in deps.values():
        for target in targets:
            indegree[target] += 1
    ready = [node_id for node_id, d in indegree.items() if d == 0]
    while ready:
        node_id = ready.pop()
        for target in deps[node_id]:
            indegree[target] -= 1
            if indegree[target] == 0:
                ready.append(target)
    return {node_id for node_id, d in indegree.items() if d > 0}


def _ancestor_closure(case: AssuranceCase) -> set[NodeId]:
    """Ids contributing to the top claim, including the top itself."""
    inputs: dict[NodeId, list[NodeId]] = {}
    for block in case.blocks:
        refs = list(block.subclaims)
        if block.sideclaim is not None:
            refs.append(block.sideclaim)
        inputs[block.parent] = refs
    seen: set[NodeId] = set()
    stack = [case.top]
    while stack:
        node_id = stack.pop()
        if node_id in seen or not case.has_node(node_id):
            continue
        seen.add(node_id)
        stack.extend(inputs.get(node_id, ()))
    return seen


def topological_order(case: AssuranceCase) -> list[NodeId]:
    """Node ids in evaluation order: every node after all its inputs.

    Leaves come first. Ties are broken lexicographically so the order is
    stable across runs. Raises MalformedCaseError when references do not
    resolve, node ids repeat, or the graph has a cycle.
    """
    problems: list[ValidationFinding] = []
    ids = [n.id for n in case.nodes]
    if len(set(ids)) != len(ids):
        problems.append(
            ValidationFinding(Severity.ERROR, None, "duplicate node ids")
        )
    for block in case.blocks:
        for ref in (block.parent, *block.subclaims):
            if not case.has_node(ref):
                problems.append(
                    ValidationFinding(
                        Severity.ERROR, block.id, f"unknown node {ref!r}"
                    )
                )
        if block.sideclaim is not None and not case.has_node(block.sideclaim):
            problems.append(
                ValidationFinding(
                    Severity.ERROR, block.id, f"unknown node {block.sideclaim!r}"
                )
            )
    if problems:
        raise MalformedCaseError(problems)

    deps = _edges(case)
    indegree = {node_id: 0 for node_id in deps}
    for targets in deps.values():
        for target in targets:
            indegree[target] += 1
    ready = [node_id for node_id, d in sorted(indegree.items()) if d == 0]
    heapq.heapify(ready)
    order: list[NodeId] = []
    while ready:
        node_id = heapq.heappop(ready)
        order.append(node_id)
        for target in sorted(deps[node_id]):
            indegree[target] -= 1
            if indegree[target] == 0:
                heapq.heappush(ready, target)
    if len(order) != len(deps):
        stuck = sorted(node_id for node_id, d in indegree.items() if d > 0)
        raise MalformedCaseError(
            [
                ValidationFinding(
                    Severity.ERROR, stuck[0], "cycle through " + ", ".join(stuck)
                )
            ]
        )
    return order


def ensure_valid(case: AssuranceCase) -> list[ValidationFinding]:
    """Validate and raise MalformedCaseError on any error; return warnings."""
    findings = validate_case(case)
    if any(f.severity is Severity.ERROR for f in findings):
        raise MalformedCaseError(findings)
    return [f for f in findings if f.severity is Severity.WARNING]
