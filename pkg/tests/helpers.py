"""Shared test utilities: corpus paths and random model generators.

The generators build structurally valid inputs by construction so that
property suites exercise arithmetic and round-trips, not validation
rejections. Both take an explicit random.Random so every test seeds its
own stream and failures reproduce.
"""

from __future__ import annotations

import math
import random
from pathlib import Path

from confprop import (
    ArgumentBlock,
    AssuranceCase,
    BayesNet,
    BlockKind,
    ClaimKind,
    ClaimNode,
    CombinationMode,
    Cpt,
    EvidenceLeaf,
    ResidualAssessment,
    ResidualSeverity,
    Variable,
)

CASES_DIR = Path(__file__).resolve().parent.parent / "cases"

MULTI_MODES = tuple(CombinationMode)
SINGLE_KINDS = (
    BlockKind.EVIDENCE_INCORPORATION,
    BlockKind.CONCRETION,
    BlockKind.SUBSTITUTION,
    BlockKind.EXACT_DEFEATER,
)


def read_case(name: str) -> str:
    return (CASES_DIR / name).read_text(encoding="utf-8")


def random_confidence(rng: random.Random) -> float:
    roll = rng.random()
    if roll < 0.05:
        return 0.0
    if roll < 0.1:
        return 1.0
    return rng.random()


def _random_leaf(rng: random.Random, node_id: str):
    if rng.random() < 0.35:
        confirmation = None
        if rng.random() < 0.3:
            confirmation = (
                rng.uniform(0.05, 1.0),
                rng.uniform(0.05, 1.0),
            )
        return EvidenceLeaf(
            id=node_id,
            description=f"evidence {node_id}",
            posterior=random_confidence(rng),
            measurement_fidelity=1.0 if rng.random() < 0.5 else rng.random(),
            confirmation=confirmation,
        )
    residual = None
    if rng.random() < 0.15:
        residual = ResidualAssessment(
            severity=rng.choice(
                (
                    ResidualSeverity.MINOR,
                    ResidualSeverity.MANAGEABLE,
                    ResidualSeverity.NEGLIGIBLE,
                )
            ),
            count=rng.randint(1, 30),
        )
    return ClaimNode(
        id=node_id,
        statement=f"claim {node_id}",
        kind=ClaimKind.ASSUMPTION,
        assigned_confidence=random_confidence(rng),
        residual=residual,
    )


def _random_block(
    rng: random.Random,
    block_id: str,
    parent: str,
    subclaims: tuple[str, ...],
    sideclaim: str | None,
) -> ArgumentBlock:
    k = 1.0 if rng.random() < 0.6 else rng.uniform(0.5, 1.0)
    justified = rng.random() < 0.7
    if len(subclaims) == 1:
        return ArgumentBlock(
            id=block_id,
            kind=rng.choice(SINGLE_KINDS),
            parent=parent,
            subclaims=subclaims,
            sideclaim=sideclaim,
            k=k,
            justified=justified,
        )
    mode = rng.choice(MULTI_MODES)
    weights = None
    conditionals = None
    if mode is CombinationMode.PARTITIONED and rng.random() < 0.7:
        raw = [rng.uniform(0.05, 1.0) for _ in subclaims]
        total = math.fsum(raw)
        weights = tuple(w / total for w in raw)
    if mode is CombinationMode.CUMULATIVE and rng.random() < 0.7:
        conditionals = tuple(
            None if rng.random() < 0.4 else rng.random() for _ in subclaims
        )
    return ArgumentBlock(
        id=block_id,
        kind=rng.choice((BlockKind.DECOMPOSITION, BlockKind.CALCULATION)),
        parent=parent,
        subclaims=subclaims,
        sideclaim=sideclaim,
        mode=mode,
        k=k,
        weights=weights,
        conditionals=conditionals,
        justified=justified,
    )


def random_case(rng: random.Random, max_leaves: int = 8) -> AssuranceCase:
    """A structurally valid case with random shape and values.

    Leaves are assumptions or evidence; interior claims are built bottom-up
    until a single root remains, occasionally sharing a subclaim between
    blocks and hanging sideclaims off later steps.
    """
    nodes = []
    counter = 0

    def fresh(prefix: str) -> str:
        nonlocal counter
        counter += 1
        return f"{prefix}{counter:03d}"

    open_ids: list[str] = []
    consumed: list[str] = []
    for _ in range(rng.randint(1, max_leaves)):
        leaf = _random_leaf(rng, fresh("n"))
        nodes.append(leaf)
        open_ids.append(leaf.id)

    blocks = []
    while len(open_ids) > 1 or not isinstance(
        next(n for n in nodes if n.id == open_ids[0]), ClaimNode
    ):
        arity = 1 if rng.random() < 0.4 else rng.randint(2, 4)
        arity = min(arity, len(open_ids))
        subclaims = []
        for _ in range(arity):
            subclaims.append(open_ids.pop(rng.randrange(len(open_ids))))
        # Occasionally lean on an already consumed node too: DAGs may share.
        if consumed and len(subclaims) >= 2 and rng.random() < 0.2:
            extra = rng.choice(consumed)
            if extra not in subclaims:
                subclaims.append(extra)
        sideclaim = None
        if rng.random() < 0.25:
            if consumed and rng.random() < 0.5:
                sideclaim = rng.choice(consumed)
            else:
                side = ClaimNode(
                    id=fresh("n"),
                    statement="side condition",
                    kind=ClaimKind.ASSUMPTION,
                    assigned_confidence=random_confidence(rng),
                )
                nodes.append(side)
                sideclaim = side.id
        parent = ClaimNode(id=fresh("n"), statement="derived claim")
        nodes.append(parent)
        blocks.append(
            _random_block(
                rng, fresh("b"), parent.id, tuple(subclaims), sideclaim
            )
        )
        consumed.extend(subclaims)
        if sideclaim is not None:
            consumed.append(sideclaim)
        open_ids.append(parent.id)
    return AssuranceCase(
        nodes=tuple(nodes), blocks=tuple(blocks), top=open_ids[0]
    )


def random_net(rng: random.Random, max_vars: int = 6) -> BayesNet:
    """A valid network of up to max_vars binary variables."""
    count = rng.randint(1, max_vars)
    names = [f"v{i}" for i in range(count)]
    variables = tuple(Variable(name, ("yes", "no")) for name in names)
    cpts = []
    for i, name in enumerate(names):
        pool = names[:i]
        parents = tuple(
            sorted(rng.sample(pool, k=rng.randint(0, min(len(pool), 3))))
        )
        rows = []
        for _ in range(2 ** len(parents)):
            p = rng.random()
            rows.append((p, 1.0 - p))
        cpts.append(Cpt(child=name, parents=parents, table=tuple(rows)))
    return BayesNet(variables=variables, cpts=tuple(cpts))
