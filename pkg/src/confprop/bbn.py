"""Exact inference over small discrete belief networks.

A network is a DAG of discrete variables, each with a conditional
probability table. Tables are laid out row-major over the parent state
combinations with the last parent varying fastest, matching
itertools.product over the parent state tuples; each row is a distribution
over the child's states in declared order. docs/format.md pins this layout
for the file format.

Two query paths are provided on purpose: `query` runs variable elimination
and is the one callers should use; `brute_force_query` enumerates the full
joint and exists as an independent oracle. They must agree to floating
point noise on any valid network small enough to enumerate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Optional

from .model import Severity, ValidationFinding

# Tolerance for "CPT row sums to one" checks.
ROW_SUM_TOLERANCE = 1e-9

Assignment = Mapping[str, str]


@dataclass(frozen=True)
class Variable:
    """A discrete variable and its states, in declared order."""

    name: str
    states: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table for one variable.

    table has one row per combination of parent states (last parent
    fastest); each row gives P(child = state | parents) over the child's
    states in order. A parentless variable has a single row, its prior.
    """

    child: str
    parents: tuple[str, ...]
    table: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(
            self, "table", tuple(tuple(row) for row in self.table)
        )


@dataclass(frozen=True)
class BayesNet:
    """Immutable network: variables plus one CPT per variable."""

    variables: tuple[Variable, ...]
    cpts: tuple[Cpt, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpts", tuple(self.cpts))
        variables_by_name: dict[str, Variable] = {}
        for variable in self.variables:
            variables_by_name.setdefault(variable.name, variable)
        cpts_by_child: dict[str, Cpt] = {}
        for cpt in self.cpts:
            cpts_by_child.setdefault(cpt.child, cpt)
        object.__setattr__(self, "_variables_by_name", variables_by_name)
        object.__setattr__(self, "_cpts_by_child", cpts_by_child)

    def variable(self, name: str) -> Variable:
        return self._variables_by_name[name]  # type: ignore[attr-defined]

    def has_variable(self, name: str) -> bool:
        return name in self._variables_by_name  # type: ignore[attr-defined]

    def cpt(self, child: str) -> Cpt:
        return self._cpts_by_child[child]  # type: ignore[attr-defined]


class MalformedNetworkError(ValueError):
    """Raised when an operation needs a well-formed network and got errors."""

    def __init__(self, findings: list[ValidationFinding]):
        self.findings = [f for f in findings if f.severity is Severity.ERROR]
        super().__init__("; ".join(str(f) for f in self.findings) or "malformed network")


class ImpossibleEvidenceError(ValueError):
    """Raised when the given evidence has probability zero."""


def validate_network(net: BayesNet) -> list[ValidationFinding]:
    """Check structural invariants and return findings.

    Errors cover duplicate or missing names, table shape mismatches,
    out-of-range or non-normalized rows, and cycles. A clean network
    returns an empty list.
    """
    out: list[ValidationFinding] = []

    def err(name: Optional[str], msg: str) -> None:
        out.append(ValidationFinding(Severity.ERROR, name, msg))

    seen_vars: set[str] = set()
    for variable in net.variables:
        if variable.name in seen_vars:
            err(variable.name, "duplicate variable name")
            continue
        seen_vars.add(variable.name)
        if not variable.states:
            err(variable.name, "variable has no states")
        if len(set(variable.states)) != len(variable.states):
            err(variable.name, "duplicate state names")

    seen_children: set[str] = set()
    for cpt in net.cpts:
        if cpt.child in seen_children:
            err(cpt.child, "duplicate table for variable")
            continue
        seen_children.add(cpt.child)
        if cpt.child not in seen_vars:
            err(cpt.child, "table for unknown variable")
            continue
        bad_parent = False
        for parent in cpt.parents:
            if parent == cpt.child:
                err(cpt.child, "variable cannot be its own parent")
                bad_parent = True
            elif parent not in seen_vars:
                err(cpt.child, f"unknown parent {parent!r}")
                bad_parent = True
        if len(set(cpt.parents)) != len(cpt.parents):
            err(cpt.child, "duplicate parents")
            bad_parent = True
        if bad_parent:
            continue
        expected_rows = 1
        for parent in cpt.parents:
            expected_rows *= len(net.variable(parent).states)
        if len(cpt.table) != expected_rows:
            err(
                cpt.child,
                f"{len(cpt.table)} rows, expected {expected_rows} "
                "(one per parent state combination)",
            )
            continue
        width = len(net.variable(cpt.child).states)
        for i, row in enumerate(cpt.table):
            if len(row) != width:
                err(cpt.child, f"row {i} has {len(row)} entries, expected {width}")
                continue
            if any(not 0.0 <= p <= 1.0 for p in row):
                err(cpt.child, f"row {i} has entries outside [0, 1]")
                continue
            total = sum(row)
            if abs(total - 1.0) > ROW_SUM_TOLERANCE:
                err(cpt.child, f"row {i} sums to {total!r}, expected 1")

    for name in sorted(seen_vars - seen_children):
        err(name, "variable has no table")

    if not any(f.severity is Severity.ERROR for f in out):
        cycle = _cycle_members(net)
        if cycle:
            err(min(cycle), "cycle through " + ", ".join(sorted(cycle)))
    return out


def _cycle_members(net: BayesNet) -> set[str]:
    children: dict[str, set[str]] = {v.name: set() for v in net.variables}
    indegree = {v.name: 0 for v in net.variables}
    for cpt in net.cpts:
        for parent in cpt.parents:
            children[parent].add(cpt.child)
            indegree[cpt.child] += 1
    ready = [name for name, d in indegree.items() if d == 0]
    while ready:
        name = ready.pop()
        for child in children[name]:
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(child)
    return {name for name, d in indegree.items() if d > 0}


def ensure_valid_network(net: BayesNet) -> None:
    findings = validate_network(net)
    if any(f.severity is Severity.ERROR for f in findings):
        raise MalformedNetworkError(findings)


def _check_assignment(net: BayesNet, assignment: Assignment) -> None:
    for name, state in assignment.items():
        if not net.has_variable(name):
            raise ValueError(f"unknown variable {name!r}")
        if state not in net.variable(name).states:
            raise ValueError(f"variable {name!r} has no state {state!r}")


def _row_index(net: BayesNet, cpt: Cpt, assignment: Assignment) -> int:
    index = 0
    for parent in cpt.parents:
        states = net.variable(parent).states
        index = index * len(states) + states.index(assignment[parent])
    return index


def joint_probability(net: BayesNet, assignment: Assignment) -> float:
    """Probability of one full assignment: the product of CPT entries."""
    _check_assignment(net, assignment)
    missing = [v.name for v in net.variables if v.name not in assignment]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    result = 1.0
    for cpt in net.cpts:
        row = cpt.table[_row_index(net, cpt, assignment)]
        child_states = net.variable(cpt.child).states
        result *= row[child_states.index(assignment[cpt.child])]
    return result


def _check_query(net: BayesNet, target: str, evidence: Assignment) -> None:
    if not net.has_variable(target):
        raise ValueError(f"unknown variable {target!r}")
    _check_assignment(net, evidence)
    if target in evidence:
        raise ValueError(f"target {target!r} is fixed by the evidence")


def brute_force_query(
    net: BayesNet, target: str, evidence: Optional[Assignment] = None
) -> dict[str, float]:
    """P(target | evidence) by full joint enumeration.

    Exponential in the number of variables; it exists as an oracle for
    `query` and for tiny networks. Raises ImpossibleEvidenceError when the
    evidence has probability zero.
    """
    evidence = dict(evidence or {})
    _check_query(net, target, evidence)
    target_states = net.variable(target).states
    totals = {state: 0.0 for state in target_states}
    names = [v.name for v in net.variables]
    state_lists = [v.states for v in net.variables]
    for combo in itertools.product(*state_lists):
        assignment = dict(zip(names, combo))
        if any(assignment[name] != state for name, state in evidence.items()):
            continue
        totals[assignment[target]] += joint_probability(net, assignment)
    normalizer = sum(totals.values())
    if normalizer <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {evidence} has probability 0")
    return {state: p / normalizer for state, p in totals.items()}


@dataclass(frozen=True)
class _Factor:
    """Table over a tuple of variables, keyed by state tuples."""

    names: tuple[str, ...]
    values: Mapping[tuple[str, ...], float]


def _cpt_factor(net: BayesNet, cpt: Cpt) -> _Factor:
    names = (*cpt.parents, cpt.child)
    child_states = net.variable(cpt.child).states
    values: dict[tuple[str, ...], float] = {}
    parent_state_lists = [net.variable(p).states for p in cpt.parents]
    for row, combo in zip(cpt.table, itertools.product(*parent_state_lists)):
        for state, p in zip(child_states, row):
            values[(*combo, state)] = p
    return _Factor(names, values)


def _restrict(factor: _Factor, name: str, state: str) -> _Factor:
    if name not in factor.names:
        return factor
    axis = factor.names.index(name)
    names = factor.names[:axis] + factor.names[axis + 1 :]
    values = {
        key[:axis] + key[axis + 1 :]: v
        for key, v in factor.values.items()
        if key[axis] == state
    }
    return _Factor(names, values)


def _multiply(net: BayesNet, f: _Factor, g: _Factor) -> _Factor:
    names = f.names + tuple(n for n in g.names if n not in f.names)
    f_axes = [names.index(n) for n in f.names]
    g_axes = [names.index(n) for n in g.names]
    state_lists = [net.variable(n).states for n in names]
    values: dict[tuple[str, ...], float] = {}
    for combo in itertools.product(*state_lists):
        fv = f.values.get(tuple(combo[a] for a in f_axes))
        if fv is None:
            continue
        gv = g.values.get(tuple(combo[a] for a in g_axes))
        if gv is None:
            continue
        values[combo] = fv * gv
    return _Factor(names, values)


def _marginalize(factor: _Factor, name: str) -> _Factor:
    axis = factor.names.index(name)
    names = factor.names[:axis] + factor.names[axis + 1 :]
    values: dict[tuple[str, ...], float] = {}
    for key, v in factor.values.items():
        reduced = key[:axis] + key[axis + 1 :]
        values[reduced] = values.get(reduced, 0.0) + v
    return _Factor(names, values)


def _elimination_order(factors: list[_Factor], hidden: set[str]) -> list[str]:
    """Min-degree order over the interaction graph, names as tie-break."""
    neighbors: dict[str, set[str]] = {name: set() for name in hidden}
    cliques = [set(f.names) for f in factors]
    for clique in cliques:
        for name in clique & hidden:
            neighbors[name] |= clique - {name}
    order: list[str] = []
    remaining = set(hidden)
    while remaining:
        name = min(remaining, key=lambda n: (len(neighbors[n] & remaining), n))
        order.append(name)
        remaining.discard(name)
        linked = neighbors[name] & remaining
        for a in linked:
            neighbors[a] |= linked - {a}
    return order


def query(
    net: BayesNet, target: str, evidence: Optional[Assignment] = None
) -> dict[str, float]:
    """P(target | evidence) by variable elimination.

    Returns a distribution over the target's states in declared order.
    Raises ImpossibleEvidenceError when the evidence has probability zero
    and ValueError for unknown names or a target fixed by the evidence.
    """
    evidence = dict(evidence or {})
    _check_query(net, target, evidence)
    factors = [_cpt_factor(net, cpt) for cpt in net.cpts]
    for name, state in evidence.items():
        factors = [_restrict(f, name, state) for f in factors]
    hidden = {v.name for v in net.variables} - set(evidence) - {target}
    for name in _elimination_order(factors, hidden):
        related = [f for f in factors if name in f.names]
        if not related:
            continue
        factors = [f for f in factors if name not in f.names]
        product = reduce(lambda a, b: _multiply(net, a, b), related)
        factors.append(_marginalize(product, name))
    result = reduce(
        lambda a, b: _multiply(net, a, b),
        factors,
        _Factor((), {(): 1.0}),
    )
    target_states = net.variable(target).states
    unnormalized = [result.values.get((state,), 0.0) for state in target_states]
    normalizer = sum(unnormalized)
    if normalizer <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {evidence} has probability 0")
    return {
        state: p / normalizer for state, p in zip(target_states, unnormalized)
    }
