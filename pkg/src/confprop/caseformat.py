"""Textual file format for cases and their embedded belief networks.

The format, "confprop/1", is a single JSON document:

    {
      "version": "confprop/1",
      "nodes": [ ... ],
      "blocks": [ ... ],
      "top": "C1",
      "networks": { ... }            // optional
    }

Node entries carry `id`, `node_type` ("claim" or "evidence") and then
either `kind`/`statement`/`confidence`/`residual` for claims or
`description`/`confidence`/`measurement_fidelity`/`confirmation` for
evidence. Block entries carry `id`, `kind`, `parent`, `subclaims` and the
optional `sideclaim`, `mode`, `k`, `weights`, `conditionals`, `justified`.
Networks map a name to an object keyed by variable name, each variable an
object with `states`, `parents` and `table`. docs/format.md documents the
schema and the normative table layout.

Parsing is strict: unknown keys, wrong types, out-of-range numbers and
documents that violate model invariants are all rejected, with the JSON
path (and line/column for syntax errors) in the message. Confidences are
JSON numbers in [0, 1]; percent notation is deliberately not accepted.
Serialization is deterministic and numbers round-trip exactly, so
parse(serialize(case)) reproduces the case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Union

from .bbn import BayesNet, Cpt, Variable, validate_network
from .model import (
    ArgumentBlock,
    AssuranceCase,
    BlockKind,
    ClaimKind,
    ClaimNode,
    CombinationMode,
    EvidenceLeaf,
    Node,
    ResidualAssessment,
    ResidualSeverity,
    Severity,
    ValidationFinding,
    validate_case,
)

FORMAT_VERSION = "confprop/1"


class ParseError(ValueError):
    """A document could not be parsed; message names the offending spot."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.path = path
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        elif path:
            where = f" at {path}"
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class CaseDocument:
    """A parsed document: the case plus any embedded networks."""

    case: AssuranceCase
    networks: Mapping[str, BayesNet] = field(default_factory=dict)
    version: str = FORMAT_VERSION


def _type_name(value: Any) -> str:
    return {
        dict: "object",
        list: "array",
        str: "string",
        bool: "boolean",
        int: "number",
        float: "number",
        type(None): "null",
    }.get(type(value), type(value).__name__)


def _object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"expected object, got {_type_name(value)}", path)
    return value


def _array(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"expected array, got {_type_name(value)}", path)
    return value


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"expected string, got {_type_name(value)}", path)
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected number, got {_type_name(value)}", path)
    return float(value)


def _unit(value: Any, path: str) -> float:
    number = _number(value, path)
    if not 0.0 <= number <= 1.0:
        raise ParseError(f"confidence {number!r} outside [0, 1]", path)
    return number


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ParseError(f"expected boolean, got {_type_name(value)}", path)
    return value


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected integer, got {_type_name(value)}", path)
    return value


def _check_keys(obj: dict, path: str, required: tuple, optional: tuple) -> None:
    for key in obj:
        if key not in required and key not in optional:
            raise ParseError(f"unknown key {key!r}", path)
    for key in required:
        if key not in obj:
            raise ParseError(f"missing key {key!r}", path)


def _enum(cls: type, value: Any, path: str, what: str):
    name = _string(value, path)
    try:
        return cls(name)
    except ValueError:
        allowed = ", ".join(member.value for member in cls)
        raise ParseError(
            f"unknown {what} {name!r} (expected one of: {allowed})", path
        ) from None


def _parse_node(obj: Any, path: str) -> Node:
    entry = _object(obj, path)
    if "node_type" not in entry:
        raise ParseError("missing key 'node_type'", path)
    node_type = _string(entry["node_type"], f"{path}.node_type")
    if node_type == "claim":
        _check_keys(
            entry,
            path,
            required=("id", "node_type", "statement"),
            optional=("kind", "confidence", "residual"),
        )
        residual = None
        if "residual" in entry:
            rpath = f"{path}.residual"
            robj = _object(entry["residual"], rpath)
            _check_keys(robj, rpath, required=("class",), optional=("count",))
            severity = _enum(
                ResidualSeverity, robj["class"], f"{rpath}.class", "residual class"
            )
            count = (
                _integer(robj["count"], f"{rpath}.count")
                if "count" in robj
                else 1
            )
            residual = ResidualAssessment(severity=severity, count=count)
        return ClaimNode(
            id=_string(entry["id"], f"{path}.id"),
            statement=_string(entry["statement"], f"{path}.statement"),
            kind=(
                _enum(ClaimKind, entry["kind"], f"{path}.kind", "claim kind")
                if "kind" in entry
                else ClaimKind.ORDINARY
            ),
            assigned_confidence=(
                _unit(entry["confidence"], f"{path}.confidence")
                if "confidence" in entry
                else None
            ),
            residual=residual,
        )
    if node_type == "evidence":
        _check_keys(
            entry,
            path,
            required=("id", "node_type", "description", "confidence"),
            optional=("measurement_fidelity", "confirmation"),
        )
        confirmation = None
        if "confirmation" in entry:
            cpath = f"{path}.confirmation"
            cobj = _object(entry["confirmation"], cpath)
            _check_keys(
                cobj, cpath, required=("p_e_given_c", "p_e_given_not_c"), optional=()
            )
            confirmation = (
                _number(cobj["p_e_given_c"], f"{cpath}.p_e_given_c"),
                _number(cobj["p_e_given_not_c"], f"{cpath}.p_e_given_not_c"),
            )
        return EvidenceLeaf(
            id=_string(entry["id"], f"{path}.id"),
            description=_string(entry["description"], f"{path}.description"),
            posterior=_unit(entry["confidence"], f"{path}.confidence"),
            measurement_fidelity=(
                _unit(
                    entry["measurement_fidelity"],
                    f"{path}.measurement_fidelity",
                )
                if "measurement_fidelity" in entry
                else 1.0
            ),
            confirmation=confirmation,
        )
    raise ParseError(
        f"unknown node_type {node_type!r} (expected claim or evidence)",
        f"{path}.node_type",
    )


def _parse_block(obj: Any, path: str) -> ArgumentBlock:
    entry = _object(obj, path)
    _check_keys(
        entry,
        path,
        required=("id", "kind", "parent", "subclaims"),
        optional=("sideclaim", "mode", "k", "weights", "conditionals", "justified"),
    )
    subclaims = tuple(
        _string(s, f"{path}.subclaims[{i}]")
        for i, s in enumerate(_array(entry["subclaims"], f"{path}.subclaims"))
    )
    weights = None
    if "weights" in entry:
        weights = tuple(
            _number(w, f"{path}.weights[{i}]")
            for i, w in enumerate(_array(entry["weights"], f"{path}.weights"))
        )
    conditionals = None
    if "conditionals" in entry:
        conditionals = tuple(
            None if c is None else _unit(c, f"{path}.conditionals[{i}]")
            for i, c in enumerate(
                _array(entry["conditionals"], f"{path}.conditionals")
            )
        )
    return ArgumentBlock(
        id=_string(entry["id"], f"{path}.id"),
        kind=_enum(BlockKind, entry["kind"], f"{path}.kind", "block kind"),
        parent=_string(entry["parent"], f"{path}.parent"),
        subclaims=subclaims,
        sideclaim=(
            _string(entry["sideclaim"], f"{path}.sideclaim")
            if "sideclaim" in entry
            else None
        ),
        mode=(
            _enum(CombinationMode, entry["mode"], f"{path}.mode", "combination mode")
            if "mode" in entry
            else None
        ),
        k=_unit(entry["k"], f"{path}.k") if "k" in entry else 1.0,
        weights=weights,
        conditionals=conditionals,
        justified=(
            _boolean(entry["justified"], f"{path}.justified")
            if "justified" in entry
            else False
        ),
    )


def _parse_network(obj: Any, path: str) -> BayesNet:
    entry = _object(obj, path)
    variables: list[Variable] = []
    cpts: list[Cpt] = []
    for name, definition in entry.items():
        vpath = f"{path}.{name}"
        vobj = _object(definition, vpath)
        _check_keys(vobj, vpath, required=("states", "parents", "table"), optional=())
        states = tuple(
            _string(s, f"{vpath}.states[{i}]")
            for i, s in enumerate(_array(vobj["states"], f"{vpath}.states"))
        )
        parents = tuple(
            _string(p, f"{vpath}.parents[{i}]")
            for i, p in enumerate(_array(vobj["parents"], f"{vpath}.parents"))
        )
        table = tuple(
            tuple(
                _number(p, f"{vpath}.table[{i}][{j}]")
                for j, p in enumerate(_array(row, f"{vpath}.table[{i}]"))
            )
            for i, row in enumerate(_array(vobj["table"], f"{vpath}.table"))
        )
        variables.append(Variable(name=name, states=states))
        cpts.append(Cpt(child=name, parents=parents, table=table))
    return BayesNet(variables=tuple(variables), cpts=tuple(cpts))


def parse_document(text: str) -> tuple[CaseDocument, list[ValidationFinding]]:
    """Parse a document and report validation findings instead of raising.

    Syntax errors and schema violations still raise ParseError; model and
    network validation problems come back as findings so callers like the
    validate command can list them all. Network findings are namespaced as
    "network:variable".
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from None
    doc = _object(raw, "$")
    _check_keys(
        doc,
        "$",
        required=("version", "nodes", "blocks", "top"),
        optional=("networks",),
    )
    version = _string(doc["version"], "$.version")
    if version != FORMAT_VERSION:
        raise ParseError(
            f"unsupported version {version!r} (expected {FORMAT_VERSION!r})",
            "$.version",
        )
    nodes = tuple(
        _parse_node(obj, f"$.nodes[{i}]")
        for i, obj in enumerate(_array(doc["nodes"], "$.nodes"))
    )
    blocks = tuple(
        _parse_block(obj, f"$.blocks[{i}]")
        for i, obj in enumerate(_array(doc["blocks"], "$.blocks"))
    )
    case = AssuranceCase(
        nodes=nodes, blocks=blocks, top=_string(doc["top"], "$.top")
    )
    findings = validate_case(case)

    networks: dict[str, BayesNet] = {}
    if "networks" in doc:
        for name, obj in _object(doc["networks"], "$.networks").items():
            net = _parse_network(obj, f"$.networks.{name}")
            for f in validate_network(net):
                findings.append(
                    ValidationFinding(
                        f.severity,
                        f"{name}:{f.node}" if f.node else name,
                        f.message,
                    )
                )
            networks[name] = net
    return CaseDocument(case=case, networks=networks), findings


def parse_case(text: str) -> CaseDocument:
    """Parse a "confprop/1" document.

    Returns the case and any embedded networks. Raises ParseError for
    syntax errors (with line and column), schema violations (with the
    JSON path) and documents whose case or networks fail validation.
    """
    document, findings = parse_document(text)
    errors = [f for f in findings if f.severity is Severity.ERROR]
    if errors:
        raise ParseError("; ".join(str(f) for f in errors), "$")
    return document


def _node_to_dict(node: Node) -> dict:
    if isinstance(node, ClaimNode):
        out: dict[str, Any] = {
            "id": node.id,
            "node_type": "claim",
            "kind": node.kind.value,
            "statement": node.statement,
        }
        if node.assigned_confidence is not None:
            out["confidence"] = node.assigned_confidence
        if node.residual is not None:
            out["residual"] = {
                "class": node.residual.severity.value,
                "count": node.residual.count,
            }
        return out
    out = {
        "id": node.id,
        "node_type": "evidence",
        "description": node.description,
        "confidence": node.posterior,
    }
    if node.measurement_fidelity != 1.0:
        out["measurement_fidelity"] = node.measurement_fidelity
    if node.confirmation is not None:
        out["confirmation"] = {
            "p_e_given_c": node.confirmation[0],
            "p_e_given_not_c": node.confirmation[1],
        }
    return out


def _block_to_dict(block: ArgumentBlock) -> dict:
    out: dict[str, Any] = {
        "id": block.id,
        "kind": block.kind.value,
        "parent": block.parent,
        "subclaims": list(block.subclaims),
    }
    if block.sideclaim is not None:
        out["sideclaim"] = block.sideclaim
    if block.mode is not None:
        out["mode"] = block.mode.value
    if block.k != 1.0:
        out["k"] = block.k
    if block.weights is not None:
        out["weights"] = list(block.weights)
    if block.conditionals is not None:
        out["conditionals"] = list(block.conditionals)
    if block.justified:
        out["justified"] = True
    return out


def _network_to_dict(net: BayesNet) -> dict:
    out: dict[str, Any] = {}
    for variable in net.variables:
        cpt = net.cpt(variable.name)
        out[variable.name] = {
            "states": list(variable.states),
            "parents": list(cpt.parents),
            "table": [list(row) for row in cpt.table],
        }
    return out


def document_to_dict(doc: CaseDocument) -> dict:
    """The document as plain JSON-ready data, deterministically ordered."""
    out: dict[str, Any] = {
        "version": doc.version,
        "nodes": [_node_to_dict(node) for node in doc.case.nodes],
        "blocks": [_block_to_dict(block) for block in doc.case.blocks],
        "top": doc.case.top,
    }
    if doc.networks:
        out["networks"] = {
            name: _network_to_dict(net) for name, net in doc.networks.items()
        }
    return out


def serialize_case(doc: Union[CaseDocument, AssuranceCase]) -> str:
    """Serialize to "confprop/1" text.

    Accepts a bare case or a full document. Output is deterministic; every
    number is emitted with the shortest representation that parses back to
    the same value, so round-trips are exact.
    """
    if isinstance(doc, AssuranceCase):
        doc = CaseDocument(case=doc)
    return json.dumps(document_to_dict(doc), indent=2) + "\n"
