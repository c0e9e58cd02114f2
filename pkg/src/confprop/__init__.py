"""Quantified confidence propagation for structured assurance cases.

Build a case as a graph of claims, evidence and argument blocks, then:

- propagate leaf confidences to the top claim (propagate),
- explore what-ifs by pinning leaves (propagate with overrides),
- measure which leaves matter (sensitivity),
- bound what unknown dependence could do to a block (dependence_bounds),
- check the argument for known weaknesses (validate_case, lint),
- run exact queries over embedded belief networks (query),
- and weigh the decision risk of trusting the case itself
  (chain_of_confidence_risk).

Cases travel as "confprop/1" JSON documents (parse_case, serialize_case);
the same engine backs the command line (confprop) and the HTTP service.
"""

from .analysis import (
    BlockBounds,
    LintFinding,
    SensitivityEntry,
    bayes_posterior,
    chain_of_confidence_risk,
    dependence_bounds,
    lint,
    sensitivity,
)
from .bbn import (
    BayesNet,
    Cpt,
    ImpossibleEvidenceError,
    MalformedNetworkError,
    Variable,
    brute_force_query,
    joint_probability,
    query,
    validate_network,
)
from .caseformat import (
    CaseDocument,
    FORMAT_VERSION,
    ParseError,
    parse_case,
    serialize_case,
)
from .model import (
    ArgumentBlock,
    AssuranceCase,
    BlockKind,
    ClaimKind,
    ClaimNode,
    CombinationMode,
    EvidenceLeaf,
    MalformedCaseError,
    NodeId,
    ResidualAssessment,
    ResidualSeverity,
    Severity,
    ValidationFinding,
    topological_order,
    validate_case,
)
from .propagation import (
    BlockTrace,
    PropagationResult,
    block_confidence,
    combine_averaging,
    combine_containment,
    combine_cumulative,
    combine_diversity,
    combine_partitioned,
    combine_product,
    combine_sum_of_doubts,
    doubt,
    evidence_confidence,
    frechet_interval,
    good_confirmation,
    propagate,
    single_subclaim,
)

__all__ = [
    "ArgumentBlock",
    "AssuranceCase",
    "BayesNet",
    "BlockBounds",
    "BlockKind",
    "BlockTrace",
    "CaseDocument",
    "ClaimKind",
    "ClaimNode",
    "CombinationMode",
    "Cpt",
    "EvidenceLeaf",
    "FORMAT_VERSION",
    "ImpossibleEvidenceError",
    "LintFinding",
    "MalformedCaseError",
    "MalformedNetworkError",
    "NodeId",
    "ParseError",
    "PropagationResult",
    "ResidualAssessment",
    "ResidualSeverity",
    "SensitivityEntry",
    "Severity",
    "ValidationFinding",
    "Variable",
    "bayes_posterior",
    "block_confidence",
    "brute_force_query",
    "chain_of_confidence_risk",
    "combine_averaging",
    "combine_containment",
    "combine_cumulative",
    "combine_diversity",
    "combine_partitioned",
    "combine_product",
    "combine_sum_of_doubts",
    "dependence_bounds",
    "doubt",
    "evidence_confidence",
    "frechet_interval",
    "good_confirmation",
    "joint_probability",
    "lint",
    "parse_case",
    "propagate",
    "query",
    "sensitivity",
    "serialize_case",
    "single_subclaim",
    "topological_order",
    "validate_case",
    "validate_network",
]

__version__ = "0.1.0"
