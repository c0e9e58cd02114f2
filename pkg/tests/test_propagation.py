"""Combination arithmetic and end-to-end propagation."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from confprop import (
    ArgumentBlock,
    AssuranceCase,
    BlockKind,
    ClaimKind,
    ClaimNode,
    CombinationMode,
    EvidenceLeaf,
    MalformedCaseError,
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
from helpers import random_case

unit = st.floats(min_value=0.0, max_value=1.0)
unit_lists = st.lists(unit, min_size=1, max_size=8)


class TestLeafArithmetic:
    def test_doubt_is_complement(self):
        assert doubt(0.3) == 0.7

    def test_evidence_confidence_three_factors(self):
        leaf = EvidenceLeaf(
            id="e", description="d", posterior=0.9, measurement_fidelity=0.95
        )
        assert evidence_confidence(leaf, 0.8) == 0.9 * 0.95 * 0.8
        assert evidence_confidence(leaf) == 0.9 * 0.95

    def test_good_confirmation_signs(self):
        assert good_confirmation(0.9, 0.9) == 0.0
        assert good_confirmation(0.9, 0.3) > 0.0
        assert good_confirmation(0.3, 0.9) < 0.0

    def test_good_confirmation_value(self):
        assert good_confirmation(0.9853, 0.3307) == pytest.approx(
            math.log(0.9853 / 0.3307), abs=1e-15
        )

    @pytest.mark.parametrize("bad", [(0.0, 0.5), (0.5, 0.0), (-0.1, 0.5)])
    def test_good_confirmation_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError, match="positive"):
            good_confirmation(*bad)

    def test_single_subclaim_worked_example(self):
        # Measured 0.8, useful 0.9, inference discount 0.95.
        assert single_subclaim(0.8, 0.9, 0.95) == 0.684

    def test_single_subclaim_defaults(self):
        assert single_subclaim(0.7) == 0.7


class TestCombiners:
    def test_diversity_two_legs(self):
        assert combine_diversity([0.95, 0.90]) == pytest.approx(0.995, abs=1e-12)

    def test_diversity_worked_example_with_sideclaim(self):
        combined = combine_diversity([0.95, 0.90])
        assert combined * 0.9 == pytest.approx(0.8955, abs=5e-4)

    def test_partitioned_worked_example(self):
        assert combine_partitioned([0.9, 0.95, 0.8], [0.6, 0.3, 0.1]) == 0.905

    def test_partitioned_without_weights_is_mean(self):
        assert combine_partitioned([0.9, 0.85, 0.8]) == combine_averaging(
            [0.9, 0.85, 0.8]
        )

    def test_partitioned_rejects_bad_weights(self):
        with pytest.raises(ValueError, match="weights"):
            combine_partitioned([0.9, 0.8], [0.5, 0.3, 0.2])
        with pytest.raises(ValueError, match="sum"):
            combine_partitioned([0.9, 0.8], [0.6, 0.6])
        with pytest.raises(ValueError, match="nonnegative"):
            combine_partitioned([0.9, 0.8], [1.5, -0.5])

    def test_averaging(self):
        assert combine_averaging([0.9, 0.85, 0.8]) == 0.85

    def test_containment_is_max(self):
        assert combine_containment([0.9, 0.85, 0.8]) == 0.9

    def test_cumulative_chain(self):
        assert combine_cumulative([0.48, 0.81, 0.56]) == pytest.approx(
            0.217728, abs=5e-5
        )

    def test_cumulative_uses_conditionals_where_present(self):
        # First step keeps its marginal; later steps use conditional values.
        assert combine_cumulative([0.9, 0.5, 0.5], [None, 0.89, 0.95]) == (
            0.9 * 0.89 * 0.95
        )

    def test_cumulative_length_mismatch(self):
        with pytest.raises(ValueError, match="conditionals"):
            combine_cumulative([0.9, 0.8], [None])

    def test_product(self):
        assert combine_product([0.9, 0.85, 0.8]) == pytest.approx(0.612, abs=5e-4)

    def test_sum_of_doubts(self):
        assert combine_sum_of_doubts([0.9, 0.85, 0.8]) == pytest.approx(
            0.55, abs=5e-4
        )

    def test_sum_of_doubts_clips_at_zero(self):
        assert combine_sum_of_doubts([0.1, 0.1, 0.1]) == 0.0

    def test_empty_input_rejected(self):
        for combiner in (
            combine_diversity,
            combine_partitioned,
            combine_averaging,
            combine_containment,
            combine_cumulative,
            combine_product,
            combine_sum_of_doubts,
        ):
            with pytest.raises(ValueError):
                combiner([])

    @given(unit_lists)
    def test_all_combiners_stay_in_range(self, confs):
        for combiner in (
            combine_diversity,
            combine_averaging,
            combine_containment,
            combine_product,
            combine_sum_of_doubts,
        ):
            assert 0.0 <= combiner(confs) <= 1.0

    @given(unit_lists)
    def test_ordering_chain(self, confs):
        lo, hi = frechet_interval(confs)
        sum_doubts = combine_sum_of_doubts(confs)
        product = combine_product(confs)
        containment = combine_containment(confs)
        diversity = combine_diversity(confs)
        eps = 1e-12
        assert sum_doubts <= product + eps
        assert product <= min(confs) + eps
        assert min(confs) <= containment + eps
        assert containment <= diversity + eps
        assert diversity <= hi + eps
        assert lo == containment

    @given(st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
    def test_two_leg_diversity_identity(self, a, b):
        assert combine_diversity([a, b]) == pytest.approx(
            a + b - a * b, abs=1e-15
        )

    @given(unit_lists)
    def test_partitioned_equals_weighted_total(self, confs):
        rng = random.Random(hash(tuple(confs)) & 0xFFFF)
        raw = [rng.uniform(0.1, 1.0) for _ in confs]
        weights = [w / math.fsum(raw) for w in raw]
        expected = math.fsum(w * c for w, c in zip(weights, confs))
        assert combine_partitioned(confs, weights) == pytest.approx(
            expected, abs=1e-12
        )


def single_block_case(mode, confs, k=1.0, side=None, **extra):
    nodes = [ClaimNode(id="top", statement="top")]
    subclaims = []
    for i, c in enumerate(confs):
        node_id = f"s{i}"
        nodes.append(
            ClaimNode(
                id=node_id,
                statement=node_id,
                kind=ClaimKind.ASSUMPTION,
                assigned_confidence=c,
            )
        )
        subclaims.append(node_id)
    sideclaim = None
    if side is not None:
        nodes.append(
            ClaimNode(
                id="side",
                statement="side",
                kind=ClaimKind.ASSUMPTION,
                assigned_confidence=side,
            )
        )
        sideclaim = "side"
    block = ArgumentBlock(
        id="b1",
        kind=BlockKind.DECOMPOSITION if len(confs) > 1 else BlockKind.SUBSTITUTION,
        parent="top",
        subclaims=tuple(subclaims),
        sideclaim=sideclaim,
        mode=mode if len(confs) > 1 else None,
        k=k,
        **extra,
    )
    return AssuranceCase(nodes=tuple(nodes), blocks=(block,), top="top")


class TestBlockConfidence:
    def test_single_subclaim_block(self):
        block = ArgumentBlock(
            id="b",
            kind=BlockKind.SUBSTITUTION,
            parent="p",
            subclaims=("s",),
            k=0.95,
        )
        assert block_confidence(block, [0.8], 0.9) == 0.684

    def test_multi_block_applies_k_and_sideclaim(self):
        block = ArgumentBlock(
            id="b",
            kind=BlockKind.CALCULATION,
            parent="p",
            subclaims=("a", "b"),
            mode=CombinationMode.DIVERSITY,
            k=0.9,
        )
        combined = combine_diversity([0.95, 0.90])
        assert block_confidence(block, [0.95, 0.90], 0.8) == 0.9 * combined * 0.8

    @given(
        st.lists(unit, min_size=2, max_size=5),
        unit,
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_sideclaim_multiplicativity(self, confs, side, k):
        for mode in CombinationMode:
            block = ArgumentBlock(
                id="b",
                kind=BlockKind.DECOMPOSITION,
                parent="p",
                subclaims=tuple(f"s{i}" for i in range(len(confs))),
                mode=mode,
                k=k,
            )
            with_side = block_confidence(block, confs, side)
            without = block_confidence(block, confs, 1.0)
            assert with_side == without * side

    def test_wrong_arity_for_single_kind(self):
        block = ArgumentBlock(
            id="b", kind=BlockKind.CONCRETION, parent="p", subclaims=("s",)
        )
        with pytest.raises(ValueError, match="one subclaim"):
            block_confidence(block, [0.8, 0.9])


class TestPropagate:
    def test_chain_with_sideclaim(self):
        case = single_block_case(None, [0.9], side=0.85)
        result = propagate(case)
        assert result.values["top"] == 0.765
        trace = result.traces["b1"]
        assert trace.subclaim_confs == (0.9,)
        assert trace.sideclaim_conf == 0.85
        assert trace.output == 0.765

    def test_evidence_leaf_value(self):
        case = AssuranceCase(
            nodes=(
                ClaimNode(id="top", statement="top"),
                EvidenceLeaf(
                    id="e",
                    description="d",
                    posterior=0.9,
                    measurement_fidelity=0.95,
                ),
            ),
            blocks=(
                ArgumentBlock(
                    id="b1",
                    kind=BlockKind.EVIDENCE_INCORPORATION,
                    parent="top",
                    subclaims=("e",),
                ),
            ),
            top="top",
        )
        result = propagate(case)
        assert result.values["e"] == 0.9 * 0.95
        assert result.values["top"] == 0.9 * 0.95

    def test_sideclaim_discount_applied_once(self):
        # The sideclaim scales the block output; the leaf value itself stays
        # posterior times fidelity so the factor cannot be counted twice.
        case = AssuranceCase(
            nodes=(
                ClaimNode(id="top", statement="top"),
                ClaimNode(
                    id="useful",
                    statement="u",
                    kind=ClaimKind.ASSUMPTION,
                    assigned_confidence=0.9,
                ),
                EvidenceLeaf(id="e", description="d", posterior=0.8),
            ),
            blocks=(
                ArgumentBlock(
                    id="b1",
                    kind=BlockKind.EVIDENCE_INCORPORATION,
                    parent="top",
                    subclaims=("e",),
                    sideclaim="useful",
                ),
            ),
            top="top",
        )
        result = propagate(case)
        assert result.values["e"] == 0.8
        assert result.values["top"] == 0.8 * 0.9

    def test_overrides_pin_leaves(self):
        case = single_block_case(None, [0.9], side=0.85)
        assert propagate(case, {"side": 0.999}).values["top"] == 0.8991
        assert propagate(case, {"side": 0.0001}).values["top"] == 0.00009

    def test_override_rejects_non_leaf(self):
        case = single_block_case(CombinationMode.PRODUCT, [0.9, 0.8])
        with pytest.raises(ValueError, match="not a leaf"):
            propagate(case, {"top": 0.5})

    def test_override_rejects_unknown_node(self):
        case = single_block_case(CombinationMode.PRODUCT, [0.9, 0.8])
        with pytest.raises(ValueError, match="unknown node"):
            propagate(case, {"ghost": 0.5})

    def test_override_rejects_out_of_range(self):
        case = single_block_case(CombinationMode.PRODUCT, [0.9, 0.8])
        with pytest.raises(ValueError, match="outside"):
            propagate(case, {"s0": 1.5})

    def test_malformed_case_raises(self):
        case = AssuranceCase(
            nodes=(ClaimNode(id="top", statement="t"),), blocks=(), top="top"
        )
        with pytest.raises(MalformedCaseError):
            propagate(case)

    def test_unjustified_blocks_warn(self):
        case = single_block_case(CombinationMode.PRODUCT, [0.9, 0.8])
        result = propagate(case)
        assert any("justif" in w for w in result.warnings)
        justified = single_block_case(
            CombinationMode.PRODUCT, [0.9, 0.8], justified=True
        )
        assert propagate(justified).warnings == ()

    def test_baseline_unchanged_by_overrides(self):
        rng = random.Random(7)
        case = random_case(rng)
        before = propagate(case).values
        leaves = [n.id for n in case.leaves()]
        propagate(case, {leaves[0]: 0.123})
        assert propagate(case).values == before

    def test_random_cases_stay_in_range(self):
        rng = random.Random(1234)
        for _ in range(300):
            case = random_case(rng)
            result = propagate(case)
            for value in result.values.values():
                assert 0.0 <= value <= 1.0

    def test_end_to_end_monotonicity(self):
        rng = random.Random(4242)
        for _ in range(200):
            case = random_case(rng)
            leaves = [n.id for n in case.leaves()]
            leaf = rng.choice(leaves)
            lo = rng.random()
            hi = rng.uniform(lo, 1.0)
            top_lo = propagate(case, {leaf: lo}).values[case.top]
            top_hi = propagate(case, {leaf: hi}).values[case.top]
            assert top_hi >= top_lo - 1e-12
