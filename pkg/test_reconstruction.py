#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试伪星树重建：邻居类、四元组、拓扑拼装、边权与验证
"""
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from example_trees import caterpillar_six, left_tree, right_tree, small_star
from src.core.dissimilarity import k_vector
from src.core.errors import (
    BadKError,
    InconsistentError,
    NoValidWitnessError,
    NotTreelikeError,
    ShapeMismatchError,
)
from src.core.oracle import RandomSpec, random_pseudostar
from src.core.reconstruction import (
    QuartetResolution,
    are_neighbors,
    assemble_topology,
    edge_witness,
    internal_edge_weights,
    neighbor_classes,
    neighbor_difference,
    reconstruct,
    resolve_quartet,
    star_twig_weights,
    twig_weights,
    verify_realization,
)
from src.core.tree_core import build_tree, labeled_equal
from src.utils.config_manager import ConfigManager


@pytest.fixture(scope="module")
def right_family():
    return k_vector(right_tree(), 5)


def _caterpillar_five():
    edges = [(1, 6, 2), (2, 6, 3), (6, 7, 4), (3, 7, 5), (7, 8, 6), (4, 8, 7), (5, 8, 1)]
    return build_tree(edges, {label: label for label in range(1, 6)})


def _structural_resolutions(topo, labels):
    return {q: QuartetResolution(q, topo.quartet_topology(*q))
            for q in combinations(sorted(labels), 4)}


def test_neighbor_difference(right_family):
    assert neighbor_difference(right_family, 1, 2) == -1
    assert are_neighbors(right_family, 7, 8)
    assert not are_neighbors(right_family, 1, 3)


def test_neighbor_classes_are_complete_cherries(right_family):
    assert neighbor_classes(right_family) == right_tree().complete_cherries()


def test_neighbor_requires_k_range():
    with pytest.raises(BadKError):
        neighbor_classes(k_vector(small_star(), 3))


def test_resolve_quartet_cherries(right_family):
    resolution = resolve_quartet(right_family, 7, 1, 8, 2, neighbor_classes(right_family))
    assert resolution.pairing == ((1, 2), (7, 8))
    assert resolution.reason == "cherries"
    assert str(resolution) == "12|78"


def test_resolve_quartet_star(right_family):
    resolution = resolve_quartet(right_family, 1, 3, 5, 7, neighbor_classes(right_family))
    assert resolution.is_star
    assert str(resolution) == "STAR"


def test_quartet_sums_for_cherry_pairing(right_family):
    s = (3, 4, 5)
    paired = right_family[(1, 2) + s] + right_family[(7, 8) + s]
    crossed = right_family[(1, 7) + s] + right_family[(2, 8) + s]
    assert (paired, crossed) == (84, 87)


def test_resolve_quartet_with_k_three():
    t = _caterpillar_five()
    d = k_vector(t, 3)
    classes = neighbor_classes(d)
    assert classes == [frozenset({1, 2}), frozenset({3}), frozenset({4, 5})]
    for quartet in combinations(range(1, 6), 4):
        assert resolve_quartet(d, *quartet, classes).pairing == t.quartet_topology(*quartet)


def test_edge_witness_is_deterministic():
    quartet, rest = edge_witness(right_tree().topology(), (9, 13), 5)
    assert quartet == (1, 2, 3, 5)
    assert rest == (4, 6, 7)


def test_edge_witness_needs_a_large_side():
    with pytest.raises(NoValidWitnessError):
        edge_witness(left_tree().topology(), (13, 14), 5)


def test_internal_edge_constant_is_one(right_family):
    t = right_tree()
    weights = internal_edge_weights(right_family, t.topology())
    assert weights == {e: t.weight(e) for e in t.internal_edges()}


def test_internal_edge_factor_is_configurable(right_family):
    config = ConfigManager()
    config.set("RECONSTRUCTION", "internal_edge_factor", 2)
    weights = internal_edge_weights(right_family, right_tree().topology(), config)
    assert weights[(12, 13)] == 1


def test_twig_weights(right_family):
    t = right_tree()
    internal = {e: t.weight(e) for e in t.internal_edges()}
    twigs = twig_weights(right_family, t.topology(), internal)
    assert twigs == {1: 7, 2: 8, 3: 7, 4: 8, 5: 7, 6: 8, 7: 7, 8: 7}


def test_star_closed_form():
    assert star_twig_weights(k_vector(small_star(), 3)) == {1: 1, 2: 2, 3: 3, 4: 4}


def test_assemble_topology_from_structural_quartets():
    t = caterpillar_six()
    classes = t.complete_cherries()
    topo = assemble_topology(_structural_resolutions(t, range(1, 7)), classes)
    assert topo.split_encoding() == t.split_encoding()


def test_assemble_single_class_and_two_classes():
    star = assemble_topology({}, [frozenset({1, 2, 3, 4})])
    assert star.split_encoding() == ()
    two = assemble_topology({}, [frozenset({1, 2}), frozenset({3, 4, 5})])
    assert two.split_encoding() == ((1, 2),)
    with pytest.raises(InconsistentError):
        assemble_topology({}, [frozenset({1}), frozenset({2, 3, 4})])


def test_assemble_rejects_contradictory_quartets():
    t = _caterpillar_five()
    resolutions = _structural_resolutions(t, range(1, 6))
    resolutions[(1, 3, 4, 5)] = QuartetResolution((1, 3, 4, 5), None)
    with pytest.raises(InconsistentError):
        assemble_topology(resolutions, [frozenset({x}) for x in range(1, 6)])


def test_reconstruct_right_tree(right_family):
    report = reconstruct(right_family)
    assert report.verified
    assert report.witness is None
    assert labeled_equal(report.tree, right_tree())


def test_reconstruct_from_non_pseudostar_realization():
    report = reconstruct(k_vector(left_tree(), 5))
    assert labeled_equal(report.tree, right_tree())
    assert report.tree.total_weight() == 66


def test_reconstruct_left_tree_with_k_four():
    report = reconstruct(k_vector(left_tree(), 4))
    assert labeled_equal(report.tree, left_tree())


def test_reconstruct_star():
    report = reconstruct(k_vector(small_star(), 3))
    assert labeled_equal(report.tree, small_star())


def test_reconstruct_rejects_perturbed_family(right_family):
    with pytest.raises(NotTreelikeError):
        reconstruct(right_family.perturbed((1, 2, 3, 4, 5), 1), strict=True)


def test_reconstruct_non_strict_reports_witness(right_family):
    perturbed = right_family.perturbed((1, 2, 3, 4, 5), 1)
    try:
        report = reconstruct(perturbed, strict=False)
    except NotTreelikeError as exc:
        assert exc.witness is None or len(exc.witness) == 5
    else:
        assert not report.verified
        assert report.witness is not None


def test_verify_realization():
    d = k_vector(right_tree(), 5)
    assert verify_realization(left_tree(), d) == (True, None)
    ok, witness = verify_realization(left_tree(), d.perturbed((1, 2, 3, 4, 8), 2))
    assert not ok
    assert witness == (1, 2, 3, 4, 8)
    with pytest.raises(ShapeMismatchError):
        verify_realization(small_star(), d)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=5, max_value=8),
       st.data())
def test_reconstruct_random_pseudostars(seed, n, data):
    k = data.draw(st.integers(min_value=3, max_value=n - 1))
    p = random_pseudostar(RandomSpec(n=n, k=k, seed=seed, positive=False, denominator=2))
    report = reconstruct(k_vector(p, k))
    assert report.verified
    assert labeled_equal(report.tree, p)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=6, max_value=7),
       st.data())
def test_quartets_match_pseudostar_structure(seed, n, data):
    k = data.draw(st.integers(min_value=3, max_value=n - 2))
    p = random_pseudostar(RandomSpec(n=n, k=k, seed=seed))
    d = k_vector(p, k)
    classes = neighbor_classes(d)
    for quartet in combinations(range(1, n + 1), 4):
        assert resolve_quartet(d, *quartet, classes).pairing == p.quartet_topology(*quartet)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
