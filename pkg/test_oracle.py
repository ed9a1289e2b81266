#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试暴力预言机：朴素 Steiner 权重、随机生成、拓扑穷举、线性求解
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from example_trees import left_tree, right_tree, small_star
from src.core.dissimilarity import k_vector, steiner_weight, vectors_equal
from src.core.errors import InfeasibleSpecError, NotIoEligibleError, TooLargeError
from src.core.oracle import (
    RandomSpec,
    _realize_on,
    brute_force_realizations,
    brute_force_steiner,
    enumerate_topologies,
    pseudostar_filter,
    random_pseudostar,
    random_tree,
    signed_realization,
)
from src.core.reconstruction import verify_realization
from src.core.tree_core import labeled_equal, star_tree


def test_brute_force_steiner_examples():
    assert brute_force_steiner(left_tree(), (1, 2, 3, 4, 5)) == 42
    assert brute_force_steiner(small_star(), (1, 2, 3)) == 6
    assert brute_force_steiner(right_tree(), (1, 7)) == 17


@pytest.mark.parametrize("n, count", [(2, 1), (3, 1), (4, 4), (5, 26), (6, 236)])
def test_topology_counts(n, count):
    topologies = enumerate_topologies(n)
    assert len(topologies) == count
    assert all(t.is_essential() for t in topologies)
    assert len({t.split_encoding() for t in topologies}) == count


def test_topologies_sorted_by_encoding():
    encodings = [t.split_encoding() for t in enumerate_topologies(5)]
    assert encodings == sorted(encodings)
    assert encodings[0] == ()


def test_enumeration_cap():
    with pytest.raises(TooLargeError):
        enumerate_topologies(10)


def test_random_pseudostar_is_deterministic():
    spec = RandomSpec(n=8, k=5, seed=42)
    assert labeled_equal(random_pseudostar(spec), random_pseudostar(spec))


def test_random_pseudostar_four_leaves_is_star():
    for seed in range(10):
        assert random_pseudostar(RandomSpec(n=4, k=3, seed=seed)).split_encoding() == ()


def test_random_spec_validation():
    with pytest.raises(InfeasibleSpecError):
        random_pseudostar(RandomSpec(n=6, k=2, seed=0))
    with pytest.raises(InfeasibleSpecError):
        random_pseudostar(RandomSpec(n=6, k=6, seed=0))
    with pytest.raises(InfeasibleSpecError):
        random_pseudostar(RandomSpec(n=6, k=4, seed=0, weight_bounds=(Fraction(1, 3), Fraction(2, 3))))


def test_random_spec_from_config():
    spec = RandomSpec.from_config(7, 4, 1, positive=False)
    assert spec.weight_bounds == (Fraction(1), Fraction(10))
    assert not spec.positive


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=4, max_value=10),
       st.data())
def test_random_pseudostar_properties(seed, n, data):
    k = data.draw(st.integers(min_value=3, max_value=n - 1))
    positive = data.draw(st.booleans())
    p = random_pseudostar(RandomSpec(n=n, k=k, seed=seed, positive=positive))
    assert p.leaves == tuple(range(1, n + 1))
    assert p.is_essential()
    assert p.is_pseudostar(k)
    assert p.is_internal_nonzero()
    if positive:
        assert p.is_positive()


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=9))
def test_naive_and_split_steiner_agree(seed, n):
    t = random_tree(RandomSpec(n=n, k=3, seed=seed, positive=False, denominator=4))
    for subset in [(1, n), tuple(range(1, n + 1)), tuple(range(2, n, 2)) or (2,)]:
        assert brute_force_steiner(t, subset) == steiner_weight(t, subset)


def test_realizations_of_star_family():
    d = k_vector(small_star(), 3)
    realizations = brute_force_realizations(d, positive_only=True)
    assert all(verify_realization(r.tree, d)[0] for r in realizations)
    essential = [r for r in realizations if r.tree.is_internal_nonzero()]
    assert any(labeled_equal(r.tree, small_star()) for r in essential)


def test_parametric_realization_gets_positive_point():
    d = k_vector(star_tree({label: label for label in range(1, 7)}), 4)
    realizations = brute_force_realizations(
        d, positive_only=True, topology_filter=lambda t: t.split_encoding() == ((1, 2, 3),))
    assert len(realizations) == 1
    realization = realizations[0]
    assert realization.free_dimension == 1
    assert realization.tree.is_positive()
    assert vectors_equal(k_vector(realization.tree, 4), d)


def test_pseudostar_topologies_give_unique_realization():
    p = random_pseudostar(RandomSpec(n=6, k=4, seed=7))
    d = k_vector(p, 4)
    realizations = brute_force_realizations(d, topology_filter=pseudostar_filter(4))
    essential = [r for r in realizations if r.tree.is_internal_nonzero()]
    assert len(essential) == 1
    assert labeled_equal(essential[0].tree, p)
    assert essential[0].free_dimension == 0


@pytest.mark.parametrize("delta", [0, Fraction(1, 7)])
def test_float_screen_keeps_every_solvable_topology(delta):
    t = random_tree(RandomSpec(n=5, k=3, seed=4, positive=False, denominator=3))
    d = k_vector(t, 3).perturbed((1, 2, 3), delta)
    exact = {topo.split_encoding() for topo in enumerate_topologies(5)
             if _realize_on(topo, d, positive_only=False) is not None}
    assert {r.encoding for r in brute_force_realizations(d)} == exact


def test_example_family_realized_on_both_example_topologies():
    d = k_vector(right_tree(), 5)
    wanted = {left_tree().split_encoding(), right_tree().split_encoding()}
    realizations = brute_force_realizations(
        d, positive_only=True, topology_filter=lambda t: t.split_encoding() in wanted)
    assert len(realizations) == 2
    by_dimension = {r.free_dimension: r.tree for r in realizations}
    assert labeled_equal(by_dimension[0], right_tree())
    assert 45 < by_dimension[1].total_weight() < 66


def test_signed_realization():
    d = k_vector(left_tree(), 5)
    up = signed_realization(left_tree(), (13, 14), 5, 5)
    assert up.total_weight() == 57
    assert vectors_equal(k_vector(up, 5), d)
    down = signed_realization(left_tree(), (13, 14), -10 ** 7, 5)
    assert down.total_weight() > 10 ** 6
    assert vectors_equal(k_vector(down, 5), d)
    with pytest.raises(NotIoEligibleError):
        signed_realization(right_tree(), (9, 13), 1, 5)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
