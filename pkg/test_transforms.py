#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试 k-IO / k-OI 变换与伪星范式
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from example_trees import caterpillar_six, left_tree, right_tree
from src.core.dissimilarity import k_vector, vectors_equal
from src.core.errors import (
    BadInsertionError,
    BadKError,
    NegativeTwigError,
    NotIoEligibleError,
)
from src.core.oracle import RandomSpec, random_pseudostar, random_tree
from src.core.transforms import (
    OiInsertion,
    contract_zero_internal,
    find_insertion,
    io_eligible_edges,
    k_io,
    k_oi,
    pseudostar_normal_form,
)
from src.core.tree_core import labeled_equal


def test_io_on_central_edge_gives_right_tree():
    t = k_io(left_tree(), (13, 14), 5)
    assert labeled_equal(t, right_tree())
    assert t.total_weight() == 66


def test_io_rejects_large_side():
    with pytest.raises(NotIoEligibleError):
        k_io(right_tree(), (9, 13), 5)


def test_io_eligible_edges_order():
    assert io_eligible_edges(left_tree(), 5) == [(13, 14)]
    assert io_eligible_edges(right_tree(), 5) == []
    # 六叶毛毛虫在 k=5 时三条内部边都可收缩，按较小侧的大小再按余字典序排列
    t = caterpillar_six()
    assert io_eligible_edges(t, 5) == [(7, 8), (9, 10), (8, 9)]
    assert io_eligible_edges(t, 4) == [(8, 9)]


def test_oi_inverts_io():
    p = right_tree()
    insertion = find_insertion(p, {5, 6, 7, 8}, 10)
    t = k_oi(p, insertion, 5, require_positive=True)
    assert labeled_equal(t, left_tree())


def test_oi_negative_twig():
    p = right_tree()
    insertion = find_insertion(p, {5, 6, 7, 8}, 35)
    with pytest.raises(NegativeTwigError):
        k_oi(p, insertion, 5, require_positive=True)
    # 不要求正权时允许非正叶枝
    t = k_oi(p, insertion, 5)
    assert t.weight(t.leaf_edge(7)) == 0


def test_oi_rejects_bad_blocks():
    p = right_tree()
    with pytest.raises(BadInsertionError):
        k_oi(p, OiInsertion(13, (frozenset({9}), frozenset({10, 11, 12})), Fraction(1)), 5)
    with pytest.raises(BadInsertionError):
        k_oi(p, OiInsertion(13, (frozenset({9, 10}), frozenset({11})), Fraction(1)), 5)
    with pytest.raises(BadInsertionError):
        k_oi(p, OiInsertion(13, (frozenset({9, 10}), frozenset({11, 12})), Fraction(-1)), 5,
             require_positive=True)
    with pytest.raises(BadInsertionError):
        k_oi(p, OiInsertion(9, (frozenset({1}), frozenset({2, 13})), Fraction(1)), 5)


def test_find_insertion_unknown_side():
    with pytest.raises(BadInsertionError):
        find_insertion(right_tree(), {1, 3}, 1)


def test_contract_zero_internal():
    t = left_tree().reweighted({(13, 14): 0})
    contracted = contract_zero_internal(t)
    assert len(contracted.edges) == len(t.edges) - 1
    assert contracted.total_weight() == t.total_weight()


def test_normal_form_of_left_tree():
    assert labeled_equal(pseudostar_normal_form(left_tree(), 5), right_tree())
    assert labeled_equal(pseudostar_normal_form(right_tree(), 5), right_tree())


def test_normal_form_rejects_bad_k():
    with pytest.raises(BadKError):
        pseudostar_normal_form(right_tree(), 2)
    with pytest.raises(BadKError):
        pseudostar_normal_form(right_tree(), 8)


def test_normal_form_contracts_zero_internal_edges():
    t = left_tree().reweighted({(9, 13): 0})
    p = pseudostar_normal_form(t, 5)
    assert p.is_essential()
    assert p.is_pseudostar(5)
    assert p.is_internal_nonzero()
    assert p.total_weight() == 65
    assert vectors_equal(k_vector(p, 5), k_vector(t, 5))


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=5, max_value=8),
       st.data())
def test_io_preserves_k_vector_and_normal_form_is_confluent(seed, n, data):
    k = data.draw(st.integers(min_value=3, max_value=n - 1))
    t = random_tree(RandomSpec(n=n, k=k, seed=seed, positive=False))
    d = k_vector(t, k)
    for e in io_eligible_edges(t, k):
        assert vectors_equal(k_vector(k_io(t, e, k), k), d)
    forward = pseudostar_normal_form(t, k)
    backward = pseudostar_normal_form(t, k, reverse=True)
    assert labeled_equal(forward, backward)
    assert vectors_equal(k_vector(forward, k), d)
    assert forward.is_pseudostar(k)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=9),
       st.booleans(), st.data())
def test_normal_form_is_idempotent(seed, n, positive, data):
    k = data.draw(st.integers(min_value=3, max_value=n - 1))
    t = random_tree(RandomSpec(n=n, k=k, seed=seed, positive=positive))
    once = pseudostar_normal_form(t, k)
    twice = pseudostar_normal_form(once, k)
    assert labeled_equal(once, twice)
    assert io_eligible_edges(once, k) == []
    p = random_pseudostar(RandomSpec(n=n, k=k, seed=seed, positive=positive))
    assert labeled_equal(pseudostar_normal_form(p, k), p)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
