#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试 k-权重计算与 k-差异度族
"""
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from example_trees import left_tree, right_tree, small_star
from src.core.dissimilarity import (
    KDissimilarity,
    first_mismatch,
    k_vector,
    steiner_weight,
    vectors_equal,
)
from src.core.errors import (
    BadKError,
    BadLabelingError,
    BadSubsetError,
    MissingSubsetError,
    ShapeMismatchError,
)
from src.core.oracle import RandomSpec, brute_force_steiner, random_tree
from src.utils.combinatorics import colex_rank, colex_subsets, colex_unrank


def test_colex_order_small():
    assert list(colex_subsets(range(1, 5), 3)) == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    assert list(colex_subsets([3, 1, 2], 2)) == [(1, 2), (1, 3), (2, 3)]


def test_colex_rank_matches_enumeration():
    for index, subset in enumerate(colex_subsets(range(1, 9), 5)):
        assert colex_rank(subset) == index
        assert colex_unrank(index, 5) == subset


def test_steiner_weight_examples():
    t = right_tree()
    assert steiner_weight(t, (1, 2, 3, 4, 5)) == 42
    assert steiner_weight(left_tree(), (1, 2, 3, 4, 5)) == 42
    assert steiner_weight(t, (1, 2)) == 15
    assert steiner_weight(t, (1,)) == 0


def test_steiner_weight_rejects_unknown_leaf():
    with pytest.raises(BadSubsetError):
        steiner_weight(right_tree(), (1, 9))


def test_star_three_weights():
    d = k_vector(small_star(), 3)
    assert d.values() == [6, 7, 8, 9]
    assert d.value(3, 1, 2) == 6
    assert d[(2, 3, 4)] == 9


def test_left_and_right_share_five_weights():
    a = k_vector(left_tree(), 5)
    b = k_vector(right_tree(), 5)
    assert len(a) == comb(8, 5)
    assert vectors_equal(a, b)
    assert first_mismatch(a, b) is None


def test_left_and_right_differ_for_other_k():
    a = k_vector(left_tree(), 4)
    b = k_vector(right_tree(), 4)
    assert not vectors_equal(a, b)
    witness = first_mismatch(a, b)
    assert a[witness] != b[witness]


def test_k_vector_rejects_bad_k_and_labels():
    with pytest.raises(BadKError):
        k_vector(right_tree(), 8)
    with pytest.raises(BadKError):
        k_vector(right_tree(), 1)
    with pytest.raises(BadLabelingError):
        k_vector(right_tree().restrict({1, 7, 8}), 2)


def test_first_mismatch_requires_same_shape():
    with pytest.raises(ShapeMismatchError):
        first_mismatch(k_vector(right_tree(), 5), k_vector(right_tree(), 4))


def test_from_mapping_requires_every_subset():
    mapping = {(1, 2, 3): 6, (1, 2, 4): 7, (1, 3, 4): 8}
    with pytest.raises(MissingSubsetError):
        KDissimilarity.from_mapping(4, 3, mapping)
    mapping[(4, 3, 2)] = 9
    assert KDissimilarity.from_mapping(4, 3, mapping).values() == [6, 7, 8, 9]


def test_subset_validation():
    d = k_vector(small_star(), 3)
    with pytest.raises(BadSubsetError):
        d[(1, 2)]
    with pytest.raises(BadSubsetError):
        d[(1, 2, 5)]
    with pytest.raises(BadSubsetError):
        d[(1, 1, 2)]


def test_perturbed():
    d = k_vector(small_star(), 3)
    p = d.perturbed((1, 2, 4), Fraction(1, 2))
    assert p.value(1, 2, 4) == Fraction(15, 2)
    assert first_mismatch(d, p) == (1, 2, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=8),
       st.integers(min_value=2, max_value=7))
def test_split_sum_agrees_with_path_union(seed, n, k):
    k = min(k, n - 1)
    t = random_tree(RandomSpec(n=n, k=3, seed=seed, positive=False, denominator=3))
    d = k_vector(t, k)
    for subset, value in d.items():
        assert value == brute_force_steiner(t, subset)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=7),
       st.integers(min_value=2, max_value=6), st.booleans())
def test_four_point_identity_with_padding(seed, n, k, positive):
    k = min(k, n - 1)
    t = random_tree(RandomSpec(n=n, k=3, seed=seed, positive=positive, denominator=2))
    d = k_vector(t, k)
    for quartet in colex_subsets(range(1, n + 1), 4):
        i, j, l, m = quartet
        pairing = t.quartet_topology(i, j, l, m)
        # 星形四元组的三种配对都满足恒等式
        pairings = [pairing] if pairing else [((i, j), (l, m)), ((i, l), (j, m)), ((i, m), (j, l))]
        others = [x for x in range(1, n + 1) if x not in quartet]
        for (a, b), (c, e) in pairings:
            for rest in colex_subsets(others, k - 2):
                assert d[(a, e) + rest] + d[(b, c) + rest] == d[(a, c) + rest] + d[(b, e) + rest]


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=9), st.data())
def test_steiner_weight_grows_with_subset(seed, n, data):
    t = random_tree(RandomSpec(n=n, k=3, seed=seed))
    big = data.draw(st.sets(st.integers(min_value=1, max_value=n), min_size=2, max_size=n))
    small = data.draw(st.sets(st.sampled_from(sorted(big)), min_size=1, max_size=len(big)))
    assert steiner_weight(t, small) <= steiner_weight(t, big)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
