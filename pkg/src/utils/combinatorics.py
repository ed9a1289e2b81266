# -*- coding: utf-8 -*-
"""
k 子集的余字典序（colex）枚举、排名与反排名
"""
from math import comb
from typing import Iterable, Iterator, Sequence, Tuple


def colex_key(subset: Sequence[int]) -> Tuple[int, ...]:
    """余字典序比较键：从最大元素开始比较"""
    return tuple(sorted(subset, reverse=True))


def colex_subsets(labels: Iterable[int], k: int) -> Iterator[Tuple[int, ...]]:
    """
    按余字典序枚举 labels 的全部 k 子集

    Args:
        labels: 叶标签（任意顺序）
        k: 子集大小

    Returns:
        升序元组的迭代器
    """
    ordered = sorted(labels)
    if k < 0 or k > len(ordered):
        return
    if k == 0:
        yield ()
        return
    # 最大元素为 ordered[top] 的子集整体排在最大元素更小的子集之后
    for top in range(k - 1, len(ordered)):
        for rest in colex_subsets(ordered[:top], k - 1):
            yield rest + (ordered[top],)


def colex_rank(subset: Sequence[int]) -> int:
    """
    标签为 1..n 的 k 子集在余字典序中的位置（从0开始）

    rank = Σ C(c_j - 1, j + 1)，c_j 为升序第 j 个元素。
    """
    return sum(comb(c - 1, j + 1) for j, c in enumerate(sorted(subset)))


def colex_unrank(rank: int, k: int) -> Tuple[int, ...]:
    """colex_rank 的逆运算，返回 1..n 上的升序 k 子集"""
    members = []
    remaining = rank
    for j in range(k, 0, -1):
        c = j - 1
        while comb(c + 1, j) <= remaining:
            c += 1
        remaining -= comb(c, j)
        members.append(c + 1)
    return tuple(reversed(members))
