# -*- coding: utf-8 -*-
"""
k-IO / k-OI 变换与伪星范式

k-IO：收缩一条两侧叶子数都 < k 的边（权重 y），每个叶枝加 y/k。
k-OI：其逆运算。两者都不改变 k-差异度向量。
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Tuple

from src.core.errors import (
    BadInsertionError,
    BadKError,
    NegativeTwigError,
    NotIoEligibleError,
)
from src.core.tree_core import Edge, WeightedTree
from src.utils.combinatorics import colex_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OiInsertion:
    """
    k-OI 插入点

    Attributes:
        at_vertex: 插入位置的顶点
        branch_bipartition: at_vertex 的邻居分成两块；第二块改挂到新顶点上
        new_edge_weight: 新边权重 y
    """
    at_vertex: int
    branch_bipartition: Tuple[FrozenSet[int], FrozenSet[int]]
    new_edge_weight: Fraction

    def leaf_blocks(self, t: WeightedTree) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        """两块分支各自携带的叶集"""
        return tuple(
            frozenset().union(*(t.side(self.at_vertex, w) for w in block))
            for block in self.branch_bipartition
        )


def _twig_increment(t: WeightedTree, delta: Fraction) -> WeightedTree:
    weights = t.edge_weights
    for label in t.leaves:
        e = t.leaf_edge(label)
        weights[e] = weights[e] + delta
    return WeightedTree(weights, t.leaf_labels, validate=False)


def io_eligible_edges(t: WeightedTree, k: int) -> List[Edge]:
    """两侧叶子数都 < k 的边，按（较小侧大小，较小侧余字典序）排序"""
    eligible = []
    for e, split in t.splits().items():
        if len(split.side_a) < k and len(split.side_b) < k:
            smaller = split.smaller_side()
            eligible.append(((len(smaller), colex_key(smaller)), e))
    return [e for _, e in sorted(eligible)]


def k_io(t: WeightedTree, e: Edge, k: int) -> WeightedTree:
    """
    k-IO 变换

    Args:
        t: 带权树
        e: 两侧叶子数都小于 k 的边
        k: 参数 k

    Returns:
        收缩 e 并给每个叶枝加 w(e)/k 后的树
    """
    split = t.edge_split(e)
    if len(split.side_a) >= k or len(split.side_b) >= k:
        raise NotIoEligibleError(
            f"边 {e} 的划分 {len(split.side_a)}|{len(split.side_b)} 有一侧叶子数 ≥ k={k}")
    y = t.weight(e)
    return _twig_increment(t.contract_edge(e), y / k)


def k_oi(t: WeightedTree, ins: OiInsertion, k: int, require_positive: bool = False) -> WeightedTree:
    """
    k-OI 变换：在 ins.at_vertex 处插入权重为 y 的内部边，每个叶枝减 y/k

    Args:
        t: 带权树
        ins: 插入点
        k: 参数 k
        require_positive: 要求结果所有边权为正

    Returns:
        新树
    """
    vertex = ins.at_vertex
    first, second = (frozenset(b) for b in ins.branch_bipartition)
    neighbors = frozenset(t.neighbors(vertex)) if vertex in t.vertices else frozenset()
    if not first or not second or first & second or first | second != neighbors:
        raise BadInsertionError(f"分块不是顶点 {vertex} 的邻居的二划分")
    for block in ins.leaf_blocks(t):
        if len(block) >= k:
            raise BadInsertionError(f"分块携带 {len(block)} 个叶子，不小于 k={k}")

    y = Fraction(ins.new_edge_weight)
    if require_positive and y <= 0:
        raise BadInsertionError("正权模式要求新边权重 y > 0")

    inserted, new_edge = t.insert_edge(vertex, second, y)
    if new_edge in inserted.twig_edges():
        raise BadInsertionError("新边位于叶枝上，不是内部边")

    result = _twig_increment(inserted, -y / k)
    if require_positive:
        for label in result.leaves:
            if result.weight(result.leaf_edge(label)) <= 0:
                raise NegativeTwigError(f"叶子 {label} 的叶枝权重将变为非正")
    return result


def find_insertion(t: WeightedTree, side, y) -> OiInsertion:
    """
    找到能把 side 与其补集分开的插入点

    优先选择两块各含 ≥ 2 个分支的顶点（插入后仍为本质树）。
    """
    side = frozenset(side)
    fallback = None
    for vertex in t.internal_vertices():
        branches = t.branches(vertex)
        inside = frozenset(w for w, leaves in branches.items() if leaves <= side)
        outside = frozenset(branches) - inside
        if not inside or not outside:
            continue
        if frozenset().union(*(branches[w] for w in inside)) != side:
            continue
        insertion = OiInsertion(vertex, (outside, inside), Fraction(y))
        if len(inside) >= 2 and len(outside) >= 2:
            return insertion
        fallback = fallback or insertion
    if fallback is None:
        raise BadInsertionError(f"没有顶点能分出叶集 {sorted(side)}")
    return fallback


def contract_zero_internal(t: WeightedTree) -> WeightedTree:
    """收缩所有权重恰为0的内部边"""
    while True:
        zero = [e for e in t.internal_edges() if t.weight(e) == 0]
        if not zero:
            return t
        t = t.contract_edge(zero[0])


def pseudostar_normal_form(t: WeightedTree, k: int, reverse: bool = False) -> WeightedTree:
    """
    伪星范式

    反复本质化、收缩零权内部边、对可 IO 的边做 k-IO，直到没有可 IO 的边。
    结果与处理顺序无关；reverse 按相反顺序处理可 IO 的边。

    Args:
        t: 带权树
        k: 3 ≤ k ≤ n-1
        reverse: 是否逆序处理

    Returns:
        (n,k) 型本质、内部边非零的伪星树
    """
    if not (3 <= k <= t.n - 1):
        raise BadKError(f"要求 3 ≤ k ≤ n-1，当前 n={t.n}, k={k}")
    steps = 0
    while True:
        t = contract_zero_internal(t.essentialize())
        eligible = io_eligible_edges(t, k)
        if not eligible:
            break
        e = eligible[-1] if reverse else eligible[0]
        logger.debug("%d-IO: 边 %s, 划分 %s", k, e, sorted(t.edge_split(e).smaller_side()))
        t = k_io(t, e, k)
        steps += 1
    logger.debug("✓ 伪星范式: %d 次 IO", steps)
    return t
