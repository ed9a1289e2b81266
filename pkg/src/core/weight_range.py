# -*- coding: utf-8 -*-
"""
总权重范围

对实现同一 k-差异度族的所有（正权或一般权）树，计算总权重的上下确界及是否可达。
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Union

from src.core.dissimilarity import KDissimilarity
from src.core.errors import NotPseudostarError
from src.core.reconstruction import reconstruct
from src.core.transforms import OiInsertion
from src.core.tree_core import WeightedTree

logger = logging.getLogger(__name__)

Bound = Union[Fraction, float]
INFINITY = float("inf")


def _format_bound(value: Bound) -> str:
    if value == INFINITY:
        return "+inf"
    if value == -INFINITY:
        return "-inf"
    return str(value)


@dataclass(frozen=True)
class WeightRange:
    """
    总权重的范围（带可达标记）

    infinity 用 float('inf') 表示，其余端点为精确有理数。
    """
    supremum: Bound
    infimum: Bound
    sup_attained: bool
    inf_attained: bool
    singleton: bool

    @classmethod
    def single(cls, value: Fraction) -> "WeightRange":
        return cls(value, value, True, True, True)

    def contains(self, total: Fraction) -> bool:
        above = total > self.infimum or (self.inf_attained and total == self.infimum)
        below = total < self.supremum or (self.sup_attained and total == self.supremum)
        return above and below

    def describe(self) -> str:
        """例如 "sup=66 (attained), inf=45 (not attained)" """
        def flag(attained):
            return "attained" if attained else "not attained"

        text = (f"sup={_format_bound(self.supremum)} ({flag(self.sup_attained)}), "
                f"inf={_format_bound(self.infimum)} ({flag(self.inf_attained)})")
        return text + ", singleton" if self.singleton else text

    def __str__(self):
        return self.describe()


def find_oi_insertion(p: WeightedTree, k: int, y=0) -> Optional[OiInsertion]:
    """
    第一个可行的 k-OI 插入点：某顶点的分支二划分，两块叶子数都 < k

    两块都非空；若某块只有一个分支且是叶子，新边会落在叶枝上，跳过。
    """
    n = p.n
    for vertex in p.internal_vertices():
        branches = p.branches(vertex)
        neighbors = sorted(branches)
        sizes = {w: len(branches[w]) for w in neighbors}
        # 第一个邻居固定在第一块，枚举其余邻居的子集
        head, rest = neighbors[0], neighbors[1:]
        for r in range(0, len(rest)):
            for extra in combinations(rest, r):
                first = frozenset((head,) + extra)
                second = frozenset(neighbors) - first
                size_first = sum(sizes[w] for w in first)
                if not (n - k < size_first < k):
                    continue
                if any(len(block) == 1 and p.label_of(next(iter(block))) is not None
                       for block in (first, second)):
                    continue
                return OiInsertion(vertex, (first, second), Fraction(y))
    return None


def oi_feasible(p: WeightedTree, k: int) -> bool:
    """是否存在一个顶点，其分支能分成叶子数都 < k 的两块"""
    return find_oi_insertion(p, k) is not None


def _require_pseudostar(p: WeightedTree, k: int):
    if not (p.is_essential() and p.is_pseudostar(k)):
        raise NotPseudostarError(f"输入不是 (n,k)=({p.n},{k}) 型本质伪星树")


def range_positive(p: WeightedTree, k: int) -> WeightRange:
    """
    正权实现的总权重范围

    上确界 D_tot(p) 只由 p 达到；可做 OI 时下确界为 D_tot(p) − (n−k)·m（不可达），
    m 为 p 的最小叶枝权重；否则范围退化为单点。
    """
    _require_pseudostar(p, k)
    total = p.total_weight()
    if not oi_feasible(p, k):
        return WeightRange.single(total)
    infimum = total - (p.n - k) * p.min_twig_weight()
    return WeightRange(total, infimum, True, False, False)


def range_general(p: WeightedTree, k: int) -> WeightRange:
    """一般权重实现的总权重范围：可做 OI 时为 (−∞, +∞)，否则为单点"""
    _require_pseudostar(p, k)
    if not oi_feasible(p, k):
        return WeightRange.single(p.total_weight())
    return WeightRange(INFINITY, -INFINITY, False, False, False)


def range_of_family(d: KDissimilarity, positive: bool = True, config_manager=None) -> WeightRange:
    """先重建伪星树，再计算范围"""
    report = reconstruct(d, strict=True, config_manager=config_manager)
    p = report.tree
    if positive and not p.is_positive():
        raise NotPseudostarError("该族的伪星树不是正权树，没有正权实现")
    logger.info("✓ 伪星树总权重 %s", p.total_weight())
    return range_positive(p, d.k) if positive else range_general(p, d.k)
