# -*- coding: utf-8 -*-
"""
k-权重与 k-差异度族

D_I(T) 为张成叶集 I 的最小子树的总权重。计算采用划分求和：
一条边对 D_I 有贡献当且仅当它的两侧都含有 I 中的叶子。
"""
import logging
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from src.core.errors import (
    BadKError,
    BadLabelingError,
    BadSubsetError,
    MissingSubsetError,
    ShapeMismatchError,
)
from src.core.tree_core import Topology, WeightedTree, label_mask
from src.utils.combinatorics import colex_rank, colex_subsets
from src.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

KSubset = Tuple[int, ...]


class KDissimilarity:
    """
    k-差异度族 {D_I}：[n] 的每个 k 子集对应一个有理数

    值按余字典序存放，便于 O(1) 定位。

    Args:
        n: 叶子数
        k: 子集大小
        values: 按余字典序排列的 C(n,k) 个值
    """

    def __init__(self, n: int, k: int, values: Sequence[object]):
        if n < 2 or not (1 <= k <= n):
            raise BadKError(f"不合法的 (n, k) = ({n}, {k})")
        expected = comb(n, k)
        if len(values) != expected:
            raise MissingSubsetError(f"需要 {expected} 个值，实际 {len(values)} 个")
        self.n = n
        self.k = k
        self._values: List[Fraction] = [
            v if isinstance(v, Fraction) else Fraction(v) for v in values
        ]

    @classmethod
    def from_mapping(cls, n: int, k: int, mapping: Mapping[Iterable[int], object]) -> "KDissimilarity":
        """从 子集 → 值 的映射构造；必须恰好覆盖全部 k 子集"""
        values: List[Optional[object]] = [None] * comb(n, k)
        for subset, value in mapping.items():
            key = _check_subset(subset, n, k)
            values[colex_rank(key)] = value
        if any(v is None for v in values):
            missing = next(s for s in colex_subsets(range(1, n + 1), k)
                           if values[colex_rank(s)] is None)
            raise MissingSubsetError(f"缺少子集 {missing}")
        return cls(n, k, values)

    @property
    def labels(self) -> range:
        return range(1, self.n + 1)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, subset: Iterable[int]) -> Fraction:
        return self._values[colex_rank(_check_subset(subset, self.n, self.k))]

    def value(self, *labels: int) -> Fraction:
        """D_{labels}，标签可任意顺序"""
        return self[labels]

    def subsets(self) -> Iterator[KSubset]:
        return colex_subsets(self.labels, self.k)

    def items(self) -> Iterator[Tuple[KSubset, Fraction]]:
        return zip(self.subsets(), self._values)

    def values(self) -> List[Fraction]:
        return list(self._values)

    def perturbed(self, subset: Iterable[int], delta) -> "KDissimilarity":
        """把一个子集的值加上 delta 后的新族"""
        values = list(self._values)
        values[colex_rank(_check_subset(subset, self.n, self.k))] += Fraction(delta)
        return KDissimilarity(self.n, self.k, values)

    def __repr__(self):
        return f"KDissimilarity(n={self.n}, k={self.k})"


def _check_subset(subset: Iterable[int], n: int, k: int) -> KSubset:
    key = tuple(sorted(subset))
    if len(key) != k or len(set(key)) != k:
        raise BadSubsetError(f"子集 {key} 不是 {k} 个不同的叶子")
    if key[0] < 1 or key[-1] > n:
        raise BadSubsetError(f"子集 {key} 超出 [1, {n}]")
    return key


class SteinerEvaluator:
    """
    预处理一棵树的划分掩码，之后每个子集 O(|E|) 求 D_I

    实例可被 pickle，供进程池使用。
    """

    def __init__(self, t: WeightedTree):
        self.leaves = frozenset(t.leaves)
        weights = t.edge_weights
        self.masks = [(mask_u, mask_v, weights[e]) for e, mask_u, mask_v in t.split_masks()]

    def __call__(self, subset: Iterable[int]) -> Fraction:
        subset = tuple(subset)
        unknown = set(subset) - self.leaves
        if not subset or unknown:
            raise BadSubsetError(f"子集 {subset} 不在树的叶集中")
        mask = label_mask(subset)
        total = Fraction(0)
        for mask_u, mask_v, weight in self.masks:
            if mask & mask_u and mask & mask_v:
                total += weight
        return total


def steiner_weight(t: WeightedTree, subset: Iterable[int]) -> Fraction:
    """
    D_I(t)：张成 subset 的最小子树的总权重

    Args:
        t: 带权树
        subset: 叶标签集合

    Returns:
        精确有理数
    """
    return SteinerEvaluator(t)(subset)


def _require_standard_labels(t: Topology):
    if t.leaves != tuple(range(1, t.n + 1)):
        raise BadLabelingError(f"叶标签必须恰为 1..{t.n}")


def k_vector(t: WeightedTree, k: int, config_manager=None) -> KDissimilarity:
    """
    计算树的完整 k-差异度向量

    Args:
        t: 叶标签为 1..n 的带权树
        k: 2 ≤ k ≤ n-1
        config_manager: 配置管理器（并行参数）

    Returns:
        KDissimilarity，值按余字典序排列
    """
    _require_standard_labels(t)
    if not (2 <= k <= t.n - 1):
        raise BadKError(f"k 必须满足 2 ≤ k ≤ n-1，当前 n={t.n}, k={k}")
    subsets = list(colex_subsets(t.leaves, k))
    values = parallel_map(SteinerEvaluator(t), subsets, desc=f"{k}-权重",
                          config_manager=config_manager)
    logger.debug("✓ 计算 %d 个 %d-权重", len(values), k)
    return KDissimilarity(t.n, k, values)


def _require_same_shape(a: KDissimilarity, b: KDissimilarity):
    if (a.n, a.k) != (b.n, b.k):
        raise ShapeMismatchError(f"形状不一致: (n,k)=({a.n},{a.k}) 与 ({b.n},{b.k})")


def first_mismatch(a: KDissimilarity, b: KDissimilarity) -> Optional[KSubset]:
    """余字典序中第一个取值不同的子集；完全相同时返回 None"""
    _require_same_shape(a, b)
    for (subset, x), y in zip(a.items(), b.values()):
        if x != y:
            return subset
    return None


def vectors_equal(a: KDissimilarity, b: KDissimilarity) -> bool:
    return first_mismatch(a, b) is None
