# -*- coding: utf-8 -*-
"""
暴力预言机 - 其他模块测试的独立参照

朴素 Steiner 权重（显式路径并集）、随机伪星树生成、本质拓扑穷举、
以及在每个拓扑上精确解线性方程组求所有实现。
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from typing import Callable, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from src.core.dissimilarity import KDissimilarity
from src.core.errors import BadSubsetError, InfeasibleSpecError, NotIoEligibleError, TooLargeError
from src.core.transforms import OiInsertion, io_eligible_edges, k_oi
from src.core.tree_core import Edge, Topology, WeightedTree, label_mask, normalize_edge
from src.core.weight_range import find_oi_insertion
from src.utils.config_manager import get_config_manager
from src.utils.parallel import parallel_map
from src.utils.rational_linalg import solve_exact

logger = logging.getLogger(__name__)


def brute_force_steiner(t: WeightedTree, subset: Iterable[int]) -> Fraction:
    """
    朴素 Steiner 权重：子集内两两叶子路径的边并集之权重和

    与 dissimilarity.steiner_weight 的划分求和法互为独立校验。
    """
    labels = sorted(set(subset))
    if not labels or not set(labels) <= set(t.leaves):
        raise BadSubsetError(f"子集 {labels} 不在树的叶集中")
    graph = t.graph
    used = set()
    anchor = t.leaf_vertex(labels[0])
    for label in labels[1:]:
        path = nx.shortest_path(graph, anchor, t.leaf_vertex(label))
        used.update(normalize_edge(u, v) for u, v in zip(path, path[1:]))
    # 以第一个叶子为锚点的路径并集已覆盖两两路径的并集
    return sum((t.weight(e) for e in used), Fraction(0))


# ----------------------------------------------------------------------
# 随机生成
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RandomSpec:
    """
    随机树参数

    Attributes:
        n, k: 叶子数与参数 k（3 ≤ k ≤ n-1）
        seed: 随机种子
        weight_bounds: 边权绝对值范围（含端点）
        denominator: 权重网格的分母
        positive: True 时所有边权为正；否则内部边随机取符号
        node_attach_probability: 新叶子直接挂在已有节点上的概率
    """
    n: int
    k: int
    seed: int = 0
    weight_bounds: Tuple[Fraction, Fraction] = (Fraction(1), Fraction(10))
    denominator: int = 1
    positive: bool = True
    node_attach_probability: float = 0.3

    @classmethod
    def from_config(cls, n: int, k: int, seed: int, config_manager=None, **overrides) -> "RandomSpec":
        config = (config_manager or get_config_manager()).get_random_config()
        low, high = config.get("weight_bounds", (1, 10))
        values = dict(
            weight_bounds=(Fraction(low), Fraction(high)),
            denominator=config.get("denominator", 1),
            positive=config.get("positive", True),
            node_attach_probability=config.get("node_attach_probability", 0.3),
        )
        values.update(overrides)
        return cls(n=n, k=k, seed=seed, **values)


def _weight_grid(spec: RandomSpec, nonzero: bool) -> List[Fraction]:
    low, high = (Fraction(b) for b in spec.weight_bounds)
    den = spec.denominator
    start, stop = math.ceil(low * den), math.floor(high * den)
    grid = [Fraction(i, den) for i in range(start, stop + 1)]
    if nonzero or spec.positive:
        grid = [w for w in grid if w != 0]
    if spec.positive:
        grid = [w for w in grid if w > 0]
    return grid


def _random_shape(spec: RandomSpec, rng: np.random.Generator) -> Topology:
    """随机插入叶子；以一定概率挂在已有内部顶点上形成多叉"""
    order = [int(x) + 1 for x in rng.permutation(spec.n)]
    center = spec.n + 1
    next_id = center + 1
    edges = [(order[0], center), (order[1], center), (order[2], center)]
    internal = [center]
    for label in order[3:]:
        if rng.random() < spec.node_attach_probability:
            edges.append((label, internal[int(rng.integers(len(internal)))]))
            continue
        u, v = edges.pop(int(rng.integers(len(edges))))
        w = next_id
        next_id += 1
        internal.append(w)
        edges.extend([(u, w), (w, v), (label, w)])
    return Topology(edges, {label: label for label in range(1, spec.n + 1)})


def _assign_weights(topo: Topology, spec: RandomSpec, rng: np.random.Generator) -> WeightedTree:
    twig_grid = _weight_grid(spec, nonzero=False)
    internal_grid = _weight_grid(spec, nonzero=True)
    if not twig_grid or not internal_grid:
        raise InfeasibleSpecError(f"权重范围 {spec.weight_bounds} 内没有可用的权重")
    internal = set(topo.internal_edges())
    weights = {}
    for e in topo.edges:
        if e in internal:
            w = internal_grid[int(rng.integers(len(internal_grid)))]
            if not spec.positive and rng.random() < 0.5:
                w = -w
        else:
            w = twig_grid[int(rng.integers(len(twig_grid)))]
        weights[e] = w
    return topo.with_weights(weights)


def _check_spec(spec: RandomSpec):
    if not (3 <= spec.k <= spec.n - 1):
        raise InfeasibleSpecError(f"要求 3 ≤ k ≤ n-1，当前 n={spec.n}, k={spec.k}")
    if spec.denominator < 1:
        raise InfeasibleSpecError("权重分母必须为正整数")


def random_tree(spec: RandomSpec) -> WeightedTree:
    """随机本质、内部边非零的树（不强制为伪星树）"""
    _check_spec(spec)
    rng = np.random.default_rng(spec.seed)
    return _assign_weights(_random_shape(spec, rng), spec, rng)


def random_pseudostar(spec: RandomSpec) -> WeightedTree:
    """
    随机 (n,k) 型本质、内部边非零的伪星树

    生成方式：随机插入叶子得到形状，再随机收缩两侧叶子数都 < k 的边直到成为伪星树，
    最后从权重网格中取权。同一 seed 结果相同。
    """
    _check_spec(spec)
    rng = np.random.default_rng(spec.seed)
    shape = _random_shape(spec, rng)
    tree = shape.with_weights({e: 1 for e in shape.edges})
    while True:
        eligible = io_eligible_edges(tree, spec.k)
        if not eligible:
            break
        tree = tree.contract_edge(eligible[int(rng.integers(len(eligible)))])
    return _assign_weights(tree.topology(), spec, rng)


# ----------------------------------------------------------------------
# 拓扑穷举
# ----------------------------------------------------------------------

def _relabel(edges: List[Edge], n: int) -> Topology:
    inner = sorted({v for e in edges for v in e if v < 0}, reverse=True)
    mapping = {v: n + 1 + i for i, v in enumerate(inner)}
    return Topology([(mapping.get(u, u), mapping.get(v, v)) for u, v in edges],
                    {label: label for label in range(1, n + 1)}, validate=False)


@lru_cache(maxsize=None)
def _raw_topologies(n: int) -> Tuple[Tuple[Edge, ...], ...]:
    """叶顶点编号即标签，内部顶点编号为负数"""
    if n == 2:
        return (((1, 2),),)
    if n == 3:
        return (((1, -1), (2, -1), (3, -1)),)
    result = []
    for edges in _raw_topologies(n - 1):
        inner = sorted({v for e in edges for v in e if v < 0})
        fresh = min(inner) - 1
        for vertex in inner:
            result.append(edges + ((n, vertex),))
        for index, (u, v) in enumerate(edges):
            rest = edges[:index] + edges[index + 1:]
            result.append(rest + ((u, fresh), (fresh, v), (n, fresh)))
    return tuple(result)


@lru_cache(maxsize=None)
def _cached_topologies(n: int) -> Tuple[Topology, ...]:
    seen = {}
    for edges in _raw_topologies(n):
        topo = _relabel(list(edges), n)
        encoding = topo.split_encoding()
        if encoding in seen:
            raise AssertionError(f"拓扑重复: {encoding}")
        seen[encoding] = topo
    return tuple(seen[key] for key in sorted(seen))


def enumerate_topologies(n: int, config_manager=None) -> List[Topology]:
    """
    [n] 上全部本质叶标记拓扑，按规范编码排序

    Args:
        n: 叶子数（2 ≤ n ≤ 上限，默认上限 9）
    """
    cap = (config_manager or get_config_manager()).get("ORACLE", "max_enumeration_leaves", 9)
    if n > cap:
        raise TooLargeError(f"n={n} 超过穷举上限 {cap}")
    if n < 2:
        raise BadSubsetError("至少需要两个叶子")
    topologies = list(_cached_topologies(n))
    logger.debug("✓ n=%d 共 %d 个本质拓扑", n, len(topologies))
    return topologies


@lru_cache(maxsize=None)
def _split_columns(n: int) -> Tuple[np.ndarray, Tuple[Tuple[int, ...], ...]]:
    """
    全部拓扑共用的划分表

    Returns:
        (划分掩码数组, 每个拓扑用到的列号)；掩码取不含叶 1 的一侧
    """
    full = label_mask(range(1, n + 1))
    index = {}
    per_topology = []
    for topo in _cached_topologies(n):
        sides = [(label,) for label in range(1, n + 1)] + list(topo.split_encoding())
        ids = []
        for side in sides:
            mask = label_mask(side)
            if mask & label_mask([1]):
                mask = full ^ mask
            ids.append(index.setdefault(mask, len(index)))
        per_topology.append(tuple(ids))
    return np.array(list(index), dtype=np.int64), tuple(per_topology)


def _float_consistent(d: KDissimilarity, candidates: List[int], block: int = 4096,
                      tolerance: float = 1e-8) -> List[int]:
    """
    浮点预筛：返回方程组在浮点意义下相容的拓扑下标

    只排除明显无解的拓扑，留下的仍由 _realize_on 精确确认。
    残差由奇异向量投影得到，不做除法。
    """
    masks, columns = _split_columns(d.n)
    full = label_mask(d.labels)
    subsets = np.array([label_mask(s) for s in d.subsets()], dtype=np.int64)
    incidence = (((subsets[:, None] & masks[None, :]) != 0)
                 & ((subsets[:, None] & (full ^ masks)[None, :]) != 0)).astype(float)
    rhs = np.array([float(v) for v in d.values()])
    limit = tolerance * (1.0 + np.abs(rhs).max())

    groups = {}
    for i in candidates:
        groups.setdefault(len(columns[i]), []).append(i)
    kept = []
    for members in groups.values():
        for start in range(0, len(members), block):
            chunk = members[start:start + block]
            a = incidence[:, np.array([columns[i] for i in chunk])].transpose(1, 0, 2)
            u, s, _ = np.linalg.svd(a, full_matrices=False)
            rank_mask = s > 1e-9 * s[:, :1]
            coeff = np.einsum("tme,m->te", u, rhs) * rank_mask
            residual = np.abs(np.einsum("tme,te->tm", u, coeff) - rhs).max(axis=1)
            kept.extend(i for i, r in zip(chunk, residual) if r <= limit)
    return sorted(kept)


# ----------------------------------------------------------------------
# 实现求解
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Realization:
    """
    某个拓扑上的实现

    Attributes:
        tree: 一个实现（参数族时为一个样本点）
        encoding: 拓扑的规范编码
        free_dimension: 解空间维数（0 表示该拓扑上唯一）
    """
    tree: WeightedTree
    encoding: Tuple[Tuple[int, ...], ...]
    free_dimension: int = 0


def _positive_point(solution, tolerance=1e-9) -> Optional[List[Fraction]]:
    """在参数族中找一个所有分量严格为正的点；找不到返回 None"""
    base = np.array([float(x) for x in solution.values])
    basis = np.array([[float(x) for x in v] for v in solution.null_basis]).T
    dim = basis.shape[1]
    # 变量 (f, t)：最大化 t，约束 base + basis·f ≥ t
    cost = np.zeros(dim + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([-basis, np.ones((len(base), 1))])
    bounds = [(-1e6, 1e6)] * dim + [(None, 1.0)]
    result = linprog(cost, A_ub=a_ub, b_ub=base, bounds=bounds, method="highs")
    if not result.success or result.x[-1] <= tolerance:
        return None
    for limit in (10 ** 3, 10 ** 6, 10 ** 9):
        params = [Fraction(float(f)).limit_denominator(limit) for f in result.x[:-1]]
        point = solution.point(params)
        if all(x > 0 for x in point):
            return point
    return None


def _realize_on(topo: Topology, d: KDissimilarity, positive_only: bool) -> Optional[Realization]:
    masks = [(mask_u, mask_v) for _, mask_u, mask_v in topo.split_masks()]
    rows, rhs = [], []
    for subset, value in d.items():
        mask = label_mask(subset)
        rows.append([1 if (mask & mu and mask & mv) else 0 for mu, mv in masks])
        rhs.append(value)
    solution = solve_exact(rows, rhs)
    if solution is None:
        return None

    point = solution.values
    if positive_only and not all(x > 0 for x in point):
        if solution.free_dimension == 0:
            return None
        point = _positive_point(solution)
        if point is None:
            return None
    tree = topo.with_weights(dict(zip(topo.edges, point)))
    return Realization(tree, topo.split_encoding(), solution.free_dimension)


def brute_force_realizations(d: KDissimilarity, positive_only: bool = False,
                             topology_filter: Optional[Callable[[Topology], bool]] = None,
                             config_manager=None) -> List[Realization]:
    """
    在每个本质拓扑上精确解 {D_I(T,w) = d[I]}

    Args:
        d: 差异度族
        positive_only: 只保留正权实现
        topology_filter: 可选的拓扑过滤（例如只看 (n,k) 型伪星拓扑）

    Returns:
        按拓扑规范编码排序的实现列表，每个有解的拓扑一个
    """
    topologies = enumerate_topologies(d.n, config_manager)
    candidates = [i for i, topo in enumerate(topologies)
                  if topology_filter is None or topology_filter(topo)]
    consistent = _float_consistent(d, candidates)
    logger.debug("浮点预筛: %d / %d 个拓扑相容", len(consistent), len(candidates))
    solved = parallel_map(partial(_realize_on, d=d, positive_only=positive_only),
                          [topologies[i] for i in consistent],
                          desc="拓扑求解", config_manager=config_manager)
    realizations = [r for r in solved if r is not None]
    logger.info("✓ %d 个拓扑中 %d 个有实现", len(candidates), len(realizations))
    return realizations


def pseudostar_filter(k: int) -> Callable[[Topology], bool]:
    return partial(_is_pseudostar_topology, k=k)


def _is_pseudostar_topology(topo: Topology, k: int) -> bool:
    return topo.is_pseudostar(k)


# ----------------------------------------------------------------------
# OI 采样
# ----------------------------------------------------------------------

def sample_oi_realization(p: WeightedTree, k: int, y, insertion: Optional[OiInsertion] = None,
                          require_positive: bool = True) -> WeightedTree:
    """对伪星树做一次 k-OI，得到另一个实现"""
    insertion = insertion or find_oi_insertion(p, k)
    if insertion is None:
        raise InfeasibleSpecError("该伪星树不允许 k-OI 插入")
    insertion = OiInsertion(insertion.at_vertex, insertion.branch_bipartition, Fraction(y))
    return k_oi(p, insertion, k, require_positive=require_positive)


def signed_realization(t: WeightedTree, e: Edge, z, k: int) -> WeightedTree:
    """
    一般权重下的平移：边 e（两侧叶子数都 < k）加 z，每个叶枝减 z/k

    k-差异度不变，总权重变化 −(n−k)/k · z。
    """
    if e not in io_eligible_edges(t, k):
        raise NotIoEligibleError(f"边 {e} 的两侧叶子数并非都 < k={k}")
    z = Fraction(z)
    weights = t.edge_weights
    weights[normalize_edge(*e)] += z
    for label in t.leaves:
        leaf_edge = t.leaf_edge(label)
        weights[leaf_edge] -= z / k
    return WeightedTree(weights, t.leaf_labels, validate=False)
