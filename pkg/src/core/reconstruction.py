# -*- coding: utf-8 -*-
"""
伪星树重建模块

由 k-差异度族重建唯一的 (n,k) 型本质、内部边非零的伪星树：
邻居类 → 四元组（Buneman 指标）→ 拓扑拼装 → 内部边权 → 叶枝权重 → 精确验证。
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src.core.dissimilarity import KDissimilarity, KSubset, first_mismatch, k_vector
from src.core.errors import (
    AmbiguousError,
    BadKError,
    BadSubsetError,
    InconsistentError,
    InconsistentSystemError,
    NoValidWitnessError,
    NotTreelikeError,
    ShapeMismatchError,
)
from src.core.tree_core import (
    Edge,
    Pairing,
    Topology,
    WeightedTree,
    canonical_pairing,
    normalize_edge,
    star_tree,
)
from src.utils.combinatorics import colex_subsets
from src.utils.config_manager import get_config_manager
from src.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

Quartet = Tuple[int, int, int, int]
CherryPartition = Sequence[FrozenSet[int]]


@dataclass(frozen=True)
class QuartetResolution:
    """
    四元组的 Buneman 指标

    Attributes:
        quartet: 升序的四个叶标签
        pairing: 规范配对 ((a,b),(c,d))；None 表示星形
        reason: 判定依据（"cherries"、"witness" 或 "star"）
    """
    quartet: Quartet
    pairing: Optional[Pairing]
    reason: str = ""

    @property
    def is_star(self) -> bool:
        return self.pairing is None

    def __str__(self):
        if self.pairing is None:
            return "STAR"
        (a, b), (c, d) = self.pairing
        return f"{a}{b}|{c}{d}" if max(self.quartet) < 10 else f"{a},{b}|{c},{d}"


@dataclass
class ReconstructionReport:
    """
    重建结果

    verified 为 True 时 witness 必为 None。
    """
    tree: WeightedTree
    k: int
    verified: bool
    witness: Optional[KSubset] = None
    cherries: List[FrozenSet[int]] = field(default_factory=list)


def _pairings(quartet: Quartet) -> List[Pairing]:
    i, j, l, m = sorted(quartet)
    return [canonical_pairing(i, j, l, m),
            canonical_pairing(i, l, j, m),
            canonical_pairing(i, m, j, l)]


def _require_k_range(d: KDissimilarity, low: int, high_offset: int):
    if not (low <= d.k <= d.n - high_offset):
        raise BadKError(f"要求 {low} ≤ k ≤ n-{high_offset}，当前 n={d.n}, k={d.k}")


# ----------------------------------------------------------------------
# 邻居关系
# ----------------------------------------------------------------------

def neighbor_difference(d: KDissimilarity, i: int, l: int) -> Optional[Fraction]:
    """若 D_{i,X} − D_{l,X} 与 X 无关则返回该常数，否则返回 None"""
    _require_k_range(d, 3, 2)
    if i == l or not (1 <= i <= d.n and 1 <= l <= d.n):
        raise BadSubsetError(f"需要两个不同的叶子: {i}, {l}")
    others = [x for x in d.labels if x not in (i, l)]
    constant = None
    for x in colex_subsets(others, d.k - 1):
        diff = d[(i,) + x] - d[(l,) + x]
        if constant is None:
            constant = diff
        elif diff != constant:
            return None
    return constant


def are_neighbors(d: KDissimilarity, i: int, l: int) -> bool:
    """i 与 l 是邻居当且仅当 D_{i,X} − D_{l,X} 对所有 (k-1) 子集 X 取同一值"""
    return neighbor_difference(d, i, l) is not None


def neighbor_classes(d: KDissimilarity) -> List[FrozenSet[int]]:
    """
    邻居关系的等价类（完全樱桃）

    Args:
        d: 3 ≤ k ≤ n-2 的差异度族

    Returns:
        按最小标签排序的叶集划分
    """
    _require_k_range(d, 3, 2)
    relation = nx.Graph()
    relation.add_nodes_from(d.labels)
    relation.add_edges_from((i, l) for i, l in combinations(d.labels, 2) if are_neighbors(d, i, l))

    classes = []
    for component in nx.connected_components(relation):
        size = len(component)
        if relation.subgraph(component).number_of_edges() != size * (size - 1) // 2:
            raise NotTreelikeError(f"邻居关系不满足传递性: {sorted(component)}")
        classes.append(frozenset(component))
    return sorted(classes, key=min)


# ----------------------------------------------------------------------
# 四元组
# ----------------------------------------------------------------------

def _qualifies_k_at_least_4(d, pairing, others, cherry_set) -> Optional[str]:
    (i, j), (l, m) = pairing
    if frozenset((i, j)) in cherry_set and frozenset((l, m)) in cherry_set:
        return "cherries"
    found_s = found_r = False
    for s in colex_subsets(others, d.k - 2):
        paired = d[(i, j) + s] + d[(l, m) + s]
        if not found_s and paired != d[(i, l) + s] + d[(j, m) + s]:
            found_s = True
        if not found_r and paired != d[(i, m) + s] + d[(j, l) + s]:
            found_r = True
        if found_s and found_r:
            return "witness"
    return None


def _qualifies_k_3(d, pairing, others) -> Optional[str]:
    (i, j), (l, m) = pairing

    def swapped_inequality(a, b, c, e, r):
        return d.value(a, b, c) + d.value(e, r, c) != d.value(a, r, c) + d.value(e, b, c)

    for r in others:
        if all(swapped_inequality(a, b, c, e, r)
               for a, b in ((i, j), (j, i)) for c, e in ((l, m), (m, l))):
            return "witness"

    for r in others:
        paired = d.value(i, j, r) + d.value(m, l, r)
        if paired == d.value(i, m, r) + d.value(j, l, r) or paired == d.value(i, l, r) + d.value(j, m, r):
            return None
    return "separating edge" if others else None


def resolve_quartet(d: KDissimilarity, i: int, j: int, l: int, m: int,
                    cherry_partition: CherryPartition) -> QuartetResolution:
    """
    由 k-权重判定四元组 {i,j,l,m} 的 Buneman 指标

    三种配对都按规范形式检验，结果只依赖于四元组本身。

    Args:
        d: 3 ≤ k ≤ n-2 的差异度族
        i, j, l, m: 四个不同的叶子
        cherry_partition: neighbor_classes(d)

    Returns:
        QuartetResolution
    """
    _require_k_range(d, 3, 2)
    quartet = tuple(sorted((i, j, l, m)))
    if len(set(quartet)) != 4 or quartet[0] < 1 or quartet[-1] > d.n:
        raise BadSubsetError(f"需要四个不同的叶子: {(i, j, l, m)}")

    others = [x for x in d.labels if x not in quartet]
    cherry_set = {c for c in cherry_partition if len(c) == 2}
    qualifying = []
    for pairing in _pairings(quartet):
        if d.k >= 4:
            reason = _qualifies_k_at_least_4(d, pairing, others, cherry_set)
        else:
            reason = _qualifies_k_3(d, pairing, others)
        if reason:
            qualifying.append((pairing, reason))

    if len(qualifying) > 1:
        raise AmbiguousError(f"四元组 {quartet} 有多个配对成立: {[p for p, _ in qualifying]}")
    if qualifying:
        pairing, reason = qualifying[0]
        return QuartetResolution(quartet, pairing, reason)
    return QuartetResolution(quartet, None, "star")


def _resolve_sorted(quartet: Quartet, d: KDissimilarity,
                    cherry_partition: CherryPartition) -> QuartetResolution:
    return resolve_quartet(d, *quartet, cherry_partition)


# ----------------------------------------------------------------------
# 拓扑拼装
# ----------------------------------------------------------------------

class _Backbone:
    """拼装过程中的可变树：叶顶点编号即标签，内部顶点编号 > n"""

    def __init__(self, n: int):
        self.n = n
        self.adj: Dict[int, set] = {}
        self.next_id = n + 1

    def copy(self) -> "_Backbone":
        other = _Backbone(self.n)
        other.adj = {v: set(ns) for v, ns in self.adj.items()}
        other.next_id = self.next_id
        return other

    def new_vertex(self) -> int:
        vertex = self.next_id
        self.next_id += 1
        self.adj[vertex] = set()
        return vertex

    def link(self, u: int, v: int):
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)

    def unlink(self, u: int, v: int):
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def subdivide(self, u: int, v: int) -> int:
        w = self.new_vertex()
        self.unlink(u, v)
        self.link(u, w)
        self.link(w, v)
        return w

    def edges(self) -> List[Edge]:
        return sorted({normalize_edge(u, v) for u, ns in self.adj.items() for v in ns})

    def internal_vertices(self) -> List[int]:
        return sorted(v for v in self.adj if v > self.n)

    def branch_leaves(self, vertex: int, toward: int) -> List[int]:
        """从 vertex 朝 toward 方向能到达的叶标签"""
        seen = {vertex, toward}
        stack = [toward]
        leaves = []
        while stack:
            cur = stack.pop()
            if cur <= self.n:
                leaves.append(cur)
            for w in self.adj[cur]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return sorted(leaves)

    def split_masks(self) -> List[int]:
        """每条边远离根一侧的叶掩码"""
        root = next(iter(self.adj))
        parent = {root: None}
        order = [root]
        for cur in order:
            for w in self.adj[cur]:
                if w not in parent:
                    parent[w] = cur
                    order.append(w)
        mask = {v: (1 << v) if v <= self.n else 0 for v in self.adj}
        for cur in reversed(order):
            if parent[cur] is not None:
                mask[parent[cur]] |= mask[cur]
        return [mask[v] for v in order if parent[v] is not None]


def _pairing_from_masks(masks: List[int], quartet: Quartet) -> Optional[Pairing]:
    for (a, b), (c, d) in _pairings(quartet):
        left = (1 << a) | (1 << b)
        right = (1 << c) | (1 << d)
        for mask in masks:
            if (mask & left == left and not mask & right) or (mask & right == right and not mask & left):
                return ((a, b), (c, d))
    return None


class TopologyAssembler:
    """
    由四元组解析结果拼装拓扑

    先在樱桃代表（每类最小的叶子）上逐个插入，得到骨架；
    再用一个额外四元组判断每个完全樱桃是单独成柄还是直接挂在骨架节点上。

    Args:
        resolutions: 四元组 → 解析结果
        cherry_partition: 完全樱桃划分
        resolve_missing: 可选，用于计算 resolutions 中没有的四元组
    """

    def __init__(self, resolutions: Mapping[Quartet, QuartetResolution],
                 cherry_partition: CherryPartition,
                 resolve_missing: Optional[Callable[[Quartet], QuartetResolution]] = None):
        self.resolutions = dict(resolutions)
        self.classes = sorted((frozenset(c) for c in cherry_partition), key=min)
        self.resolve_missing = resolve_missing
        self.labels = sorted(set().union(*self.classes)) if self.classes else []
        self.n = max(self.labels) if self.labels else 0

    def lookup(self, *leaves: int) -> Optional[Pairing]:
        quartet = tuple(sorted(leaves))
        resolution = self.resolutions.get(quartet)
        if resolution is None:
            if self.resolve_missing is None:
                raise InconsistentError(f"缺少四元组 {quartet} 的解析结果")
            resolution = self.resolve_missing(quartet)
            self.resolutions[quartet] = resolution
        return resolution.pairing

    def assemble(self) -> Topology:
        if not self.classes:
            raise InconsistentError("空的樱桃划分")
        if len(self.classes) == 1:
            return star_tree({label: 0 for label in self.labels}).topology()
        if len(self.classes) == 2:
            return self._two_stalks()

        reps = [min(c) for c in self.classes]
        backbone = self._build_backbone(reps)
        return self._expand_stalks(backbone)

    def _two_stalks(self) -> Topology:
        if any(len(c) < 2 for c in self.classes):
            raise InconsistentError("两个类时每个类至少需要两个叶子")
        tree = _Backbone(self.n)
        stalks = [tree.new_vertex() for _ in self.classes]
        tree.link(*stalks)
        for stalk, members in zip(stalks, self.classes):
            for label in members:
                tree.link(stalk, label)
        return Topology(tree.edges(), {label: label for label in self.labels})

    def _build_backbone(self, reps: List[int]) -> _Backbone:
        backbone = _Backbone(self.n)
        center = backbone.new_vertex()
        for label in reps[:3]:
            backbone.link(center, label)

        placed = list(reps[:3])
        for x in reps[3:]:
            triples = list(combinations(placed, 3))
            expected = {t: self.lookup(x, *t) for t in triples}
            matches = []
            for candidate in self._candidates(backbone, x):
                masks = candidate.split_masks()
                if all(_pairing_from_masks(masks, tuple(sorted((x,) + t))) == expected[t]
                       for t in triples):
                    matches.append(candidate)
            if len(matches) != 1:
                raise InconsistentError(f"代表叶 {x} 有 {len(matches)} 个可行插入位置")
            backbone = matches[0]
            placed.append(x)
            logger.debug("插入代表叶 %d", x)
        return backbone

    @staticmethod
    def _candidates(backbone: _Backbone, x: int):
        for vertex in backbone.internal_vertices():
            candidate = backbone.copy()
            candidate.link(vertex, x)
            yield candidate
        for u, v in backbone.edges():
            candidate = backbone.copy()
            w = candidate.subdivide(u, v)
            candidate.link(w, x)
            yield candidate

    def _expand_stalks(self, backbone: _Backbone) -> Topology:
        # 先在未改动的骨架上决定每个类的挂接方式，再统一修改
        plans = []
        direct: Dict[int, int] = {}
        for members in self.classes:
            rep = min(members)
            (anchor,) = backbone.adj[rep]
            if len(members) == 1:
                direct[anchor] = direct.get(anchor, 0) + 1
                continue

            branches = sorted(
                (backbone.branch_leaves(anchor, w) for w in backbone.adj[anchor] if w != rep),
                key=min,
            )
            x, y = branches[0][0], branches[1][0]
            partner = min(members - {rep})
            outcome = self.lookup(rep, partner, x, y)
            if outcome is None:
                direct[anchor] = direct.get(anchor, 0) + 1
                plans.append((members, rep, anchor, False))
            elif outcome == canonical_pairing(rep, partner, x, y):
                plans.append((members, rep, anchor, True))
            else:
                raise InconsistentError(f"樱桃 {sorted(members)} 的柄位置与四元组矛盾")

        for members, rep, anchor, own_stalk in plans:
            stalk = backbone.subdivide(rep, anchor) if own_stalk else anchor
            for label in sorted(members - {rep}):
                backbone.link(stalk, label)

        crowded = [v for v, count in direct.items() if count > 1]
        if crowded:
            raise InconsistentError(f"节点 {crowded} 上挂有多个互为邻居的类")
        return Topology(backbone.edges(), {label: label for label in self.labels})


def assemble_topology(resolutions: Mapping[Quartet, QuartetResolution],
                      cherry_partition: CherryPartition,
                      resolve_missing: Optional[Callable[[Quartet], QuartetResolution]] = None) -> Topology:
    """由四元组解析结果拼装唯一的本质叶标记拓扑"""
    return TopologyAssembler(resolutions, cherry_partition, resolve_missing).assemble()


# ----------------------------------------------------------------------
# 边权
# ----------------------------------------------------------------------

def _two_smallest_branches(topo: Topology, vertex: int, exclude: int) -> Tuple[int, int]:
    sides = sorted((topo.side(vertex, w) for w in topo.neighbors(vertex) if w != exclude), key=min)
    if len(sides) < 2:
        raise NoValidWitnessError(f"顶点 {vertex} 不是节点")
    return min(sides[0]), min(sides[1])


def edge_witness(topo: Topology, e: Edge, k: int) -> Tuple[Quartet, KSubset]:
    """
    内部边 e=x–y 的计算见证 (i,j,l,m,R)

    i,j 取自 x 处两个不同分支，l,m 取自 y 处两个不同分支；
    R 是某一侧（叶子数 ≥ k）去掉四元组后最小的 k-2 个叶子。
    """
    x, y = e
    i, j = _two_smallest_branches(topo, x, y)
    l, m = _two_smallest_branches(topo, y, x)
    quartet = (i, j, l, m)
    for side in (topo.side(y, x), topo.side(x, y)):
        if len(side) >= k:
            pool = sorted(side - set(quartet))
            return quartet, tuple(pool[:k - 2])
    raise NoValidWitnessError(f"边 {e} 两侧叶子数都小于 k={k}")


def internal_edge_weights(d: KDissimilarity, topo: Topology, config_manager=None) -> Dict[Edge, Fraction]:
    """
    每条内部边的权重：c·w(e) = D_{i,m,R} + D_{j,l,R} − D_{i,j,R} − D_{l,m,R}

    R 非空且整体位于 e 的一侧时常数 c = 1（由配置 internal_edge_factor 给出）。

    Args:
        d: 差异度族
        topo: (n,k) 型伪星拓扑

    Returns:
        内部边 → 权重
    """
    config_manager = config_manager or get_config_manager()
    factor = Fraction(config_manager.get("RECONSTRUCTION", "internal_edge_factor", 1))
    weights = {}
    for e in topo.internal_edges():
        (i, j, l, m), r = edge_witness(topo, e, d.k)
        combination = d[(i, m) + r] + d[(j, l) + r] - d[(i, j) + r] - d[(l, m) + r]
        weights[e] = combination / factor
    return weights


def _internal_part(topo: Topology, internal: Mapping[Edge, Fraction], subset: Iterable[int]) -> Fraction:
    s = set(subset)
    total = Fraction(0)
    for e, w in internal.items():
        u, v = e
        if topo.side(u, v) & s and topo.side(v, u) & s:
            total += w
    return total


def star_twig_weights(d: KDissimilarity) -> Dict[int, Fraction]:
    """k = n-1 时星形树的闭式解：w_i = (Σ_J D_J)/(n-1) − D_{[n]−{i}}"""
    if d.k != d.n - 1:
        raise BadKError("闭式星形解要求 k = n-1")
    mean = sum(d.values(), Fraction(0)) / (d.n - 1)
    return {i: mean - d[[x for x in d.labels if x != i]] for i in d.labels}


def twig_weights(d: KDissimilarity, topo: Topology,
                 internal: Mapping[Edge, Fraction]) -> Dict[int, Fraction]:
    """
    解叶枝权重线性方程组

    s(I) = D_I − （I 的最小子树中内部边权之和）= Σ_{i∈I} w(e_i)。
    差值 w(e_i) − w(e_1) 对所有 S 必须一致，再由 I0 = {1..k} 定出 w(e_1)。
    """
    def residual(subset):
        return d[subset] - _internal_part(topo, internal, subset)

    anchor = d.labels[0]
    deltas = {anchor: Fraction(0)}
    for i in d.labels[1:]:
        others = [x for x in d.labels if x not in (anchor, i)]
        value = None
        for s in colex_subsets(others, d.k - 1):
            diff = residual((i,) + s) - residual((anchor,) + s)
            if value is None:
                value = diff
            elif diff != value:
                raise InconsistentSystemError(
                    f"叶枝差 w({i}) − w({anchor}) 随 S 变化", witness=tuple(sorted((i,) + s)))
        deltas[i] = value

    first = tuple(d.labels[:d.k])
    base = (residual(first) - sum(deltas[i] for i in first)) / d.k
    return {i: base + deltas[i] for i in d.labels}


# ----------------------------------------------------------------------
# 验证与编排
# ----------------------------------------------------------------------

def verify_realization(t: WeightedTree, d: KDissimilarity,
                       config_manager=None) -> Tuple[bool, Optional[KSubset]]:
    """
    精确比较 k_vector(t) 与 d

    Returns:
        (是否一致, 第一个不一致的子集)
    """
    if t.leaves != tuple(d.labels):
        raise ShapeMismatchError(f"树的叶集 {t.leaves} 与 [1..{d.n}] 不一致")
    witness = first_mismatch(k_vector(t, d.k, config_manager), d)
    return witness is None, witness


class PseudostarReconstructor:
    """
    伪星树重建器

    Args:
        config_manager: 配置管理器实例
    """

    def __init__(self, config_manager=None):
        self.config_manager = config_manager or get_config_manager()
        recon = self.config_manager.get_reconstruction_config()
        self.strict = recon.get("strict_verification", True)
        self.contract_zero = recon.get("contract_zero_internal", True)

    def resolve_all(self, d: KDissimilarity, classes: CherryPartition) -> Dict[Quartet, QuartetResolution]:
        """所有代表四元组的解析结果"""
        reps = [min(c) for c in classes]
        quartets = list(combinations(reps, 4))
        resolver = partial(_resolve_sorted, d=d, cherry_partition=list(classes))
        results = parallel_map(resolver, quartets, desc="四元组", config_manager=self.config_manager)
        return dict(zip(quartets, results))

    def build(self, d: KDissimilarity) -> Tuple[WeightedTree, List[FrozenSet[int]]]:
        """不含验证的重建流程"""
        if d.k == d.n - 1:
            logger.debug("k = n-1，使用星形闭式解")
            return star_tree(star_twig_weights(d)), [frozenset(d.labels)]

        classes = neighbor_classes(d)
        logger.info("✓ 完全樱桃: %s", [sorted(c) for c in classes])
        resolutions = self.resolve_all(d, classes)
        topo = assemble_topology(resolutions, classes,
                                 partial(_resolve_sorted, d=d, cherry_partition=list(classes)))
        internal = internal_edge_weights(d, topo, self.config_manager)
        twigs = twig_weights(d, topo, internal)
        weights = dict(internal)
        for label, w in twigs.items():
            weights[topo.leaf_edge(label)] = w
        return topo.with_weights(weights), classes

    def reconstruct(self, d: KDissimilarity, strict: Optional[bool] = None) -> ReconstructionReport:
        """
        重建并验证

        Args:
            d: 3 ≤ k ≤ n-1 的差异度族
            strict: 验证失败时是否抛出 NotTreelikeError（默认取配置）

        Returns:
            ReconstructionReport
        """
        from src.core.transforms import contract_zero_internal, pseudostar_normal_form

        _require_k_range(d, 3, 1)
        strict = self.strict if strict is None else strict
        try:
            tree, classes = self.build(d)
        except NoValidWitnessError as e:
            raise NotTreelikeError(f"重建失败: {e}") from e

        if self.contract_zero:
            tree = contract_zero_internal(tree)

        verified, witness = verify_realization(tree, d, self.config_manager)
        if not verified:
            if strict:
                raise NotTreelikeError(f"验证失败，子集 {witness} 的 k-权重不一致", witness=witness)
            logger.warning("❌ 验证失败，第一个不一致的子集: %s", witness)
            return ReconstructionReport(tree, d.k, False, witness, classes)

        if not (tree.is_essential() and tree.is_pseudostar(d.k) and tree.is_internal_nonzero()):
            tree = pseudostar_normal_form(tree, d.k)
        logger.info("✓ 重建完成并通过验证: n=%d, k=%d", d.n, d.k)
        return ReconstructionReport(tree, d.k, True, None, classes)


def reconstruct(d: KDissimilarity, strict: Optional[bool] = None,
                config_manager=None) -> ReconstructionReport:
    """重建 (n,k) 型伪星树并验证"""
    return PseudostarReconstructor(config_manager).reconstruct(d, strict)
