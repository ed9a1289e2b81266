# -*- coding: utf-8 -*-
"""
带权叶标记树模块

提供不可变的无根树表示（拓扑 Topology 与带权树 WeightedTree）、
结构查询（划分、叶枝、完全樱桃、伪星判定、四元组拓扑）
以及结构编辑（收缩、限制、本质化）。所有编辑都返回新树。

顶点编号为整数且不具语义；只有叶标签（正整数）有意义。
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from src.core.errors import (
    BadLabelingError,
    BadSubsetError,
    NotATreeError,
    NotEssentialError,
    NotInternalError,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Pairing = Tuple[Tuple[int, int], Tuple[int, int]]


def normalize_edge(u: int, v: int) -> Edge:
    """无向边的规范形式 (较小编号, 较大编号)"""
    return (u, v) if u <= v else (v, u)


def canonical_pairing(a: int, b: int, c: int, d: int) -> Pairing:
    """四元组配对 ab|cd 的规范形式：每对内部升序，两对按首元素排序"""
    first = (a, b) if a < b else (b, a)
    second = (c, d) if c < d else (d, c)
    return (first, second) if first < second else (second, first)


def label_mask(labels: Iterable[int]) -> int:
    """叶标签集合的位掩码（标签 l 对应第 l 位）"""
    mask = 0
    for label in labels:
        mask |= 1 << label
    return mask


@dataclass(frozen=True)
class Split:
    """
    删除一条边后叶集的二划分

    side_a 总是包含最小的叶标签。
    """
    side_a: FrozenSet[int]
    side_b: FrozenSet[int]

    @classmethod
    def of(cls, side: Iterable[int], other: Iterable[int]) -> "Split":
        side, other = frozenset(side), frozenset(other)
        if min(side) > min(other):
            side, other = other, side
        return cls(side, other)

    @property
    def min_size(self) -> int:
        return min(len(self.side_a), len(self.side_b))

    def smaller_side(self) -> FrozenSet[int]:
        """较小的一侧；大小相同时取含最小标签的一侧"""
        if len(self.side_b) < len(self.side_a):
            return self.side_b
        return self.side_a

    def is_trivial(self) -> bool:
        return self.min_size <= 1

    def contains(self, side: Iterable[int]) -> bool:
        side = frozenset(side)
        return side == self.side_a or side == self.side_b


@dataclass(frozen=True)
class Twig:
    """
    叶枝：从叶子到最近节点（度 ≥ 3 的顶点）的路径

    Attributes:
        leaf: 叶标签
        path_weight: 路径总权重 w(e_i)
        edges: 路径上的边（从叶子开始）
        node: 路径终点
    """
    leaf: int
    path_weight: Fraction
    edges: Tuple[Edge, ...]
    node: int


class Topology:
    """
    叶标记无根树的形状（无权重）

    Args:
        edges: 边列表（顶点编号为整数）
        leaf_labels: 叶标签 → 顶点编号
        validate: 是否检查树结构与标记
    """

    def __init__(self, edges: Iterable[Edge], leaf_labels: Mapping[int, int],
                 validate: bool = True):
        edge_list = [normalize_edge(u, v) for u, v in edges]
        self._edges: Tuple[Edge, ...] = tuple(sorted(set(edge_list)))
        self._edge_lookup = frozenset(self._edges)
        self._leaf_vertex: Dict[int, int] = {
            label: leaf_labels[label] for label in sorted(leaf_labels)
        }
        self._vertex_leaf: Dict[int, int] = {v: l for l, v in self._leaf_vertex.items()}

        adjacency: Dict[int, List[int]] = {}
        for u, v in self._edges:
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
        self._adjacency = {v: tuple(sorted(ns)) for v, ns in adjacency.items()}

        self._side_cache: Dict[Tuple[int, int], FrozenSet[int]] = {}
        self._graph = None
        self._twig_cache = None
        self._split_index = None

        if validate:
            self._validate(edge_list)

    # ------------------------------------------------------------------
    # 校验
    # ------------------------------------------------------------------

    def _validate(self, edge_list: List[Edge]):
        if not edge_list:
            raise NotATreeError("树至少需要一条边")
        if any(u == v for u, v in edge_list):
            raise NotATreeError("边列表含自环")
        if len(set(edge_list)) != len(edge_list):
            raise NotATreeError("边列表含重复边（长度为2的环）")
        if not nx.is_tree(self.graph):
            raise NotATreeError("边列表含环或不连通")

        seen_vertices = set()
        for label, vertex in self._leaf_vertex.items():
            if not isinstance(label, int) or isinstance(label, bool) or label < 1:
                raise BadLabelingError(f"叶标签必须是正整数: {label!r}")
            if vertex in seen_vertices:
                raise BadLabelingError(f"顶点 {vertex} 被标记了多次")
            seen_vertices.add(vertex)
            if vertex not in self._adjacency:
                raise BadLabelingError(f"标签 {label} 指向不存在的顶点 {vertex}")
            if len(self._adjacency[vertex]) != 1:
                raise BadLabelingError(f"标签 {label} 所在顶点 {vertex} 的度数大于1")
        unlabeled = [v for v, ns in self._adjacency.items()
                     if len(ns) == 1 and v not in self._vertex_leaf]
        if unlabeled:
            raise BadLabelingError(f"度为1的顶点缺少标签: {unlabeled}")

    # ------------------------------------------------------------------
    # 基本访问
    # ------------------------------------------------------------------

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self._adjacency))

    @property
    def leaves(self) -> Tuple[int, ...]:
        """叶标签（升序）"""
        return tuple(self._leaf_vertex)

    @property
    def n(self) -> int:
        return len(self._leaf_vertex)

    @property
    def leaf_labels(self) -> Dict[int, int]:
        return dict(self._leaf_vertex)

    def leaf_vertex(self, label: int) -> int:
        try:
            return self._leaf_vertex[label]
        except KeyError:
            raise BadSubsetError(f"叶标签不存在: {label}") from None

    def label_of(self, vertex: int) -> Optional[int]:
        return self._vertex_leaf.get(vertex)

    def neighbors(self, vertex: int) -> Tuple[int, ...]:
        return self._adjacency[vertex]

    def degree(self, vertex: int) -> int:
        return len(self._adjacency[vertex])

    def nodes(self) -> Tuple[int, ...]:
        """度 ≥ 3 的顶点"""
        return tuple(v for v in self.vertices if self.degree(v) >= 3)

    def internal_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in self.vertices if v not in self._vertex_leaf)

    def new_vertex_id(self) -> int:
        return max(self._adjacency) + 1

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self._edge_lookup

    def _require_edge(self, e: Edge) -> Edge:
        edge = normalize_edge(*e)
        if edge not in self._edge_lookup:
            raise NotInternalError(f"边不存在: {e}")
        return edge

    @property
    def graph(self) -> nx.Graph:
        """networkx 视图：顶点属性 label，边属性 weight"""
        if self._graph is None:
            graph = nx.Graph()
            for vertex in self._adjacency:
                graph.add_node(vertex, label=self._vertex_leaf.get(vertex))
            for u, v in self._edges:
                graph.add_edge(u, v, weight=self._edge_weight_or_none((u, v)))
            self._graph = graph
        return self._graph

    def _edge_weight_or_none(self, edge: Edge):
        return None

    def __reduce__(self):
        return (self.__class__, (self._edges, self._leaf_vertex, False))

    def __repr__(self):
        return f"{self.__class__.__name__}(n={self.n}, edges={len(self._edges)})"

    # ------------------------------------------------------------------
    # 划分与分支
    # ------------------------------------------------------------------

    def side(self, u: int, v: int) -> FrozenSet[int]:
        """删除边 u–v 后 v 一侧的叶标签"""
        key = (u, v)
        cached = self._side_cache.get(key)
        if cached is not None:
            return cached

        # 迭代后序遍历，避免长链上的递归深度问题
        stack = [(u, v, False)]
        while stack:
            parent, child, expanded = stack.pop()
            if (parent, child) in self._side_cache:
                continue
            below = [w for w in self._adjacency[child] if w != parent]
            if not expanded:
                stack.append((parent, child, True))
                stack.extend((child, w, False) for w in below
                             if (child, w) not in self._side_cache)
                continue
            labels = set()
            if child in self._vertex_leaf:
                labels.add(self._vertex_leaf[child])
            for w in below:
                labels |= self._side_cache[(child, w)]
            self._side_cache[(parent, child)] = frozenset(labels)
        return self._side_cache[key]

    def edge_split(self, e: Edge) -> Split:
        """
        删除边 e 得到的叶集二划分

        Args:
            e: 边（两个端点）

        Returns:
            Split，side_a 含最小标签
        """
        u, v = self._require_edge(e)
        return Split.of(self.side(v, u), self.side(u, v))

    def splits(self) -> Dict[Edge, Split]:
        return {e: self.edge_split(e) for e in self._edges}

    def split_masks(self) -> List[Tuple[Edge, int, int]]:
        """每条边两侧的叶标签位掩码 (edge, mask_u侧, mask_v侧)"""
        return [(e, label_mask(self.side(e[1], e[0])), label_mask(self.side(e[0], e[1])))
                for e in self._edges]

    def edge_by_split(self, side: Iterable[int]) -> Edge:
        """找到划分一侧恰为 side 的边"""
        if self._split_index is None:
            index = {}
            for e in self._edges:
                split = self.edge_split(e)
                index[split.side_a] = e
                index[split.side_b] = e
            self._split_index = index
        key = frozenset(side)
        if key not in self._split_index:
            raise BadSubsetError(f"没有边的划分一侧为 {sorted(key)}")
        return self._split_index[key]

    def branches(self, vertex: int) -> Dict[int, FrozenSet[int]]:
        """顶点 vertex 的每个邻居方向上的叶集"""
        return {w: self.side(vertex, w) for w in self._adjacency[vertex]}

    # ------------------------------------------------------------------
    # 叶枝与内部边
    # ------------------------------------------------------------------

    def twig_paths(self) -> Dict[int, Tuple[Tuple[Edge, ...], int]]:
        """每个叶子的叶枝路径：叶标签 → (边序列, 终点)"""
        if self._twig_cache is None:
            result = {}
            for label, vertex in self._leaf_vertex.items():
                path = []
                prev, cur = None, vertex
                while True:
                    nxt = next(w for w in self._adjacency[cur] if w != prev)
                    path.append(normalize_edge(cur, nxt))
                    prev, cur = cur, nxt
                    if len(self._adjacency[cur]) != 2:
                        break
                result[label] = (tuple(path), cur)
            self._twig_cache = result
        return self._twig_cache

    def twig_edges(self) -> FrozenSet[Edge]:
        return frozenset(e for path, _ in self.twig_paths().values() for e in path)

    def internal_edges(self) -> Tuple[Edge, ...]:
        """不在任何叶枝上的边"""
        on_twigs = self.twig_edges()
        return tuple(e for e in self._edges if e not in on_twigs)

    def leaf_edge(self, label: int) -> Edge:
        """与叶子相连的那条边"""
        vertex = self.leaf_vertex(label)
        return normalize_edge(vertex, self._adjacency[vertex][0])

    # ------------------------------------------------------------------
    # 结构判定
    # ------------------------------------------------------------------

    def is_essential(self) -> bool:
        """没有度为2的顶点"""
        return all(len(ns) != 2 for ns in self._adjacency.values())

    def is_pseudostar(self, k: int) -> bool:
        """每条边的划分都有一侧的叶子数 ≥ k"""
        for u, v in self._edges:
            size = len(self.side(u, v))
            if max(size, self.n - size) < k:
                return False
        return True

    def complete_cherries(self) -> List[FrozenSet[int]]:
        """
        完全樱桃划分

        本质树中两叶为邻居当且仅当它们挂在同一个内部顶点上。

        Returns:
            按最小标签排序的叶集划分（允许单元素类）
        """
        if not self.is_essential():
            raise NotEssentialError("完全樱桃只对本质树定义")
        groups: Dict[object, set] = {}
        for label, vertex in self._leaf_vertex.items():
            stalk = self._adjacency[vertex][0]
            key = stalk if stalk not in self._vertex_leaf else ("leaf", label)
            groups.setdefault(key, set()).add(label)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def path(self, a: int, b: int) -> List[int]:
        """叶 a 到叶 b 的顶点路径"""
        return nx.shortest_path(self.graph, self.leaf_vertex(a), self.leaf_vertex(b))

    def quartet_topology(self, a: int, b: int, c: int, d: int) -> Optional[Pairing]:
        """
        从树结构读出四元组的配对

        ab|cd 成立当且仅当 a–b 路径与 c–d 路径没有公共顶点；三种配对都不成立时为星形（None）。
        """
        for (p, q), (r, s) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            if not set(self.path(p, q)) & set(self.path(r, s)):
                return canonical_pairing(p, q, r, s)
        return None

    def split_encoding(self) -> Tuple[Tuple[int, ...], ...]:
        """非平凡划分的规范编码；对本质树它唯一确定带标签的拓扑"""
        sides = {tuple(sorted(s.side_a)) for s in self.splits().values() if not s.is_trivial()}
        return tuple(sorted(sides))

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    def with_weights(self, weights: Mapping[Edge, object]) -> "WeightedTree":
        """给每条边赋权，得到带权树"""
        normalized = {normalize_edge(*e): w for e, w in weights.items()}
        missing = [e for e in self._edges if e not in normalized]
        if missing or len(normalized) != len(self._edges):
            raise BadSubsetError(f"边权与拓扑的边不一致，缺少: {missing}")
        return WeightedTree(normalized, self._leaf_vertex, validate=False)

    def topology(self) -> "Topology":
        return Topology(self._edges, self._leaf_vertex, validate=False)


class WeightedTree(Topology):
    """
    带有理数边权的叶标记无根树

    Args:
        weights: 边 → 权重（int、str 或 Fraction，均转为 Fraction）
        leaf_labels: 叶标签 → 顶点编号
        validate: 是否检查树结构与标记
    """

    def __init__(self, weights: Mapping[Edge, object], leaf_labels: Mapping[int, int],
                 validate: bool = True):
        normalized: Dict[Edge, Fraction] = {}
        for (u, v), w in weights.items():
            edge = normalize_edge(u, v)
            if validate and edge in normalized:
                raise NotATreeError(f"重复边: {edge}")
            normalized[edge] = w if isinstance(w, Fraction) else Fraction(w)
        self._weights = normalized
        super().__init__(list(normalized), leaf_labels, validate=validate)

    def __reduce__(self):
        return (self.__class__, (self._weights, self._leaf_vertex, False))

    def _edge_weight_or_none(self, edge: Edge):
        return self._weights[edge]

    @property
    def edge_weights(self) -> Dict[Edge, Fraction]:
        return dict(self._weights)

    def weight(self, e: Edge) -> Fraction:
        return self._weights[self._require_edge(e)]

    def total_weight(self) -> Fraction:
        """所有边权之和 D_tot"""
        return sum(self._weights.values(), Fraction(0))

    def twigs(self) -> Dict[int, Twig]:
        return {
            label: Twig(leaf=label,
                        path_weight=sum((self._weights[e] for e in path), Fraction(0)),
                        edges=path, node=node)
            for label, (path, node) in self.twig_paths().items()
        }

    def min_twig_weight(self) -> Fraction:
        return min(t.path_weight for t in self.twigs().values())

    def is_internal_nonzero(self) -> bool:
        return all(self._weights[e] != 0 for e in self.internal_edges())

    def is_internal_positive(self) -> bool:
        return all(self._weights[e] > 0 for e in self.internal_edges())

    def is_positive(self) -> bool:
        return all(w > 0 for w in self._weights.values())

    def topology(self) -> Topology:
        return Topology(self._edges, self._leaf_vertex, validate=False)

    def _rebuild(self, weights: Mapping[Edge, Fraction],
                 leaf_labels: Optional[Mapping[int, int]] = None) -> "WeightedTree":
        labels = self._leaf_vertex if leaf_labels is None else leaf_labels
        return WeightedTree(weights, labels, validate=False)

    def reweighted(self, changes: Mapping[Edge, object]) -> "WeightedTree":
        """替换部分边的权重"""
        weights = dict(self._weights)
        for e, w in changes.items():
            weights[self._require_edge(e)] = Fraction(w)
        return self._rebuild(weights)

    # ------------------------------------------------------------------
    # 结构编辑
    # ------------------------------------------------------------------

    def restrict(self, subset: Iterable[int]) -> "WeightedTree":
        """
        T|_S：包含叶集 S 的最小子树

        保留度为2的非叶顶点（需要时再调用 essentialize）。
        限制结果的叶标签一般不是 1..|S|，它直接由构造函数生成，不经过 build_tree 的标签检查。

        Args:
            subset: 叶标签集合，至少两个

        Returns:
            限制后的带权树，叶标签为 subset
        """
        s = frozenset(subset)
        if len(s) < 2:
            raise BadSubsetError("限制的叶集至少需要两个叶子")
        unknown = s - set(self._leaf_vertex)
        if unknown:
            raise BadSubsetError(f"叶标签不在树中: {sorted(unknown)}")
        if len(s) == self.n:
            return self

        weights = {}
        for (u, v), w in self._weights.items():
            if self.side(u, v) & s and self.side(v, u) & s:
                weights[(u, v)] = w
        labels = {label: self._leaf_vertex[label] for label in sorted(s)}
        return self._rebuild(weights, labels)

    def essentialize(self) -> "WeightedTree":
        """把经过度为2的非叶顶点的每条极大链替换为一条边（权重求和）"""
        if self.is_essential():
            return self
        anchors = [v for v, ns in self._adjacency.items() if len(ns) != 2]
        weights: Dict[Edge, Fraction] = {}
        used = set()
        for anchor in anchors:
            for first in self._adjacency[anchor]:
                if normalize_edge(anchor, first) in used:
                    continue
                total = Fraction(0)
                prev, cur = anchor, first
                while True:
                    edge = normalize_edge(prev, cur)
                    used.add(edge)
                    total += self._weights[edge]
                    if len(self._adjacency[cur]) != 2:
                        break
                    prev, cur = cur, next(w for w in self._adjacency[cur] if w != prev)
                weights[normalize_edge(anchor, cur)] = total
        return self._rebuild(weights)

    def contract_edge(self, e: Edge) -> "WeightedTree":
        """
        收缩一条内部边

        Args:
            e: 内部边（不在任何叶枝上）

        Returns:
            两端点合并后的树，其余边权不变
        """
        edge = self._require_edge(e)
        if edge in self.twig_edges():
            raise NotInternalError(f"边 {edge} 位于叶枝上，不能收缩")
        keep, gone = edge
        weights = {}
        for (u, v), w in self._weights.items():
            if (u, v) == edge:
                continue
            u = keep if u == gone else u
            v = keep if v == gone else v
            weights[normalize_edge(u, v)] = w
        return self._rebuild(weights)

    def insert_edge(self, vertex: int, moved_neighbors: Iterable[int],
                    weight) -> Tuple["WeightedTree", Edge]:
        """
        在 vertex 处插入新边：moved_neighbors 方向的分支改挂到新顶点上

        Returns:
            (新树, 新边)
        """
        moved = set(moved_neighbors)
        fresh = self.new_vertex_id()
        weights = {}
        for (u, v), w in self._weights.items():
            if u == vertex and v in moved:
                u = fresh
            elif v == vertex and u in moved:
                v = fresh
            weights[normalize_edge(u, v)] = w
        new_edge = normalize_edge(vertex, fresh)
        weights[new_edge] = Fraction(weight)
        return self._rebuild(weights), new_edge


def build_tree(edge_list: Iterable[Tuple[int, int, object]],
               leaf_labels: Mapping[int, int]) -> WeightedTree:
    """
    从 (u, v, weight) 边列表构造并校验带权树

    Args:
        edge_list: 边列表
        leaf_labels: 叶标签 → 顶点编号

    Returns:
        校验过的 WeightedTree
    """
    weights = {}
    for u, v, w in edge_list:
        edge = normalize_edge(u, v)
        if u == v:
            raise NotATreeError(f"边列表含自环: {u}")
        if edge in weights:
            raise NotATreeError(f"重复边（长度为2的环）: {edge}")
        weights[edge] = w
    t = WeightedTree(weights, leaf_labels)
    if t.leaves != tuple(range(1, t.n + 1)):
        raise BadLabelingError(f"叶标签必须恰好是 1..{t.n}: {list(t.leaves)}")
    return t


def labeled_equal(t1: Topology, t2: Topology) -> bool:
    """存在保持叶标签且边权相同的同构"""
    if t1.leaves != t2.leaves or len(t1.edges) != len(t2.edges):
        return False
    return nx.is_isomorphic(
        t1.graph, t2.graph,
        node_match=lambda a, b: a.get("label") == b.get("label"),
        edge_match=lambda a, b: a.get("weight") == b.get("weight"),
    )


def star_tree(twig_weights: Mapping[int, object]) -> WeightedTree:
    """以顶点 n+1 为中心的星形树"""
    n = max(twig_weights)
    center = n + 1
    return WeightedTree({(label, center): w for label, w in twig_weights.items()},
                        {label: label for label in twig_weights})
