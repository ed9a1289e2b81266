# -*- coding: utf-8 -*-
"""
文件格式模块

树：Newick 文本，叶名为正整数，每条边都带长度（整数、精确小数或 p/q）。
k-差异度族：一行表头加 C(n,k) 条记录，按余字典序输出。
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.core.dissimilarity import KDissimilarity
from src.core.errors import DuplicateSubsetError, MissingSubsetError, ParseError
from src.core.tree_core import WeightedTree, normalize_edge
from src.utils.combinatorics import colex_subsets
from src.utils.config_manager import get_config_manager

logger = logging.getLogger(__name__)

_DELIMITERS = set("(),:;")


def format_rational(value: Fraction) -> str:
    """整数输出为整数，否则输出 p/q"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(token: str) -> Fraction:
    """解析整数、精确小数或 p/q；失败时抛出 ValueError"""
    if "/" in token:
        num, _, den = token.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(token)


def _position(text: str, index: int) -> Tuple[int, int]:
    line = text.count("\n", 0, index) + 1
    column = index - (text.rfind("\n", 0, index) + 1) + 1
    return line, column


class _NewickReader:
    """单遍扫描的 Newick 读取器；顶点按出现顺序编号"""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.next_internal = -1
        self.edges: Dict[Tuple[int, int], Fraction] = {}
        self.leaves: Dict[int, int] = {}

    def error(self, message: str, index: Optional[int] = None) -> ParseError:
        line, column = _position(self.text, self.pos if index is None else index)
        return ParseError(message, line, column)

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_space()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            found = self.peek() or "文本结尾"
            raise self.error(f"期望 '{char}'，遇到 {found!r}")
        self.pos += 1

    def token(self) -> Tuple[str, int]:
        self.skip_space()
        start = self.pos
        while (self.pos < len(self.text) and self.text[self.pos] not in _DELIMITERS
               and not self.text[self.pos].isspace()):
            self.pos += 1
        return self.text[start:self.pos], start

    def fresh_internal(self) -> int:
        vertex = self.next_internal
        self.next_internal -= 1
        return vertex

    def leaf(self) -> int:
        name, start = self.token()
        if not name:
            raise self.error("缺少叶名", start)
        if not name.isdigit() or int(name) < 1:
            raise self.error(f"叶名必须是正整数: {name!r}", start)
        label = int(name)
        if label in self.leaves:
            raise self.error(f"叶名重复: {label}", start)
        self.leaves[label] = label
        return label

    def length(self) -> Fraction:
        self.expect(":")
        raw, start = self.token()
        if not raw:
            raise self.error("缺少边长", start)
        try:
            return parse_rational(raw)
        except (ValueError, ZeroDivisionError):
            raise self.error(f"无法解析的边长: {raw!r}", start) from None

    def children(self, parent: int) -> int:
        """读取 '(' 子树:长度, ... ')'，返回子树个数"""
        self.expect("(")
        count = 0
        while True:
            child = self.subtree()
            self.edges[normalize_edge(parent, child)] = self.length()
            count += 1
            if self.peek() == ",":
                self.pos += 1
                continue
            self.expect(")")
            return count

    def subtree(self) -> int:
        if self.peek() == "(":
            vertex = self.fresh_internal()
            self.children(vertex)
            name, start = self.token()
            if name:
                raise self.error("内部顶点不能带标签", start)
            return vertex
        return self.leaf()

    def read(self) -> WeightedTree:
        if self.peek() != "(":
            raise self.error("树必须以 '(' 开始")
        root = self.fresh_internal()
        count = self.children(root)
        name, start = self.token()
        if name:
            if count != 1:
                raise self.error("只有度为1的根可以带叶名", start)
            if not name.isdigit() or int(name) < 1 or int(name) in self.leaves:
                raise self.error(f"根的叶名不合法: {name!r}", start)
            label = int(name)
            self.leaves[label] = label
            edge = next(e for e in self.edges if root in e)
            other = edge[0] if edge[1] == root else edge[1]
            self.edges[normalize_edge(label, other)] = self.edges.pop(edge)
        self.expect(";")
        if self.peek():
            raise self.error("';' 之后还有多余内容")
        if sorted(self.leaves) != list(range(1, len(self.leaves) + 1)):
            raise self.error(f"叶名必须恰好是 1..{len(self.leaves)}: {sorted(self.leaves)}", 0)
        return self.build()

    def build(self) -> WeightedTree:
        # 内部顶点从 max(叶名)+1 起按出现顺序编号
        base = max(self.leaves) + 1
        def vertex(v):
            return base + (-v - 1) if v < 0 else v
        weights = {(vertex(u), vertex(v)): w for (u, v), w in self.edges.items()}
        return WeightedTree(weights, self.leaves)


def parse_tree(text: str) -> WeightedTree:
    """
    解析 Newick 文本

    Args:
        text: 例如 "((1:5,2:6):1,(3:5,4:6):1,(7:5,8:5):2,(5:5,6:6):3);"

    Returns:
        校验过的 WeightedTree（叶顶点编号即叶名）
    """
    return _NewickReader(text).read()


def _canonical_root(t: WeightedTree) -> int:
    """与最小叶相邻的顶点；两叶单边树则为最小叶本身"""
    smallest = t.leaf_vertex(t.leaves[0])
    neighbor = t.neighbors(smallest)[0]
    return smallest if t.label_of(neighbor) is not None else neighbor


def serialize_tree(t: WeightedTree) -> str:
    """
    规范 Newick 输出

    根取与最小叶相邻的顶点，子树按其下最小叶名排序，
    因此输出只依赖带标签同构类。
    """
    root = _canonical_root(t)

    def render(parent: int, vertex: int) -> str:
        label = t.label_of(vertex)
        if label is not None:
            return str(label)
        below = sorted((w for w in t.neighbors(vertex) if w != parent),
                       key=lambda w: min(t.side(vertex, w)))
        return "(" + ",".join(branch(vertex, w) for w in below) + ")"

    def branch(parent: int, vertex: int) -> str:
        return f"{render(parent, vertex)}:{format_rational(t.weight((parent, vertex)))}"

    below = sorted(t.neighbors(root), key=lambda w: min(t.side(root, w)))
    text = "(" + ",".join(branch(root, w) for w in below) + ")"
    root_label = t.label_of(root)
    if root_label is not None:
        text += str(root_label)
    return text + ";"


# ----------------------------------------------------------------------
# k-差异度族文档
# ----------------------------------------------------------------------

def _parse_header(line: str, keyword: str, line_no: int) -> Tuple[int, int]:
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise ParseError(f"表头必须以 '{keyword}' 开始", line_no, 1)
    fields = {}
    for part in parts[1:]:
        key, sep, raw = part.partition("=")
        if not sep or key not in ("n", "k") or not raw.isdigit():
            raise ParseError(f"无法解析的表头字段: {part!r}", line_no, line.find(part) + 1)
        fields[key] = int(raw)
    if set(fields) != {"n", "k"}:
        raise ParseError("表头需要 n= 与 k=", line_no, 1)
    n, k = fields["n"], fields["k"]
    if n < 2:
        raise ParseError(f"表头中 n 至少为 2: n={n}", line_no, line.find("n=") + 1)
    if not 1 <= k <= n:
        raise ParseError(f"表头中 k 必须在 [1, {n}] 内: k={k}", line_no, line.find("k=") + 1)
    return n, k


def parse_dissimilarity(text: str, config_manager=None) -> KDissimilarity:
    """
    解析 k-差异度族文档

    格式：
        # 注释行
        kdissimilarity n=4 k=3
        1 2 3<TAB>6
        ...

    Returns:
        KDissimilarity

    Raises:
        ParseError: 语法错误（带行列号）
        MissingSubsetError / DuplicateSubsetError: 记录集合不完整或重复
    """
    formats = (config_manager or get_config_manager()).get_formats_config()
    keyword = formats.get("dissimilarity_header", "kdissimilarity")
    comment = formats.get("comment_prefix", "#")

    header = None
    records: Dict[Tuple[int, ...], Fraction] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(comment):
            continue
        if header is None:
            header = _parse_header(stripped, keyword, line_no)
            continue
        n, k = header
        tokens = stripped.split()
        if len(tokens) != k + 1:
            raise ParseError(f"记录需要 {k} 个叶子和一个值", line_no, 1)
        try:
            subset = tuple(int(x) for x in tokens[:-1])
        except ValueError:
            raise ParseError(f"叶名必须是整数: {tokens[:-1]}", line_no, 1) from None
        try:
            value = parse_rational(tokens[-1])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"无法解析的值: {tokens[-1]!r}", line_no,
                             line.rfind(tokens[-1]) + 1) from None
        if list(subset) != sorted(set(subset)) or subset[0] < 1 or subset[-1] > n:
            raise ParseError(f"子集必须升序、不重复且在 [1, {n}] 内: {subset}", line_no, 1)
        if subset in records:
            raise DuplicateSubsetError(f"子集重复: {subset} (行 {line_no})")
        records[subset] = value

    if header is None:
        raise ParseError("缺少表头", 1, 1)
    n, k = header
    for subset in colex_subsets(range(1, n + 1), k):
        if subset not in records:
            raise MissingSubsetError(f"缺少子集 {subset}")
    return KDissimilarity.from_mapping(n, k, records)


def serialize_dissimilarity(d: KDissimilarity, config_manager=None) -> str:
    """表头加按余字典序排列的全部记录"""
    formats = (config_manager or get_config_manager()).get_formats_config()
    lines: List[str] = [f"{formats.get('dissimilarity_header', 'kdissimilarity')} n={d.n} k={d.k}"]
    for subset, value in d.items():
        lines.append(" ".join(map(str, subset)) + "\t" + format_rational(value))
    return "\n".join(lines) + "\n"
