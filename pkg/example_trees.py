# -*- coding: utf-8 -*-
"""
测试共用的示例树

八叶示例：左树有一条 4|4 的中心边（权重 10），对它做 5-IO 得到右树（伪星树）。
两棵树的 5-差异度族相同。
"""
from src.core.tree_core import build_tree, star_tree

# 左树顶点：叶 1..8，樱桃柄 9={1,2} 10={3,4} 11={5,6} 12={7,8}，中心 13、14
LEFT_EDGES = [
    (1, 9, 5), (2, 9, 6), (3, 10, 5), (4, 10, 6),
    (5, 11, 5), (6, 11, 6), (7, 12, 5), (8, 12, 5),
    (9, 13, 1), (10, 13, 1), (13, 14, 10), (11, 14, 3), (12, 14, 2),
]

RIGHT_EDGES = [
    (1, 9, 7), (2, 9, 8), (3, 10, 7), (4, 10, 8),
    (5, 11, 7), (6, 11, 8), (7, 12, 7), (8, 12, 7),
    (9, 13, 1), (10, 13, 1), (11, 13, 3), (12, 13, 2),
]

RIGHT_NEWICK = "((1:7,2:8):1,(3:7,4:8):1,(7:7,8:7):2,(5:7,6:8):3);"

EIGHT_LEAVES = {label: label for label in range(1, 9)}


def left_tree():
    return build_tree(LEFT_EDGES, EIGHT_LEAVES)


def right_tree():
    return build_tree(RIGHT_EDGES, EIGHT_LEAVES)


def small_star():
    """四叶星，叶枝 1,2,3,4；3-差异度为 6,7,8,9"""
    return star_tree({1: 1, 2: 2, 3: 3, 4: 4})


def caterpillar_six():
    """六叶毛毛虫 ((1,2),3,4,(5,6))，边权各不相同"""
    edges = [
        (1, 7, 2), (2, 7, 3), (7, 8, 4), (3, 8, 5),
        (8, 9, 6), (4, 9, 7), (9, 10, 8), (5, 10, 9), (6, 10, 1),
    ]
    return build_tree(edges, {label: label for label in range(1, 7)})
