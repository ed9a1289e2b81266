# -*- coding: utf-8 -*-
"""
异常定义

UsageError 类异常对应命令行退出码 1（用法/解析错误），
DomainError 类异常对应退出码 2（输入不满足数学前提）。
"""


class KWeightError(Exception):
    """所有库异常的基类"""

    exit_code = 2


class UsageError(KWeightError):
    exit_code = 1


class DomainError(KWeightError):
    exit_code = 2


# ---- 树结构 ----

class NotATreeError(DomainError):
    """边列表含环或不连通"""


class BadLabelingError(DomainError):
    """叶标签缺失、重复或标在度数>1的顶点上"""


class BadSubsetError(DomainError):
    """叶子集合不在 [n] 内或规模不合法"""


class NotInternalError(DomainError):
    """边位于某个叶枝（twig）上"""


class NotEssentialError(DomainError):
    """树含有度数为2的非叶顶点"""


class BadKError(DomainError):
    """k 超出允许范围"""


class ShapeMismatchError(DomainError):
    """两个差异度族（或树与族）的 n、k 不一致"""


# ---- 重建 ----

class NotTreelikeError(DomainError):
    """差异度族无法由伪星树实现"""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AmbiguousError(NotTreelikeError):
    """同一个四元组有多个配对满足判定条件"""


class InconsistentError(NotTreelikeError):
    """四元组解析结果无法拼成一棵树"""


class NoValidWitnessError(DomainError):
    """找不到计算内部边权所需的 (i,j,l,m,R)"""


class InconsistentSystemError(NotTreelikeError):
    """叶枝权重方程组自相矛盾"""


# ---- 变换 ----

class NotIoEligibleError(DomainError):
    """边的两侧至少有一侧叶子数 ≥ k"""


class BadInsertionError(DomainError):
    """OI 插入的分块不合法"""


class NegativeTwigError(DomainError):
    """要求正权时某个叶枝权重会变为 ≤ 0"""


class NotPseudostarError(DomainError):
    """树不是 (n,k) 型的本质伪星树"""


# ---- 预言机 ----

class InfeasibleSpecError(DomainError):
    """随机生成参数无法满足"""


class TooLargeError(DomainError):
    """超出穷举规模上限"""


# ---- 文件格式 ----

class ParseError(UsageError):
    """文本解析失败，带行列位置"""

    def __init__(self, message, line=None, column=None):
        location = ""
        if line is not None:
            location = f" (行 {line}" + (f", 列 {column})" if column is not None else ")")
        super().__init__(message + location)
        self.line = line
        self.column = column


class MissingSubsetError(UsageError):
    """差异度文件缺少某个 k 子集"""


class DuplicateSubsetError(UsageError):
    """差异度文件中某个 k 子集重复出现"""
