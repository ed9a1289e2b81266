# -*- coding: utf-8 -*-
"""
精确有理数高斯消元

用于暴力预言机：在给定拓扑上按边权解线性方程组 {D_I = d[I]}。
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence


@dataclass(frozen=True)
class LinearSolution:
    """
    线性方程组的解

    Attributes:
        values: 一个特解（自由变量取0）
        free_columns: 自由变量的列号；非空表示解空间为参数族
        null_basis: 齐次方程组的基，每个自由变量一个向量
    """
    values: List[Fraction]
    free_columns: List[int]
    null_basis: List[List[Fraction]] = field(default_factory=list)

    @property
    def free_dimension(self) -> int:
        return len(self.free_columns)

    def point(self, parameters: Sequence[Fraction]) -> List[Fraction]:
        """特解 + Σ parameters[i]·null_basis[i]"""
        result = list(self.values)
        for t, vector in zip(parameters, self.null_basis):
            for c, x in enumerate(vector):
                result[c] += t * x
        return result


def row_echelon(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[int]:
    """
    原地化为行阶梯形

    Args:
        matrix: 系数矩阵（会被修改）
        rhs: 右端项（会被修改）

    Returns:
        自由变量列号列表
    """
    free_columns = []
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if n_rows else 0
    pivot_row = 0
    for pivot_col in range(n_cols):
        for row in range(pivot_row, n_rows):
            if matrix[row][pivot_col] != 0:
                break
        else:
            free_columns.append(pivot_col)
            continue
        if row != pivot_row:
            matrix[pivot_row], matrix[row] = matrix[row], matrix[pivot_row]
            rhs[pivot_row], rhs[row] = rhs[row], rhs[pivot_row]
        pivot = matrix[pivot_row][pivot_col]
        for r in range(pivot_row + 1, n_rows):
            factor = matrix[r][pivot_col]
            if factor == 0:
                continue
            factor = factor / pivot
            for c in range(pivot_col, n_cols):
                matrix[r][c] -= matrix[pivot_row][c] * factor
            rhs[r] -= rhs[pivot_row] * factor
        pivot_row += 1
    return free_columns


def back_substitute(matrix, rhs, free_columns,
                    free_values: Optional[Dict[int, Fraction]] = None) -> Optional[List[Fraction]]:
    """
    回代求解；方程组矛盾时返回 None

    Args:
        free_values: 自由变量的取值（默认全为0）
    """
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if n_rows else 0
    rank = n_cols - len(free_columns)
    for r in range(rank, n_rows):
        if rhs[r] != 0:
            return None

    free = set(free_columns)
    pivot_cols = [c for c in range(n_cols) if c not in free]
    solution = [Fraction(0)] * n_cols
    for c, value in (free_values or {}).items():
        solution[c] = Fraction(value)
    for r in range(len(pivot_cols) - 1, -1, -1):
        col = pivot_cols[r]
        s = -rhs[r]
        for c in range(col + 1, n_cols):
            s += matrix[r][c] * solution[c]
        solution[col] = -s / matrix[r][col]
    return solution


def solve_exact(coefficients: Sequence[Sequence[int]],
                values: Sequence[Fraction]) -> Optional[LinearSolution]:
    """
    求解 A·x = b（精确有理数）

    Args:
        coefficients: 系数矩阵 A（每行一个方程）
        values: 右端项 b

    Returns:
        LinearSolution（含零空间基），方程组无解时返回 None
    """
    matrix = [[Fraction(a) for a in row] for row in coefficients]
    rhs = [Fraction(b) for b in values]
    if not matrix:
        return LinearSolution(values=[], free_columns=[])
    free_columns = row_echelon(matrix, rhs)
    solution = back_substitute(matrix, rhs, free_columns)
    if solution is None:
        return None

    zeros = [Fraction(0)] * len(rhs)
    basis = [back_substitute(matrix, zeros, free_columns, {c: Fraction(1)})
             for c in free_columns]
    return LinearSolution(values=solution, free_columns=free_columns, null_basis=basis)
