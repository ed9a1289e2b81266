# -*- coding: utf-8 -*-
"""
并行映射工具 - 进程池 + tqdm 进度条，结果顺序与输入一致
"""
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from tqdm import tqdm

from src.utils.config_manager import get_config_manager

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], desc: str = "",
                 config_manager=None, max_workers: Optional[int] = None) -> List[R]:
    """
    对 items 逐个调用 fn

    数量低于 min_parallel_items 或只有一个进程时串行执行；
    否则使用进程池分块映射。无论如何调度，返回顺序都与输入一致。

    Args:
        fn: 可被 pickle 的模块级函数（或其 functools.partial）
        items: 输入序列
        desc: 进度条描述
        config_manager: 配置管理器实例
        max_workers: 覆盖配置/环境变量中的进程数

    Returns:
        结果列表
    """
    config_manager = config_manager or get_config_manager()
    parallel = config_manager.get_parallel_config()
    workers = max_workers or config_manager.max_workers()
    show = parallel.get("show_progress", True) and bool(desc) and sys.stderr.isatty()

    if workers <= 1 or len(items) < parallel.get("min_parallel_items", 2000):
        return [fn(item) for item in tqdm(items, desc=desc, disable=not show)]

    chunk_size = max(1, min(parallel.get("chunk_size", 256), len(items) // workers or 1))
    logger.info("📦 并行计算 %s: %d 项, %d 个进程", desc or getattr(fn, "__name__", "task"), len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        results = executor.map(fn, items, chunksize=chunk_size)
        return list(tqdm(results, total=len(items), desc=desc, disable=not show))
