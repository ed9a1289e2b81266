# -*- coding: utf-8 -*-
"""
KWeight配置文件
包含所有可调参数，实现代码与配置的解耦
"""

# 重建配置
RECONSTRUCTION = {
    # 验证策略
    "strict_verification": True,     # 验证失败时抛出 NotTreelikeError（否则返回 verified=False 的报告）
    "contract_zero_internal": True,  # 求解后收缩权重为0的内部边

    # 内部边公式常数（已用暴力预言机校准）
    "internal_edge_factor": 1,       # 四元组+R组合 = factor · w(e)
}

# 并行计算配置
PARALLEL = {
    "max_workers": None,             # None = 全部CPU核心
    "threads_env_var": "THREADS",    # 可选环境变量，限制并行数
    "min_parallel_items": 2000,      # 少于此数量时串行计算
    "chunk_size": 256,               # 进程池 map 的分块大小
    "show_progress": True,           # 显示tqdm进度条（仅终端）
}

# 暴力预言机配置
ORACLE = {
    "max_enumeration_leaves": 9,     # 拓扑枚举上限 n ≤ 9
}

# 随机树生成配置
RANDOM_GENERATION = {
    "weight_bounds": (1, 10),        # 边权范围（含端点）
    "denominator": 1,                # 权重分母（1 = 整数权重）
    "node_attach_probability": 0.3,  # 新叶子挂在已有节点上的概率（产生多叉）
    "positive": True,                # 默认生成内部边正权的树
}

# 文件格式配置
FORMATS = {
    "dissimilarity_header": "kdissimilarity",  # 差异度文件头关键字
    "comment_prefix": "#",                     # 注释行前缀
}

# 日志配置
LOGGING_CONFIG = {
    "level": "WARNING",              # 日志级别
    "format": "%(asctime)s - %(levelname)s - %(message)s",
    "file": None,                    # 日志文件（None = 仅输出到stderr）
    "max_size": 10 * 1024 * 1024,    # 最大文件大小 10MB
    "backup_count": 5,               # 备份文件数量
}
