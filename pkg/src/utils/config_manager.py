# -*- coding: utf-8 -*-
"""
配置管理工具
提供配置的加载、验证和日志初始化功能
"""
import copy
import logging
import logging.handlers
import os
import sys
from functools import lru_cache

logger = logging.getLogger(__name__)

_SECTIONS = (
    "RECONSTRUCTION",
    "PARALLEL",
    "ORACLE",
    "RANDOM_GENERATION",
    "FORMATS",
    "LOGGING_CONFIG",
)

_DEFAULT_CONFIG = {
    "RECONSTRUCTION": {
        "strict_verification": True,
        "contract_zero_internal": True,
        "internal_edge_factor": 1,
    },
    "PARALLEL": {
        "max_workers": None,
        "threads_env_var": "THREADS",
        "min_parallel_items": 2000,
        "chunk_size": 256,
        "show_progress": True,
    },
    "ORACLE": {
        "max_enumeration_leaves": 9,
    },
    "RANDOM_GENERATION": {
        "weight_bounds": (1, 10),
        "denominator": 1,
        "node_attach_probability": 0.3,
        "positive": True,
    },
    "FORMATS": {
        "dissimilarity_header": "kdissimilarity",
        "comment_prefix": "#",
    },
    "LOGGING_CONFIG": {
        "level": "WARNING",
        "format": "%(asctime)s - %(levelname)s - %(message)s",
        "file": None,
        "max_size": 10 * 1024 * 1024,
        "backup_count": 5,
    },
}


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_file=None):
        """
        初始化配置管理器

        Args:
            config_file: 配置文件路径（默认为项目根目录的 config.py）
        """
        if config_file is None:
            root = os.path.join(os.path.dirname(__file__), "..", "..")
            config_file = os.path.normpath(os.path.join(root, "config.py"))
        self.config_file = config_file
        self.config = {}
        self.load_config()

    def load_config(self):
        """加载配置文件"""
        try:
            if os.path.exists(self.config_file):
                # 动态导入配置文件
                import importlib.util
                spec = importlib.util.spec_from_file_location("kweight_config", self.config_file)
                config_module = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(config_module)

                self.config = copy.deepcopy(_DEFAULT_CONFIG)
                for section in _SECTIONS:
                    self.config[section].update(getattr(config_module, section, {}))
                logger.debug("✓ 配置文件加载成功: %s", self.config_file)
            else:
                logger.warning("❌ 配置文件不存在: %s", self.config_file)
                self._create_default_config()
        except Exception as e:
            logger.warning("❌ 配置文件加载失败: %s", e)
            self._create_default_config()

    def _create_default_config(self):
        """创建默认配置"""
        self.config = copy.deepcopy(_DEFAULT_CONFIG)
        logger.debug("✓ 使用默认配置")

    def get(self, section, key=None, default=None):
        """
        获取配置值

        Args:
            section: 配置节名称
            key: 配置键名称
            default: 默认值

        Returns:
            配置值
        """
        if key is None:
            return self.config.get(section, default)
        section_config = self.config.get(section, {})
        if isinstance(section_config, dict):
            return section_config.get(key, default)
        return default

    def set(self, section, key, value):
        """设置配置值"""
        self.config.setdefault(section, {})[key] = value

    def get_reconstruction_config(self):
        """获取重建配置"""
        return self.get("RECONSTRUCTION") or {}

    def get_parallel_config(self):
        """获取并行计算配置"""
        return self.get("PARALLEL") or {}

    def get_oracle_config(self):
        """获取预言机配置"""
        return self.get("ORACLE") or {}

    def get_random_config(self):
        """获取随机生成配置"""
        return self.get("RANDOM_GENERATION") or {}

    def get_formats_config(self):
        """获取文件格式配置"""
        return self.get("FORMATS") or {}

    def get_logging_config(self):
        """获取日志配置"""
        return self.get("LOGGING_CONFIG") or {}

    def max_workers(self):
        """
        计算可用的并行进程数

        THREADS 环境变量优先，其次是配置中的 max_workers，最后是CPU核心数。

        Returns:
            进程数（至少为1）
        """
        parallel = self.get_parallel_config()
        env_value = os.environ.get(parallel.get("threads_env_var", "THREADS"))
        if env_value:
            try:
                return max(1, int(env_value))
            except ValueError:
                logger.warning("❌ 无效的并行数环境变量: %r", env_value)
        configured = parallel.get("max_workers")
        if configured:
            return max(1, int(configured))
        return os.cpu_count() or 1

    def validate_config(self):
        """验证配置的有效性"""
        try:
            factor = self.get("RECONSTRUCTION", "internal_edge_factor", 1)
            if factor not in (1, 2):
                logger.error("❌ 内部边公式常数必须为1或2")
                return False

            low, high = self.get("RANDOM_GENERATION", "weight_bounds", (1, 10))
            if low > high:
                logger.error("❌ 权重范围无效")
                return False
            if self.get("RANDOM_GENERATION", "denominator", 1) < 1:
                logger.error("❌ 权重分母必须为正")
                return False

            cap = self.get("ORACLE", "max_enumeration_leaves", 9)
            if not (3 <= cap <= 9):
                logger.error("❌ 拓扑枚举上限超出范围")
                return False

            logger.debug("✓ 配置验证通过")
            return True
        except Exception as e:
            logger.error("❌ 配置验证失败: %s", e)
            return False

    def setup_logging(self, level=None):
        """
        按 LOGGING_CONFIG 初始化日志

        日志只写入stderr（以及可选的滚动日志文件），stdout保留给命令行输出的文档。

        Args:
            level: 覆盖配置中的日志级别
        """
        log_config = self.get_logging_config()
        root = logging.getLogger()
        root.setLevel(level or log_config.get("level", "WARNING"))
        formatter = logging.Formatter(log_config.get("format"))

        for handler in list(root.handlers):
            if getattr(handler, "_kweight", False):
                root.removeHandler(handler)

        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(formatter)
        stream._kweight = True
        root.addHandler(stream)

        log_file = log_config.get("file")
        if log_file:
            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=log_config.get("max_size", 10 * 1024 * 1024),
                backupCount=log_config.get("backup_count", 5),
                encoding="utf-8",
            )
            file_handler.setFormatter(formatter)
            file_handler._kweight = True
            root.addHandler(file_handler)


@lru_cache(maxsize=None)
def get_config_manager():
    """进程内共享的默认配置管理器"""
    return ConfigManager()
