#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
k-差异度族工具 - 命令行入口

用法示例：
    python kweight_tool.py weights --tree tree.nwk --k 5 > family.txt
    python kweight_tool.py reconstruct --dissim family.txt
    python kweight_tool.py range --dissim family.txt --positive
"""
import sys

from src.core.cli import main

if __name__ == "__main__":
    sys.exit(main())
