# -*- coding: utf-8 -*-
"""
命令行入口

子命令：weights / reconstruct / check / normalize / range / transform / random。
文档写到标准输出，状态与错误写到标准错误。
退出码：0 成功，1 用法或解析错误，2 领域错误。
"""
import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from src.core.dissimilarity import k_vector
from src.core.errors import (
    BadInsertionError,
    DomainError,
    KWeightError,
    NotIoEligibleError,
    NotTreelikeError,
    UsageError,
)
from src.core.formats import (
    parse_dissimilarity,
    parse_tree,
    serialize_dissimilarity,
    serialize_tree,
)
from src.core.oracle import RandomSpec, random_pseudostar
from src.core.reconstruction import reconstruct, verify_realization
from src.core.transforms import (
    OiInsertion,
    find_insertion,
    io_eligible_edges,
    k_io,
    k_oi,
    pseudostar_normal_form,
)
from src.core.weight_range import find_oi_insertion, range_of_family
from src.utils.config_manager import get_config_manager


class _Parser(argparse.ArgumentParser):
    """用法错误抛出 UsageError（退出码 1），不直接退出"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise UsageError(f"无法读取文件 {path}: {exc.strerror}") from None


def _labels(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"叶集格式应为逗号分隔的整数: {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"不是有理数: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kweight_tool", description="k-差异度族与伪星树工具")
    parser.add_argument("--log-level", default=None,
                        help="日志级别（默认取 config.py 的 LOGGING_CONFIG）")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("weights", help="计算树的 k-差异度族")
    p.add_argument("--tree", required=True, help="Newick 文件（- 表示标准输入）")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("reconstruct", help="由 k-差异度族重建伪星树")
    p.add_argument("--dissim", required=True, help="差异度文件")

    p = sub.add_parser("check", help="检查树是否实现给定的差异度族")
    p.add_argument("--tree", required=True)
    p.add_argument("--dissim", required=True)

    p = sub.add_parser("normalize", help="伪星范式")
    p.add_argument("--tree", required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("range", help="实现的总权重范围")
    p.add_argument("--dissim", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--positive", dest="positive", action="store_true", default=True,
                      help="正权实现（默认）")
    mode.add_argument("--general", dest="positive", action="store_false",
                      help="一般权重实现")

    p = sub.add_parser("transform", help="k-IO / k-OI 变换")
    p.add_argument("kind", choices=["io", "oi"])
    p.add_argument("--tree", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--split", default=None,
                   help="io: 被收缩边的一侧叶集；oi: 新边分出的一侧叶集（逗号分隔）")
    p.add_argument("--weight", type=_rational, default=None, help="oi: 新边权重 y")
    p.add_argument("--positive", action="store_true", help="oi: 要求结果为正权树")

    p = sub.add_parser("random", help="随机 (n,k) 型伪星树")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--positive", action="store_true", help="内部边也取正权")
    p.add_argument("--denominator", type=int, default=None, help="权重网格分母")
    return parser


def _cmd_weights(args, config_manager) -> int:
    tree = parse_tree(_read_text(args.tree))
    d = k_vector(tree, args.k, config_manager)
    sys.stdout.write(serialize_dissimilarity(d, config_manager))
    return 0


def _cmd_reconstruct(args, config_manager) -> int:
    d = parse_dissimilarity(_read_text(args.dissim), config_manager)
    report = reconstruct(d, strict=True, config_manager=config_manager)
    sys.stdout.write(serialize_tree(report.tree) + "\n")
    print(f"✓ 验证通过: 伪星树实现了 n={d.n}, k={d.k} 的差异度族", file=sys.stderr)
    return 0


def _cmd_check(args, config_manager) -> int:
    tree = parse_tree(_read_text(args.tree))
    d = parse_dissimilarity(_read_text(args.dissim), config_manager)
    ok, witness = verify_realization(tree, d, config_manager)
    if not ok:
        raise NotTreelikeError(f"树不实现该族，第一个不一致的子集: {witness}", witness)
    print("✓ 树实现了该差异度族", file=sys.stderr)
    return 0


def _cmd_normalize(args, config_manager) -> int:
    tree = parse_tree(_read_text(args.tree))
    sys.stdout.write(serialize_tree(pseudostar_normal_form(tree, args.k)) + "\n")
    return 0


def _cmd_range(args, config_manager) -> int:
    d = parse_dissimilarity(_read_text(args.dissim), config_manager)
    result = range_of_family(d, positive=args.positive, config_manager=config_manager)
    sys.stdout.write(result.describe() + "\n")
    return 0


def _cmd_transform(args, config_manager) -> int:
    tree = parse_tree(_read_text(args.tree))
    if args.kind == "io":
        if args.split:
            edge = tree.edge_by_split(_labels(args.split))
        else:
            eligible = io_eligible_edges(tree, args.k)
            if not eligible:
                raise NotIoEligibleError(f"没有两侧叶子数都 < k={args.k} 的边")
            edge = eligible[0]
        result = k_io(tree, edge, args.k)
    else:
        if args.weight is None:
            raise UsageError("transform oi 需要 --weight")
        if args.split:
            insertion = find_insertion(tree, _labels(args.split), args.weight)
        else:
            insertion = find_oi_insertion(tree, args.k, args.weight)
            if insertion is None:
                raise BadInsertionError(f"没有可行的 {args.k}-OI 插入点")
        insertion = OiInsertion(insertion.at_vertex, insertion.branch_bipartition, args.weight)
        result = k_oi(tree, insertion, args.k, require_positive=args.positive)
    sys.stdout.write(serialize_tree(result) + "\n")
    return 0


def _cmd_random(args, config_manager) -> int:
    overrides = {"positive": args.positive}
    if args.denominator is not None:
        overrides["denominator"] = args.denominator
    spec = RandomSpec.from_config(args.n, args.k, args.seed, config_manager, **overrides)
    sys.stdout.write(serialize_tree(random_pseudostar(spec)) + "\n")
    return 0


_COMMANDS = {
    "weights": _cmd_weights,
    "reconstruct": _cmd_reconstruct,
    "check": _cmd_check,
    "normalize": _cmd_normalize,
    "range": _cmd_range,
    "transform": _cmd_transform,
    "random": _cmd_random,
}


def cli_dispatch(argv: Optional[List[str]] = None, config_manager=None) -> int:
    """
    解析参数并执行子命令

    Args:
        argv: 参数列表（默认 sys.argv[1:]）

    Returns:
        退出码
    """
    config_manager = config_manager or get_config_manager()
    try:
        args = build_parser().parse_args(argv)
        config_manager.setup_logging(args.log_level)
        if not config_manager.validate_config():
            raise UsageError("配置无效，请检查 config.py")
        return _COMMANDS[args.command](args, config_manager)
    except NotTreelikeError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"   witness: {exc.witness}", file=sys.stderr)
        return exc.exit_code
    except (UsageError, DomainError) as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return exc.exit_code
    except KWeightError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 2


def main() -> int:
    return cli_dispatch(sys.argv[1:])
