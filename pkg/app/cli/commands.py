"""
命令行入口
    python -m app.cli <command> [flags]

命令: polygon, polytope, puiseux, depend, expand, audit, bounds, charpair
标准输出只写 JSON；退出码 0 成功，1 判定失败，2 错误
"""
import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, TextIO

from app.cli.parser import parse_poly
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracPoly
from app.models.schemas import ErrorDetail, ErrorResponse
from app.services.toolkit_service import ToolkitService, parse_shift
from app.utils.data_loader import load_bindings_from_file

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_ERROR = 2


class _ArgumentParser(argparse.ArgumentParser):
    """参数错误抛出 ToolkitError，而不是直接退出进程"""

    def error(self, message: str):
        raise ToolkitError(message, stage="cli")


def _add_poly_flags(parser: argparse.ArgumentParser, g: bool = True, g_required: bool = True) -> None:
    parser.add_argument("--f", required=True, help="多项式或 --file 中的绑定名")
    if g:
        parser.add_argument("--g", required=g_required, help="多项式或 --file 中的绑定名")
    parser.add_argument("--file", help="每行一个 name = poly 绑定的文件")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="python -m app.cli", description="Newton 多面体审计工具")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    polygon = commands.add_parser("polygon", help="f 的 Newton 多边形")
    _add_poly_flags(polygon, g=False)

    polytope = commands.add_parser("polytope", help="N(P) 与形状审计")
    _add_poly_flags(polytope, g_required=False)

    puiseux = commands.add_parser("puiseux", help="Newton-Puiseux 分支")
    _add_poly_flags(puiseux, g=False)
    puiseux.add_argument("--order", default="8")
    puiseux.add_argument("--dir", default="inc", choices=["inc", "dec", "increasing", "decreasing"])
    puiseux.add_argument("--digits", type=int, default=None)

    depend = commands.add_parser("depend", help="f, g 的依赖关系 P")
    _add_poly_flags(depend)

    expand = commands.add_parser("expand", help="g 关于 f 的展开")
    _add_poly_flags(expand)
    expand.add_argument("--floor", type=int, default=-8)
    expand.add_argument("--complete", action="store_true", help="系数取 L_n 的完整展开")
    expand.add_argument("--no-jacobian-check", action="store_true", help="跳过 J(f, g) = 1 的前置检查")

    audit = commands.add_parser("audit", help="完整审计报告")
    _add_poly_flags(audit)
    audit.add_argument("--shift", help="一般位置平移 c1,c2")

    bounds = commands.add_parser("bounds", help="Φ_a 的界")
    bounds.add_argument("--params", required=True, help="m,n,a0,b0")

    charpair = commands.add_parser("charpair", help="两个特征对情形的矛盾")
    charpair.add_argument("--params", required=True, help="a,b,a0,b0")
    return parser


def _params(text: str) -> List[int]:
    try:
        values = [int(p) for p in text.split(",")]
    except ValueError:
        raise ToolkitError(f"--params must be four integers, got {text!r}", stage="cli")
    if len(values) != 4:
        raise ToolkitError(f"--params must be four integers, got {text!r}", stage="cli")
    return values


class _Resolver:
    """--f / --g 的取值：--file 中的绑定名优先，否则按表达式解析"""

    def __init__(self, file_path: Optional[str]):
        self.bindings: Dict[str, FracPoly] = load_bindings_from_file(file_path) if file_path else {}

    def __call__(self, text: Optional[str]) -> Optional[FracPoly]:
        if text is None:
            return None
        key = text.strip()
        if key in self.bindings:
            return self.bindings[key]
        return parse_poly(text)


def _dispatch(args: argparse.Namespace, service: ToolkitService):
    if args.command == "bounds":
        return service.bounds(*_params(args.params))
    if args.command == "charpair":
        return service.charpair(*_params(args.params))

    resolve = _Resolver(args.file)
    f = resolve(args.f)
    g = resolve(getattr(args, "g", None))
    handlers: Dict[str, Callable] = {
        "polygon": lambda: service.polygon(f),
        "polytope": lambda: service.polytope(f, g),
        "puiseux": lambda: service.puiseux(f, args.dir, args.order, args.digits),
        "depend": lambda: service.depend(f, g),
        "expand": lambda: service.expand(f, g, args.floor, args.complete,
                                         check_jacobian=not args.no_jacobian_check),
        "audit": lambda: service.audit(f, g, parse_shift(args.shift)),
    }
    return handlers[args.command]()


def _emit(document: dict, out: TextIO) -> None:
    out.write(json.dumps(document, ensure_ascii=False, indent=2))
    out.write("\n")


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    执行一条命令

    参数:
        argv: 命令行参数（不含程序名），默认 sys.argv[1:]
        out: JSON 输出流，默认标准输出

    返回:
        退出码
    """
    out = out or sys.stdout
    stage = "cli"
    try:
        args = build_parser().parse_args(argv)
        stage = args.command
        model, ok = _dispatch(args, ToolkitService())
        _emit(model.model_dump(by_alias=True), out)
        return EXIT_OK if ok else EXIT_VERDICT
    except ToolkitError as e:
        logger.warning(f"命令失败: {e.message}")
        error = ErrorResponse(error=ErrorDetail(**e.with_stage(stage).to_dict()))
    except Exception as e:
        logger.error(f"命令出现意外错误: {e}", exc_info=True)
        error = ErrorResponse(error=ErrorDetail(stage=stage, message=str(e)))
    _emit(error.model_dump(), out)
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())
