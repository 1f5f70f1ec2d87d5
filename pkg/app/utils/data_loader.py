"""
数据加载工具
支持从绑定文件与 CSV 语料库加载多项式
"""
import logging
import os
from typing import Dict, List, Tuple

import pandas as pd

from app.cli.parser import parse_poly
from app.core.errors import PolySyntaxError, ToolkitError
from app.core.exact_algebra import FracPoly

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

PAIR_COLUMNS = ["name", "f", "g"]


def load_bindings_from_file(file_path: str) -> Dict[str, FracPoly]:
    """
    读取 `name = poly` 绑定文件，每行一个绑定；空行与 # 开头的行忽略

    参数:
        file_path: 文件路径

    返回:
        名称到多项式的映射
    """
    if not os.path.exists(file_path):
        raise ToolkitError(f"文件不存在: {file_path}", stage="input")
    bindings: Dict[str, FracPoly] = {}
    with open(file_path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            name, sep, expr = text.partition("=")
            name = name.strip()
            if not sep or not name.isidentifier():
                raise ToolkitError(f"{file_path}:{number}: expected 'name = poly'", stage="input")
            try:
                bindings[name] = parse_poly(expr)
            except PolySyntaxError as e:
                raise ToolkitError(f"{file_path}:{number}: {e.message}", stage="parse")
    logger.info(f"从 {file_path} 加载 {len(bindings)} 个绑定")
    return bindings


def load_pairs_from_csv(file_path: str) -> List[Tuple[str, FracPoly, FracPoly]]:
    """
    读取 name,f,g 三列的 CSV 语料库

    返回:
        [(名称, f, g)]
    """
    if not os.path.exists(file_path):
        raise ToolkitError(f"文件不存在: {file_path}", stage="input")
    df = pd.read_csv(file_path, dtype=str)
    missing = [c for c in PAIR_COLUMNS if c not in df.columns]
    if missing:
        raise ToolkitError(f"CSV 缺少列: {missing}", stage="input")
    pairs = []
    for row in df[PAIR_COLUMNS].itertuples(index=False):
        pairs.append((row.name, parse_poly(row.f), parse_poly(row.g)))
    logger.info(f"从 {file_path} 加载 {len(pairs)} 对多项式")
    return pairs


def save_pairs_to_csv(pairs: List[Tuple[str, FracPoly, FracPoly]], file_path: str) -> None:
    """把 (名称, f, g) 列表写成 CSV，多项式使用可回读的规范打印"""
    df = pd.DataFrame([(name, str(f), str(g)) for name, f, g in pairs], columns=PAIR_COLUMNS)
    df.to_csv(file_path, index=False)
