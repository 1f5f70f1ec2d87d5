"""
语料库批量审计脚本
生成带种子的随机多项式对与若干自同构 Jacobian 对，逐对运行完整审计，
汇总表写成 CSV，报告保存为审计记录

用法:
    python -m app.scripts.run_corpus [--seed N] [--size N] [--output corpus_summary.csv] [--input pairs.csv]
"""
import argparse
import logging
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

# 将项目根目录添加到路径
ROOT_DIR = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(ROOT_DIR))

from app import config  # noqa: E402
from app.audit import full_report  # noqa: E402
from app.core.dependence import verify_dependence  # noqa: E402
from app.core.exact_algebra import FracPoly, X, Y  # noqa: E402

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Pair = Tuple[str, FracPoly, FracPoly]

# 随机多项式的形状
MAX_DEG_Y = 6
MAX_DEG_X = 3
COEFF_RANGE = 3
TERM_DENSITY = 0.4


def automorphic_pairs() -> List[Pair]:
    """五个手工构造的自同构 Jacobian 对"""
    u = Y + X ** 2
    return [
        ("auto-1", X + Y ** 2, Y),
        ("auto-2", Y, Y ** 3 - X),
        ("auto-3", X + Y ** 3, Y),
        ("auto-4", X + Y ** 2, Y + (X + Y ** 2) ** 2),
        ("auto-5", X + u ** 3, u),
    ]


def random_poly(rng: random.Random, deg_y: int) -> FracPoly:
    """y 次数恰为 deg_y、y 首项系数为非零常数的随机整系数多项式"""
    lead = rng.choice([c for c in range(-COEFF_RANGE, COEFF_RANGE + 1) if c != 0])
    p = FracPoly.monomial(lead, y=deg_y)
    for j in range(deg_y):
        for i in range(MAX_DEG_X + 1):
            if rng.random() < TERM_DENSITY:
                p = p + FracPoly.monomial(rng.randint(-COEFF_RANGE, COEFF_RANGE), x=i, y=j)
    return p


def random_pairs(seed: int, size: int) -> List[Pair]:
    """
    带种子的随机对

    参数:
        seed: 随机种子
        size: 对数

    返回:
        [(名称, f, g)]，f、g 的 deg_y 各自在 1..6 内均匀抽取
    """
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < size:
        ny_f = rng.randint(1, MAX_DEG_Y)
        ny_g = rng.randint(1, MAX_DEG_Y)
        f = random_poly(rng, ny_f)
        g = random_poly(rng, ny_g)
        pairs.append((f"random-{len(pairs) + 1}", f, g))
    return pairs


def build_corpus(seed: Optional[int] = None, size: Optional[int] = None) -> List[Pair]:
    """随机对 + 自同构对"""
    seed = config.CORPUS_SEED if seed is None else seed
    size = config.CORPUS_SIZE if size is None else size
    return random_pairs(seed, size) + automorphic_pairs()


def audit_one(pair: Pair) -> dict:
    """审计一对，返回汇总行与报告"""
    name, f, g = pair
    start = time.perf_counter()
    try:
        report = full_report(f, g)
    except Exception as e:
        logger.error(f"{name} 审计失败: {e}")
        return {"name": name, "f": str(f), "g": str(g), "error": str(e), "report": None}
    dependence = report.dependence
    row = {
        "name": name,
        "f": str(f),
        "g": str(g),
        "jacobian_pair": report.audit.get("jacobian_unimodular").passed,
        "P": None if dependence is None else str(dependence.P),
        "verified": None if dependence is None else verify_dependence(dependence, f, g),
        "deg_G": None if dependence is None else int(dependence.P.degree("G")),
        "extension_degree": report.degree_estimate.get("extension_degree"),
        "edge_ok": None if report.edge is None else report.edge.ok,
        "shape_ok": None if report.shape is None else report.shape.passed,
        "stage_errors": len(report.errors),
        "seconds": round(time.perf_counter() - start, 3),
        "error": None,
        "report": report,
    }
    return row


def run_corpus(pairs: List[Pair], workers: int = 4, db=None) -> pd.DataFrame:
    """
    并发审计语料库

    参数:
        pairs: [(名称, f, g)]
        workers: 线程数
        db: 可选数据库会话，给出时保存审计记录

    返回:
        汇总表
    """
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(audit_one, pairs))

    if db is not None:
        from app.services.toolkit_service import ToolkitService
        service = ToolkitService(db)
        for (name, f, g), row in zip(pairs, rows):
            if row["report"] is not None:
                service.save_record(name, service.report_model(f, g, row["report"]))

    df = pd.DataFrame([{k: v for k, v in row.items() if k != "report"} for row in rows])
    logger.info(f"语料库审计完成: {len(df)} 对, 验证通过 {int(df['verified'].fillna(False).sum())} 对")
    return df


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="语料库批量审计")
    parser.add_argument("--seed", type=int, default=config.CORPUS_SEED)
    parser.add_argument("--size", type=int, default=config.CORPUS_SIZE)
    parser.add_argument("--input", help="name,f,g 三列的 CSV，给出时替代随机语料库")
    parser.add_argument("--output", default="corpus_summary.csv")
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--no-db", action="store_true", help="不保存审计记录")
    args = parser.parse_args(argv)

    if args.input:
        from app.utils.data_loader import load_pairs_from_csv
        pairs = load_pairs_from_csv(args.input)
    else:
        pairs = build_corpus(args.seed, args.size)

    db = None
    if not args.no_db:
        from app.database import SessionLocal
        from app.database.init_db import init_database
        init_database()
        db = SessionLocal()
    try:
        df = run_corpus(pairs, args.workers, db)
    finally:
        if db is not None:
            db.close()
    df.to_csv(args.output, index=False)
    logger.info(f"汇总表已写入 {args.output}")
    return 0 if df["error"].isna().all() else 1


if __name__ == "__main__":
    sys.exit(main())
