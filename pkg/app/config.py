"""
全局配置
从环境变量（.env）读取运行参数
"""
import os
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

# 数据库
DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///./newton_audit.db")

# 服务
DEBUG = os.getenv("DEBUG", "False").lower() == "true"
PORT = int(os.getenv("PORT", "8000"))

# Newton-Puiseux 求解：非有理边根的工作精度（十进制位数）与单个分支的扩展步数上限
PUISEUX_DIGITS = int(os.getenv("PUISEUX_DIGITS", "60"))
PUISEUX_MAX_STEPS = int(os.getenv("PUISEUX_MAX_STEPS", "64"))

# g 关于 f 的展开：减法步数预算
EXPANSION_MAX_STEPS = int(os.getenv("EXPANSION_MAX_STEPS", "64"))

# 依赖关系约化：全局步数上限 = DEPENDENCE_STEP_FACTOR * deg_y(f) * deg_y(g)
DEPENDENCE_STEP_FACTOR = int(os.getenv("DEPENDENCE_STEP_FACTOR", "10"))

# 语料库
CORPUS_SEED = int(os.getenv("CORPUS_SEED", "20240607"))
CORPUS_SIZE = int(os.getenv("CORPUS_SIZE", "25"))
