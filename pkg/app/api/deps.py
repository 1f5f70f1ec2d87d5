"""
API 公共依赖与错误转换
"""
import logging
from typing import Callable, Optional, TypeVar

from fastapi import HTTPException

from app.cli.parser import parse_poly
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracPoly

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

T = TypeVar("T")


def parse_or_none(text: Optional[str]) -> Optional[FracPoly]:
    return None if text is None else parse_poly(text)


def run_request(stage: str, action: Callable[[], T]) -> T:
    """
    执行一次请求：ToolkitError 转为 400，其余异常转为 500

    参数:
        stage: 默认阶段标记
        action: 实际计算
    """
    try:
        return action()
    except HTTPException:
        raise
    except ToolkitError as e:
        logger.warning(f"{stage} 请求失败: {e.message}")
        raise HTTPException(status_code=400, detail=e.with_stage(stage).to_dict())
    except Exception as e:
        logger.error(f"{stage} 请求出现意外错误: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail={"stage": stage, "message": str(e)})
