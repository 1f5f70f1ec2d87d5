"""
数据库初始化
"""
import logging

from sqlalchemy import inspect

from app.database import Base, engine

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def init_database(bind=None):
    """
    初始化数据库：创建缺失的表

    参数:
        bind: 可选引擎，默认使用全局 engine
    """
    target = bind or engine
    try:
        # 注册模型
        from app.models import models  # noqa: F401

        existing = inspect(target).get_table_names()
        logger.info(f"发现数据库表: {existing}")
        Base.metadata.create_all(bind=target)
        logger.info("数据库表创建成功")
    except Exception as e:
        logger.error(f"数据库初始化失败: {e}")
        raise
