"""
工具包异常定义
所有模块的可预期错误都以 ToolkitError 抛出，编排层据此生成结构化错误
"""
from typing import Optional


class ToolkitError(Exception):
    """工具包可预期错误，stage 标记出错的处理阶段"""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def with_stage(self, stage: str) -> "ToolkitError":
        """返回带阶段标记的同类错误（已有阶段时保留原阶段）"""
        if self.stage is None:
            self.stage = stage
        return self

    def to_dict(self) -> dict:
        return {"stage": self.stage or "unknown", "message": self.message}


class PolySyntaxError(ToolkitError):
    """多项式表达式语法错误，offset 为出错位置的字节偏移"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})", stage="parse")
        self.offset = offset
