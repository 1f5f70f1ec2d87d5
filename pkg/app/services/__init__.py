"""
计算服务
"""
from app.services.toolkit_service import ToolkitService, parse_shift
