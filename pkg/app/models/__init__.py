"""
数据模型初始化
"""
from app.models import models
from app.models.models import AuditRecord
