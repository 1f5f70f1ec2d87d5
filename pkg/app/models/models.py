"""
数据库模型
"""
import json
from datetime import datetime

from sqlalchemy import Boolean, Column, DateTime, Integer, String, Text

from app.database import Base


class AuditRecord(Base):
    """审计记录：一对 (f, g) 及其完整报告"""
    __tablename__ = "audit_records"

    id = Column(Integer, primary_key=True, index=True)
    name = Column(String(255), index=True, nullable=True)
    f = Column(Text)
    g = Column(Text)
    passed = Column(Boolean, default=False)
    error_count = Column(Integer, default=0)
    report_json = Column(Text)  # AuditResponse 的 JSON
    created_at = Column(DateTime, default=datetime.now)

    @property
    def report(self) -> dict:
        return json.loads(self.report_json) if self.report_json else {}
